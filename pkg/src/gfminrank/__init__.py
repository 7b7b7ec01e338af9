"""Minimum rank of graph-patterned symmetric matrices over finite fields."""

__version__ = "0.1.0"

from .errors import MinRankError  # noqa: E402
from .field import Field, make_field, parse_field  # noqa: E402
from .graph import Graph, parse_edge_list, parse_graph6, emit_graph6  # noqa: E402
from .linalg import FMatrix, rank  # noqa: E402
from .minrank import minrank, rank_le_search  # noqa: E402

__all__ = [
    "__version__", "MinRankError", "Field", "make_field", "parse_field", "Graph",
    "parse_edge_list", "parse_graph6", "emit_graph6", "FMatrix", "rank", "minrank",
    "rank_le_search",
]
