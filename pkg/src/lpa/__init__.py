"""Invariants, moves, and exact symbolic checks for graph algebras."""

from .graphs import (Graph, GraphError, SpiReport, builtin, builtin_names,
                     graph_isomorphic, is_spi, parse_graph, render_graph,
                     supports_two_return_paths)
from .k0 import (K0Element, PointedAbelianGroup, graph_determinant,
                 has_trivial_k_theory, k0_presentation, pointed_iso_exists)
from .matrices import IntMatrix, determinant, smith_normal_form
from .moves import (MoveError, add_source, apply_move_with_report, cohn_graph,
                    cuntz_splice, double_cuntz_splice)
from .cohn import (AlgebraContext, Element, check_relative_family, edge,
                   format_element, ghost, normalize, unit, vertex)
from .exprs import ParseError, parse_expression
from .classify import compare, invariants, reduction_chain, sign_question_instance

__all__ = [name for name in dir() if not name.startswith("_")]
