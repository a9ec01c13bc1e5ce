"""Exact computation in inverse semigroups of separated graphs.

The package decides the word problem through Munn trees and normal forms,
realizes the idempotent semilattice and its partial translation action,
certifies filter behaviour at bounded depth, and does exact rational
arithmetic in the associated path algebra, with independent oracles for
cross-validation.
"""

from .errors import (
    ActionDomainError,
    Budget,
    BudgetExceededError,
    CylinderError,
    GraphError,
    GraphParseError,
    IncompatiblePathsError,
    LevelMismatchError,
    SgisError,
    WordError,
)
from .graph import (
    Block,
    SeparatedGraph,
    free_separation,
    infinite_sources,
    is_finitely_separated,
    isolated_vertices,
    parse_graph,
    trivial_separation,
)
from .paths import Letter, Path, reduce_path, render_path, vertex_path
from .semigroup import ZERO, Element, Level, evaluate, inverse, multiply, normal_form
from .semilattice import LowerSet, canonicalize, lower_closure, meet

__version__ = "0.1.0"
