"""The Munn-tree engine: elements, products, inverses, normal forms.

An element is zero or a pair (tree, carrier) at one of three quotient levels:

* FREE       -- plain Munn trees: any finite lower set containing the full
                carrier path; no separation constraints.
* TOEPLITZ   -- trees are canonical (maximal members end positively) and the
                carrier's positive part lies in the tree; still no
                compatibility requirement.
* SEPARATED  -- additionally every tree member and the carrier are separated
                paths and the tree plus carrier closure is compatible; the
                product is zero when compatibility fails.

Equality of elements is structural equality of (canonical tree, carrier,
level); normal-form uniqueness makes this semantic equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .errors import (
    ActionDomainError,
    BudgetExceededError,
    LevelMismatchError,
    SgisError,
    WordError,
)
from .graph import SeparatedGraph
from .paths import (
    FreeGroupWord,
    Letter,
    Path,
    compose,
    letter_source,
    parse_tokens,
    path_inverse,
    path_key,
    path_range,
    positive_part,
    prefixes,
    render_path,
    to_free_word,
    vertex_path,
)
from .semilattice import (
    LowerSet,
    canonicalize,
    is_separated_compatible_family,
    lower_close_paths,
    lower_closure_unchecked,
    max_elements,
)


class Level(Enum):
    FREE = "free"
    TOEPLITZ = "toeplitz"
    SEPARATED = "separated"


class ZeroElement:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "0"


ZERO = ZeroElement()


@dataclass(frozen=True)
class Element:
    tree: LowerSet
    carrier: Path
    level: Level

    def __repr__(self) -> str:
        return f"<{render_element(None, self)}>"


def is_zero(a) -> bool:
    return a is ZERO


def _tree_of(graph: SeparatedGraph, paths: set[Path], base: str, level: Level) -> LowerSet:
    if level is Level.FREE:
        return lower_closure_unchecked(graph, paths, base=base)
    return canonicalize(graph, lower_closure_unchecked(graph, paths, base=base))


def make_element(graph: SeparatedGraph, tree_paths: Iterable[Path], carrier: Path, level: Level) -> Element:
    """Normalize and validate an element from raw tree data."""
    paths = lower_close_paths(tree_paths)
    paths.add(vertex_path(carrier.base))
    if level is Level.FREE:
        paths.update(prefixes(carrier))
    tree = _tree_of(graph, paths, carrier.base, level)
    el = Element(tree, carrier, level)
    _check_element(graph, el)
    return el


def _check_element(graph: SeparatedGraph, a: Element) -> None:
    anchor = a.carrier if a.level is Level.FREE else positive_part(a.carrier)
    if anchor not in a.tree.paths:
        raise SgisError(f"carrier anchor {anchor!r} missing from tree {a.tree!r}")
    if a.tree.base != a.carrier.base:
        raise SgisError("tree and carrier disagree on the source vertex")


def from_letter(graph: SeparatedGraph, atom: "str | Letter", level: Level) -> Element:
    """Generator images: a vertex, an edge, or an inverse edge."""
    if isinstance(atom, str):
        if atom not in graph.vertex_index:
            raise WordError(f"unknown vertex {atom!r}")
        v = vertex_path(atom)
        return Element(LowerSet(atom, (v,)), v, level)
    if atom.edge not in graph.edge_index:
        raise WordError(f"unknown edge {atom.edge!r}")
    src = letter_source(graph, atom)
    p = Path(src, (atom,))
    if not atom.inverse:
        tree = LowerSet(src, tuple(sorted((vertex_path(src), p), key=lambda q: path_key(graph, q))))
        return Element(tree, p, level)
    if level is Level.FREE:
        tree = LowerSet(src, tuple(sorted((vertex_path(src), p), key=lambda q: path_key(graph, q))))
        return Element(tree, p, level)
    return Element(LowerSet(src, (vertex_path(src),)), p, level)


def multiply(graph: SeparatedGraph, a, b):
    """Product of Munn trees; zero on range mismatch or (separated level)
    compatibility failure of the merged tree."""
    if a is ZERO or b is ZERO:
        return ZERO
    if a.level is not b.level:
        raise LevelMismatchError(f"{a.level} * {b.level}")
    if path_range(graph, a.carrier) != b.carrier.base:
        return ZERO
    carrier = compose(graph, a.carrier, b.carrier)
    if a.level is Level.FREE:
        moved = {compose(graph, a.carrier, t) for t in b.tree.paths}
        union = set(a.tree.paths) | moved
        tree = lower_closure_unchecked(graph, union, base=a.tree.base)
        return Element(tree, carrier, Level.FREE)

    left = set(a.tree.paths) | set(prefixes(a.carrier))
    right = set(b.tree.paths) | set(prefixes(b.carrier))
    union = left | {compose(graph, a.carrier, t) for t in right}
    if a.level is Level.SEPARATED and not is_separated_compatible_family(
        graph, tuple(union)
    ):
        return ZERO
    tree = canonicalize(graph, lower_closure_unchecked(graph, union, base=a.tree.base))
    el = Element(tree, carrier, a.level)
    _check_element(graph, el)
    return el


def inverse(graph: SeparatedGraph, a):
    if a is ZERO:
        return ZERO
    carrier_inv = path_inverse(graph, a.carrier)
    if a.level is Level.FREE:
        moved = {compose(graph, carrier_inv, t) for t in a.tree.paths}
        tree = lower_closure_unchecked(graph, moved, base=carrier_inv.base)
        return Element(tree, carrier_inv, Level.FREE)
    full = set(a.tree.paths) | set(prefixes(a.carrier))
    moved = {compose(graph, carrier_inv, t) for t in full}
    tree = canonicalize(
        graph, lower_closure_unchecked(graph, moved, base=carrier_inv.base)
    )
    el = Element(tree, carrier_inv, a.level)
    _check_element(graph, el)
    return el


def is_idempotent(a) -> bool:
    if a is ZERO:
        return True
    return not a.carrier.letters


def evaluate(graph: SeparatedGraph, atoms: Sequence["str | Letter"], level: Level = Level.SEPARATED):
    """Left fold of the product over generator images."""
    if not atoms:
        raise WordError("empty word")
    acc = from_letter(graph, atoms[0], level)
    for atom in atoms[1:]:
        acc = multiply(graph, acc, from_letter(graph, atom, level))
        if acc is ZERO:
            return ZERO
    return acc


def evaluate_tokens(graph: SeparatedGraph, text: str, level: Level = Level.SEPARATED):
    return evaluate(graph, parse_tokens(graph, text.split()), level)


def render_element(graph: SeparatedGraph | None, a) -> str:
    """`(p1)(p2)...(pn) | carrier` with tips sorted lexicographically."""
    if a is ZERO:
        return "0"
    tips = max_elements(a.tree)
    if graph is not None:
        tips = tuple(sorted(tips, key=lambda p: path_key(graph, p)))
    factors = "".join(f"({render_path(p)})" for p in tips)
    return f"{factors} | {render_path(a.carrier)}"


def normal_form(graph: SeparatedGraph, a) -> str:
    return render_element(graph, a)


def natural_leq(graph: SeparatedGraph, a, b) -> bool:
    """a <= b iff carriers agree and b's tree is contained in a's."""
    if a is ZERO:
        return True
    if b is ZERO:
        return False
    if a.level is not b.level:
        raise LevelMismatchError(f"{a.level} <= {b.level}")
    return a.carrier == b.carrier and set(b.tree.paths) <= set(a.tree.paths)


def grading(a) -> FreeGroupWord:
    """The free-group letter of an element; identity exactly on idempotents."""
    if a is ZERO:
        raise SgisError("the zero element carries no grading")
    return to_free_word(a.carrier)


# -- partial action on canonical trees ---------------------------------------


def action_domain_contains(graph: SeparatedGraph, g: Path, tree: LowerSet) -> bool:
    """Membership in the domain ideal indexed by g: the tree sits at the
    source of g and contains g's positive part."""
    return tree.base == g.base and positive_part(g) in tree.paths


def act_on_tree(graph: SeparatedGraph, g: Path, tree: LowerSet) -> LowerSet:
    """Translate a canonical tree by g; defined when the tree lies in the
    domain of the inverse direction."""
    g_inv = path_inverse(graph, g)
    if not action_domain_contains(graph, g_inv, tree):
        raise ActionDomainError(
            f"tree {tree!r} is outside the domain of translation by {g!r}"
        )
    full = set(tree.paths) | set(prefixes(g_inv))
    moved = {compose(graph, g, t) for t in full}
    return canonicalize(graph, lower_closure_unchecked(graph, moved, base=g.base))


# -- automorphisms ------------------------------------------------------------


@dataclass(frozen=True)
class GraphAutomorphism:
    vertex_map: tuple[tuple[str, str], ...]
    edge_map: tuple[tuple[str, str], ...]

    def vertex(self, v: str) -> str:
        return dict(self.vertex_map)[v]

    def edge(self, e: str) -> str:
        return dict(self.edge_map)[e]


def graph_automorphisms(
    graph: SeparatedGraph, budget: int = 10**6
) -> list[GraphAutomorphism]:
    """All pairs of bijections preserving source, range and the separation
    (blocks to blocks, cardinality flags included); brute force with a
    work budget."""
    results: list[GraphAutomorphism] = []
    n_checked = 0
    for perm in itertools.permutations(graph.vertices):
        vmap = dict(zip(graph.vertices, perm))
        n_checked += 1
        if n_checked > budget:
            raise BudgetExceededError(budget, "automorphism search")
        assignments = _edge_assignments(graph, vmap, budget)
        if assignments is None:
            continue
        for emap in assignments:
            results.append(
                GraphAutomorphism(
                    vertex_map=tuple(sorted(vmap.items())),
                    edge_map=tuple(sorted(emap.items())),
                )
            )
    results.sort(key=lambda a: (a.vertex_map, a.edge_map))
    return results


def _edge_assignments(graph, vmap, budget):
    """Per-block edge bijections consistent with a fixed vertex bijection."""
    block_choices: list[list[dict[str, str]]] = []
    for b in graph.blocks:
        targets = [
            c
            for c in graph.blocks_at[vmap[b.source]]
            if len(c.edges) == len(b.edges) and c.infinite == b.infinite
        ]
        maps_for_b: list[dict[str, str]] = []
        for c in targets:
            for image in itertools.permutations(c.edges):
                ok = all(
                    vmap[graph.range_of[e]] == graph.range_of[f]
                    for e, f in zip(b.edges, image)
                )
                if ok:
                    maps_for_b.append(dict(zip(b.edges, image)))
        if not maps_for_b:
            return None
        block_choices.append(maps_for_b)

    total = 1
    for choice in block_choices:
        total *= len(choice)
        if total > budget:
            raise BudgetExceededError(budget, "automorphism search")

    found: list[dict[str, str]] = []
    for combo in itertools.product(*block_choices):
        emap: dict[str, str] = {}
        clash = False
        used: set[str] = set()
        for part in combo:
            for e, f in part.items():
                if f in used:
                    clash = True
                    break
                used.add(f)
                emap[e] = f
            if clash:
                break
        if not clash and len(emap) == len(graph.edges):
            found.append(emap)
    return found


def apply_automorphism(graph: SeparatedGraph, phi: GraphAutomorphism, a):
    """Relabel every letter of the tree and the carrier."""
    if a is ZERO:
        return ZERO
    vmap = dict(phi.vertex_map)
    emap = dict(phi.edge_map)

    def move(p: Path) -> Path:
        return Path(vmap[p.base], tuple(Letter(emap[x.edge], x.inverse) for x in p.letters))

    tree = lower_closure_unchecked(
        graph, {move(p) for p in a.tree.paths}, base=vmap[a.tree.base]
    )
    el = Element(tree, move(a.carrier), a.level)
    _check_element(graph, el)
    return el
