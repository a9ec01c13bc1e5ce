"""Exact arithmetic in the rational semigroup algebra on the normal-form basis.

An `AlgebraElement` is a finite map from nonzero separated-level elements to
nonzero rationals.  The involution is conjugate-linear extension of the
semigroup inverse; over the rationals the conjugation is trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import Budget, SgisError, WordError
from .graph import Block, SeparatedGraph
from .paths import (
    Letter,
    Path,
    compatible,
    compose,
    is_prefix,
    is_separated_path,
    path_key,
    path_range,
    path_sort_key,
    render_path,
    vertex_path,
)
from .semigroup import (
    ZERO,
    Element,
    Level,
    inverse,
    make_element,
    multiply,
    render_element,
)
from .semilattice import (
    LowerSet,
    canonicalize,
    lower_closure,
    lower_closure_unchecked,
    max_elements,
)
from .spectrum import branch_decompose

Scalar = Fraction


def element_sort_key(graph: SeparatedGraph, el: Element):
    return (
        path_sort_key(graph, el.carrier),
        len(el.tree.paths),
        tuple(path_sort_key(graph, p) for p in el.tree.paths),
    )


class AlgebraElement:
    """Finite rational combination of basis elements; immutable by convention."""

    __slots__ = ("graph", "terms")

    def __init__(self, graph: SeparatedGraph, terms: Mapping[Element, Fraction] | None = None):
        self.graph = graph
        clean: dict[Element, Fraction] = {}
        for el, c in (terms or {}).items():
            if el is ZERO:
                continue
            c = Fraction(c)
            if c != 0:
                clean[el] = clean.get(el, Fraction(0)) + c
        self.terms = {el: c for el, c in clean.items() if c != 0}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, graph: SeparatedGraph) -> "AlgebraElement":
        return cls(graph, {})

    @classmethod
    def of(cls, graph: SeparatedGraph, el, coeff: "Fraction | int" = 1) -> "AlgebraElement":
        if el is ZERO:
            return cls.zero(graph)
        return cls(graph, {el: Fraction(coeff)})

    # -- structure ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        acc = dict(self.terms)
        for el, c in other.terms.items():
            acc[el] = acc.get(el, Fraction(0)) + c
        return AlgebraElement(self.graph, acc)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.graph, {el: -c for el, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c: "Fraction | int") -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement(self.graph, {el: c * d for el, d in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        acc: dict[Element, Fraction] = {}
        for s, c in self.terms.items():
            for t, d in other.terms.items():
                st = multiply(self.graph, s, t)
                if st is ZERO:
                    continue
                acc[st] = acc.get(st, Fraction(0)) + c * d
        return AlgebraElement(self.graph, acc)

    def star(self) -> "AlgebraElement":
        return AlgebraElement(
            self.graph, {inverse(self.graph, el): c for el, c in self.terms.items()}
        )

    def is_idempotent(self) -> bool:
        return self * self == self

    def __repr__(self) -> str:
        return render_algebra_element(self.graph, self)


def render_algebra_element(graph: SeparatedGraph, a: AlgebraElement) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for el in sorted(a.terms, key=lambda e: element_sort_key(graph, e)):
        parts.append(f"{a.terms[el]}·[{render_element(graph, el)}]")
    return " + ".join(parts)


# -- distinguished idempotents -------------------------------------------------


def idempotent_of(graph: SeparatedGraph, I: LowerSet) -> AlgebraElement:
    """The basis idempotent whose tree is the canonical form of I."""
    tree = canonicalize(graph, I)
    el = Element(tree, vertex_path(tree.base), Level.SEPARATED)
    return AlgebraElement.of(graph, el)


def path_element(graph: SeparatedGraph, p: Path) -> AlgebraElement:
    """The image of a separated path as a single partial isometry."""
    if not is_separated_path(graph, p):
        raise WordError(f"{render_path(p)!r} is not a separated path")
    el = make_element(graph, [p], p, Level.SEPARATED)
    return AlgebraElement.of(graph, el)


def branch_gap(graph: SeparatedGraph, head: Path, tail_letters: Sequence[Letter]) -> AlgebraElement:
    """head*head^star minus the longer projection head.tail (tail an inverse
    run closed by one positive edge); the defect of one branch extension."""
    if not tail_letters or tail_letters[-1].inverse or not all(
        x.inverse for x in tail_letters[:-1]
    ):
        raise WordError("tail must be an inverse run closed by one positive edge")
    whole = compose(graph, head, Path(path_range(graph, head), tuple(tail_letters)))
    if whole is None or len(whole.letters) != len(head.letters) + len(tail_letters):
        raise WordError("tail does not extend the head reducedly")
    if not is_separated_path(graph, whole):
        raise WordError("extended path is not separated")
    return idempotent_of(graph, lower_closure(graph, [head])) - idempotent_of(
        graph, lower_closure(graph, [whole])
    )


def cylinder_idempotent(graph: SeparatedGraph, B) -> AlgebraElement:
    """Product of the tree idempotent with one branch-gap factor per excluded
    path."""
    acc = idempotent_of(graph, B.tree)
    for f in B.excluded:
        k = branch_decompose(B.tree, f)
        head = Path(f.base, f.letters[:k])
        acc = acc * branch_gap(graph, head, f.letters[k:])
    return acc


def block_complement(graph: SeparatedGraph, block: Block) -> AlgebraElement:
    """v minus the sum of the range projections of a finite block."""
    if block.infinite:
        raise SgisError(f"block {block.name!r} is infinite; its complement is not an element")
    v = AlgebraElement.of(
        graph,
        Element(
            LowerSet(block.source, (vertex_path(block.source),)),
            vertex_path(block.source),
            Level.SEPARATED,
        ),
    )
    acc = v
    for e in block.edges:
        p = Path(block.source, (Letter(e, False),))
        acc = acc - idempotent_of(graph, lower_closure(graph, [p]))
    return acc


def or_join(p: AlgebraElement, q: AlgebraElement) -> AlgebraElement:
    """p + q - pq on commuting idempotents."""
    if p.graph is not q.graph:
        raise SgisError("operands live over different graphs")
    if p * q != q * p:
        raise SgisError("or_join requires commuting idempotents")
    if not p.is_idempotent() or not q.is_idempotent():
        raise SgisError("or_join requires idempotent operands")
    return p + q - p * q


def or_join_family(terms: Sequence[AlgebraElement]) -> AlgebraElement:
    if not terms:
        raise SgisError("empty join")
    acc = terms[0]
    for t in terms[1:]:
        acc = or_join(acc, t)
    return acc


# -- covers --------------------------------------------------------------------


@dataclass(frozen=True)
class CoverVerdict:
    counterexample: LowerSet | None
    max_len: int

    @property
    def covered(self) -> bool:
        return self.counterexample is None

    def render(self) -> str:
        if self.covered:
            return f"no counterexample up to max-len={self.max_len}"
        return f"counterexample {self.counterexample!r}"


def separated_paths_upto(graph: SeparatedGraph, v: str, max_len: int, budget: Budget) -> list[Path]:
    out = [vertex_path(v)]
    frontier = [vertex_path(v)]
    while frontier:
        nxt = []
        for p in frontier:
            if len(p.letters) >= max_len:
                continue
            at = path_range(graph, p)
            last = p.letters[-1] if p.letters else None
            for e in graph.out_edges[at]:
                if last is not None and last.edge == e and last.inverse:
                    continue
                if (
                    last is not None
                    and last.inverse
                    and graph.block_of[last.edge] is graph.block_of[e]
                ):
                    continue
                budget.spend()
                nxt.append(Path(v, p.letters + (Letter(e, False),)))
            for e in graph.in_edges[at]:
                if last is not None and last.edge == e and not last.inverse:
                    continue
                budget.spend()
                nxt.append(Path(v, p.letters + (Letter(e, True),)))
        out.extend(nxt)
        frontier = nxt
    return out


def bounded_cover_check(
    graph: SeparatedGraph,
    I: LowerSet,
    covering: Sequence[LowerSet],
    max_len: int,
    budget: Budget | None = None,
) -> CoverVerdict:
    """Semi-decision: search for a canonical extension of I (paths up to
    max_len) incompatible with every covering tree.

    A counterexample exists iff a pairwise-compatible selection of witness
    paths does, one killing each covering tree, so the search runs over
    witness tuples rather than over all canonical extensions.
    """
    budget = budget or Budget(context="cover counterexample search")
    for Z in covering:
        if not set(I.paths) <= set(Z.paths):
            raise SgisError("covering trees must extend the covered tree")
    if not covering:
        raise SgisError("empty covering family")

    paths = separated_paths_upto(graph, I.base, max_len, budget)
    tips = max_elements(I)

    def kills(p: Path, Z: LowerSet) -> bool:
        return any(not compatible(graph, p, q) for q in Z.paths)

    candidates = [
        p
        for p in paths
        if all(compatible(graph, p, t) for t in tips)
        and any(kills(p, Z) for Z in covering)
    ]

    def search(chosen: list[Path]) -> list[Path] | None:
        budget.spend()
        pending = [Z for Z in covering if not any(kills(p, Z) for p in chosen)]
        if not pending:
            return list(chosen)
        target = pending[0]
        for p in candidates:
            if not kills(p, target):
                continue
            if all(compatible(graph, p, q) for q in chosen):
                hit = search(chosen + [p])
                if hit is not None:
                    return hit
        return None

    witness = search([])
    if witness is None:
        return CoverVerdict(None, max_len)
    J = canonicalize(graph, lower_closure(graph, list(I.paths) + witness))
    return CoverVerdict(J, max_len)


def cover_witness(graph: SeparatedGraph, J: LowerSet, block: Block) -> str:
    """An edge of the block compatible with J: the first letter of a maximal
    member when it lies in the block, else the block's first edge."""
    if J.base != block.source:
        raise SgisError("tree and block live at different vertices")
    pick = None
    for m in max_elements(J):
        if m.letters and not m.letters[0].inverse and m.letters[0].edge in block.edges:
            pick = m.letters[0].edge
            break
    if pick is None:
        pick = block.edges[0]
    probe = Path(J.base, (Letter(pick, False),))
    if not all(compatible(graph, probe, q) for q in max_elements(J)):
        raise SgisError(f"witness {pick!r} fails compatibility with {J!r}")
    return pick


def cover_refinement_check(
    graph: SeparatedGraph,
    I: LowerSet,
    head: Path,
    run: Sequence[Letter],
    block: Block,
) -> bool:
    """Exact identity: e(I) * sum_f (head.run.f)(head.run.f)* equals the sum
    of e(I u {head.run.f}) over the edges f of a finite block.

    Preconditions: head is a member of I, run is an inverse-letter word, each
    extended path is separated, lies outside I, and is compatible with I.
    """
    if block.infinite:
        raise SgisError("refinement requires a finite block")
    if head not in I.paths:
        raise SgisError("head must be a member of the tree")
    if any(not x.inverse for x in run):
        raise SgisError("run must consist of inverse letters")
    extended: list[Path] = []
    for e in block.edges:
        tail = tuple(run) + (Letter(e, False),)
        whole = compose(graph, head, Path(path_range(graph, head), tail))
        if whole is None or len(whole.letters) != len(head.letters) + len(tail):
            raise SgisError("run does not extend the head reducedly")
        if not is_separated_path(graph, whole):
            raise SgisError(f"extension {render_path(whole)!r} is not separated")
        if whole in I.paths:
            raise SgisError(f"extension {render_path(whole)!r} already lies in the tree")
        if not all(compatible(graph, whole, m) for m in max_elements(I)):
            raise SgisError(f"extension {render_path(whole)!r} is incompatible with the tree")
        extended.append(whole)

    lhs_sum = AlgebraElement.zero(graph)
    for w in extended:
        pe = path_element(graph, w)
        lhs_sum = lhs_sum + pe * pe.star()
    lhs = idempotent_of(graph, I) * lhs_sum
    rhs = AlgebraElement.zero(graph)
    for w in extended:
        rhs = rhs + idempotent_of(graph, lower_closure(graph, list(I.paths) + [w]))
    return lhs == rhs


# -- basis enumeration -----------------------------------------------------------


def _positive_tips_upto(graph: SeparatedGraph, v: str, max_len: int, budget: Budget) -> list[Path]:
    return [
        p
        for p in separated_paths_upto(graph, v, max_len, budget)
        if p.letters and not p.letters[-1].inverse
    ]


def _canonical_trees_upto(graph: SeparatedGraph, v: str, max_len: int, budget: Budget) -> list[LowerSet]:
    """All canonical compatible trees at v whose paths have length <= max_len,
    by depth-first search over compatible antichains of positive tips."""
    tips = sorted(_positive_tips_upto(graph, v, max_len, budget), key=lambda p: path_key(graph, p))
    trees: list[LowerSet] = []

    def extend(start: int, chosen: list[Path]) -> None:
        budget.spend()
        trees.append(lower_closure_unchecked(graph, chosen, base=v))
        for j in range(start, len(tips)):
            p = tips[j]
            ok = all(
                not is_prefix(p, q) and not is_prefix(q, p) and compatible(graph, p, q)
                for q in chosen
            )
            if ok:
                extend(j + 1, chosen + [p])

    extend(0, [])
    return trees


def _carriers_for(graph: SeparatedGraph, tree: LowerSet, max_len: int, budget: Budget) -> list[Path]:
    """Carriers anchored in the tree: inverse-run extensions of members that
    do not end in an inverse letter."""
    anchors = [p for p in tree.paths if not p.letters or not p.letters[-1].inverse]
    out: list[Path] = []
    for a in anchors:
        frontier = [a]
        while frontier:
            p = frontier.pop()
            budget.spend()
            out.append(p)
            if len(p.letters) >= max_len:
                continue
            at = path_range(graph, p)
            last = p.letters[-1] if p.letters else None
            for e in graph.in_edges[at]:
                if last is not None and last.edge == e and not last.inverse:
                    continue
                frontier.append(Path(a.base, p.letters + (Letter(e, True),)))
    return sorted(set(out), key=lambda p: path_key(graph, p))


def enumerate_basis(
    graph: SeparatedGraph, max_len: int, budget: Budget | None = None
) -> list[Element]:
    """All nonzero separated-level elements whose tree paths and carrier have
    length <= max_len, in deterministic order."""
    budget = budget or Budget(context="basis enumeration")
    out: list[Element] = []
    for v in graph.vertices:
        for tree in _canonical_trees_upto(graph, v, max_len, budget):
            for carrier in _carriers_for(graph, tree, max_len, budget):
                out.append(Element(tree, carrier, Level.SEPARATED))
    out.sort(key=lambda e: element_sort_key(graph, e))
    return out
