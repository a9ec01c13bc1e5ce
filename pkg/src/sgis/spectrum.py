"""Filter combinatorics at bounded depth: local configurations, certificates
for maximal / finite-maximal behaviour, and the Boolean algebra of basic
open sets Z(I \\ F).

Infinite filters are never materialized: every statement is a certificate
quantified over members shorter than a stated depth.  For blocks flagged
infinite, maximality quantifies over the named edges only and the
certificate records that caveat.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import Budget, CylinderError, SgisError
from .graph import Block, SeparatedGraph
from .paths import (
    Letter,
    Path,
    compatible,
    is_prefix,
    is_separated_path,
    path_key,
    path_range,
    render_path,
)
from .semilattice import (
    LowerSet,
    canonicalize,
    config_letters_at,
    is_canonical,
    lower_closure,
    max_elements,
)


@dataclass(frozen=True)
class LocalConfig:
    at: str
    letters: frozenset[Letter]
    tail: Letter | None = None


@dataclass(frozen=True)
class Truncation:
    """A finite window onto a (possibly infinite) filter: a compatible lower
    set plus the depth below which its statements are certified."""

    paths: LowerSet
    depth: int

    @property
    def base(self) -> str:
        return self.paths.base


@dataclass(frozen=True)
class Certificate:
    kind: str
    passed: bool
    depth: int
    witness: Path | None = None
    caveats: tuple[str, ...] = ()

    def render(self) -> str:
        if self.passed:
            return f"PASS depth={self.depth}"
        return f"FAIL witness={render_path(self.witness)}"


def make_truncation(graph: SeparatedGraph, paths: Iterable[Path], depth: int) -> Truncation:
    from .graph import isolated_vertices

    closed = lower_closure(graph, paths)
    if closed.base in isolated_vertices(graph):
        raise SgisError(f"vertex {closed.base!r} is isolated; no spectrum there")
    return Truncation(closed, depth)


def local_configuration(graph: SeparatedGraph, Z: LowerSet, g: Path) -> LocalConfig | None:
    """Extension letters of g inside Z; None marks the empty configuration."""
    if g not in Z.paths:
        raise SgisError(f"{render_path(g)!r} is not a member of the set")
    letters = config_letters_at(graph, set(Z.paths), g)
    if not letters:
        return None
    at = path_range(graph, g)
    tail = ~g.letters[-1] if g.letters else None
    return LocalConfig(at=at, letters=frozenset(letters), tail=tail)


def is_admissible(graph: SeparatedGraph, config: LocalConfig) -> bool:
    """At most one positive letter per block."""
    seen: set[str] = set()
    for x in config.letters:
        if x.inverse:
            continue
        name = graph.block_of[x.edge].name
        if name in seen:
            return False
        seen.add(name)
    return True


def _covers_blocks(graph: SeparatedGraph, config_letters: frozenset[Letter], blocks: Sequence[Block]) -> bool:
    present = {graph.block_of[x.edge].name for x in config_letters if not x.inverse}
    return all(b.name in present for b in blocks)


def _has_all_inverse(graph: SeparatedGraph, at: str, config_letters: frozenset[Letter]) -> bool:
    return all(Letter(e, True) in config_letters for e in graph.in_edges[at])


def is_maximal_config(graph: SeparatedGraph, config: LocalConfig) -> bool:
    """Admissible, one positive letter per block (named edges; infinite
    blocks included) and every incoming inverse letter."""
    return (
        is_admissible(graph, config)
        and _covers_blocks(graph, config.letters, graph.blocks_at[config.at])
        and _has_all_inverse(graph, config.at, config.letters)
    )


def is_finite_maximal_config(graph: SeparatedGraph, config: LocalConfig) -> bool:
    """Admissible, one positive letter per finite block, every incoming
    inverse letter; infinite blocks are exempt."""
    finite_blocks = [b for b in graph.blocks_at[config.at] if not b.infinite]
    return (
        is_admissible(graph, config)
        and _covers_blocks(graph, config.letters, finite_blocks)
        and _has_all_inverse(graph, config.at, config.letters)
    )


def _certify(graph: SeparatedGraph, Z: Truncation, kind: str) -> Certificate:
    """Shared body of the two certificates, on the untrimmed picture."""
    finite_only = kind == "tight"
    caveats = []
    if any(b.infinite for b in graph.blocks):
        caveats.append("infinite blocks quantified over named edges only")
    for g in Z.paths.paths:
        if len(g.letters) >= Z.depth:
            continue
        at = path_range(graph, g)
        blocks = graph.blocks_at[at]
        if finite_only:
            blocks = [b for b in blocks if not b.infinite]
        cfg = local_configuration(graph, Z.paths, g)
        letters = cfg.letters if cfg is not None else frozenset()
        probe = LocalConfig(at=at, letters=letters, tail=None)
        ok = (
            is_admissible(graph, probe)
            and _covers_blocks(graph, letters, blocks)
            and _has_all_inverse(graph, at, letters)
        )
        if not ok:
            return Certificate(kind, False, Z.depth, witness=g, caveats=tuple(caveats))
    return Certificate(kind, True, Z.depth, caveats=tuple(caveats))


def certify_maximal(graph: SeparatedGraph, Z: Truncation) -> Certificate:
    """Every member below depth must see one edge per block plus all
    incoming inverse letters (the untrimmed ultrafilter picture)."""
    return _certify(graph, Z, "ultra")


def certify_finite_maximal(graph: SeparatedGraph, Z: Truncation) -> Certificate:
    """Like certify_maximal but only finite blocks need a representative."""
    return _certify(graph, Z, "tight")


def trim_inverse_tails(graph: SeparatedGraph, Z: Truncation) -> Truncation:
    """Drop members ending in an inverse letter with no positively-ending
    extension inside the truncation (the passage from the untrimmed picture
    to the filter itself)."""
    members = set(Z.paths.paths)
    keep = set()
    for g in members:
        if not g.letters or not g.letters[-1].inverse:
            keep.add(g)
            continue
        if any(
            h != g and is_prefix(g, h) and h.letters and not h.letters[-1].inverse
            for h in members
        ):
            keep.add(g)
    pruned = sorted(keep, key=lambda p: path_key(graph, p))
    return Truncation(LowerSet(Z.base, tuple(pruned)), Z.depth)


def extend_inverse_tails(graph: SeparatedGraph, Z: Truncation, depth: int) -> Truncation:
    """Adjoin every inverse-letter extension g x1^-1...xn^-1 (first step
    leaving the set) up to the depth bound; inverse to trimming below depth."""
    members = set(Z.paths.paths)
    new: set[Path] = set()
    for g in members:
        frontier = [g]
        first = True
        while frontier:
            nxt = []
            for p in frontier:
                if len(p.letters) >= depth:
                    continue
                at = path_range(graph, p)
                last = p.letters[-1] if p.letters else None
                for e in graph.in_edges[at]:
                    if last is not None and last.edge == e and not last.inverse:
                        continue  # would cancel
                    q = Path(p.base, p.letters + (Letter(e, True),))
                    if first and q in members:
                        continue
                    if q in new:
                        continue
                    new.add(q)
                    nxt.append(q)
            frontier = nxt
            first = False
    merged = sorted(members | new, key=lambda p: path_key(graph, p))
    return Truncation(LowerSet(Z.base, tuple(merged)), depth)


# -- the basic open sets Z(I \ F) ---------------------------------------------


@dataclass(frozen=True)
class Cylinder:
    """Filters containing `tree` and avoiding each member of `excluded`."""

    tree: LowerSet
    excluded: tuple[Path, ...] = ()

    def __repr__(self) -> str:
        return render_cylinder(self)


def render_cylinder(B: Cylinder) -> str:
    inside = ", ".join(render_path(p) for p in B.tree.paths)
    outside = ", ".join(render_path(p) for p in B.excluded)
    return f"Z({{{inside}}} \\ {{{outside}}})"


def branch_shape(p: Path, start: int) -> bool:
    """letters[start:] must be an inverse run followed by one positive edge."""
    tail = p.letters[start:]
    return bool(tail) and not tail[-1].inverse and all(x.inverse for x in tail[:-1])


def branch_decompose(I: LowerSet, f: Path) -> int | None:
    """Length of the longest prefix of f inside I, or None if f's base is
    elsewhere."""
    if f.base != I.base:
        return None
    best = None
    for k in range(len(f.letters) + 1):
        if Path(f.base, f.letters[: k]) in I.paths:
            best = k
    return best


def is_branch_extension(graph: SeparatedGraph, I: LowerSet, f: Path) -> bool:
    """Membership in the one-step extension family of I: the part of f after
    its longest prefix in I is an inverse run ending in a single positive
    edge, and adjoining f keeps the tree canonical and compatible."""
    if f.base != I.base or f in I.paths or not is_separated_path(graph, f):
        return False
    k = branch_decompose(I, f)
    if k is None:
        return False
    if not branch_shape(f, k):
        return False
    return all(compatible(graph, f, m) for m in max_elements(I))


def make_cylinder(graph: SeparatedGraph, I: LowerSet, excluded: Iterable[Path]) -> Cylinder:
    if not is_canonical(I):
        raise CylinderError(f"tree {I!r} is not canonical")
    exc = sorted(set(excluded), key=lambda p: path_key(graph, p))
    for f in exc:
        if not is_branch_extension(graph, I, f):
            raise CylinderError(
                f"{render_path(f)!r} is not a one-step branch extension of {I!r}"
            )
    return Cylinder(I, tuple(exc))


def branch_extensions(
    graph: SeparatedGraph, I: LowerSet, max_len: int, budget: Budget | None = None
) -> list[Path]:
    """All one-step extensions of I with length <= max_len."""
    budget = budget or Budget(context="branch extension enumeration")
    found: list[Path] = []
    tips = max_elements(I)
    for g in I.paths:
        runs = [g]
        while runs:
            p = runs.pop()
            budget.spend()
            at = path_range(graph, p)
            last = p.letters[-1] if p.letters else None
            # close the run with a positive edge
            if len(p.letters) < max_len:
                for e in graph.out_edges[at]:
                    if last is not None and last.edge == e and last.inverse:
                        continue  # cancels
                    if (
                        last is not None
                        and last.inverse
                        and graph.block_of[last.edge] is graph.block_of[e]
                    ):
                        continue  # not separated
                    w = Path(g.base, p.letters + (Letter(e, False),))
                    first_new = Path(g.base, w.letters[: len(g.letters) + 1])
                    if first_new in I.paths:
                        continue
                    if all(compatible(graph, w, m) for m in tips):
                        found.append(w)
            # grow the inverse run
            if len(p.letters) + 1 < max_len:
                for e in graph.in_edges[at]:
                    if last is not None and last.edge == e and not last.inverse:
                        continue  # cancels
                    q = Path(g.base, p.letters + (Letter(e, True),))
                    if len(q.letters) == len(g.letters) + 1 and q in I.paths:
                        continue  # first step must leave I
                    runs.append(q)
    uniq = sorted(set(found), key=lambda p: path_key(graph, p))
    return [f for f in uniq if is_branch_extension(graph, I, f)]


def cylinder_member(graph: SeparatedGraph, Z: Truncation, B: Cylinder) -> bool:
    longest = max(
        [len(p.letters) for p in B.tree.paths] + [len(p.letters) for p in B.excluded]
    )
    if Z.depth <= longest:
        raise SgisError(
            f"truncation depth {Z.depth} does not certify membership for "
            f"paths of length {longest}"
        )
    if Z.base != B.tree.base:
        return False
    members = set(Z.paths.paths)
    return set(B.tree.paths) <= members and not members.intersection(B.excluded)


def cylinder_intersect(graph: SeparatedGraph, B1: Cylinder, B2: Cylinder) -> Cylinder | None:
    """Z(I1\\F1) n Z(I2\\F2) = Z(I1 u I2 \\ F1 u F2), with the early exits:
    incompatible union, or an excluded path forced inside.  Constraints made
    vacuous by incompatibility with the union are dropped."""
    if B1.tree.base != B2.tree.base:
        return None
    union = set(B1.tree.paths) | set(B2.tree.paths)
    for p in B1.tree.paths:
        for q in B2.tree.paths:
            if not compatible(graph, p, q):
                return None
    J = LowerSet(B1.tree.base, tuple(sorted(union, key=lambda p: path_key(graph, p))))
    kept = []
    for f in set(B1.excluded) | set(B2.excluded):
        if f in union:
            return None
        if is_branch_extension(graph, J, f):
            kept.append(f)
        # otherwise f is incompatible with J and excluded automatically
    return make_cylinder(graph, J, kept)


def _segment_split(h: Path, start: int) -> list[int]:
    """Cut positions after each positive letter of h.letters[start:]."""
    cuts = []
    for i in range(start, len(h.letters)):
        if not h.letters[i].inverse:
            cuts.append(i + 1)
    return cuts


def cylinder_difference(graph: SeparatedGraph, B1: Cylinder, B2: Cylinder) -> list[Cylinder]:
    """B1 \\ B2 as a finite disjoint union of basic sets.

    Index families: for every maximal member of I2 outside I1, walk its
    segment ladder below the top rung and exclude the next rung; on top of
    that, for every eligible subset H of F2 \\ F1, force H inside and
    exclude the still-active constraints from F1 u F2.
    """
    if B1.tree.base != B2.tree.base:
        return [B1]
    if cylinder_intersect(graph, B1, B2) is None:
        return [B1]

    I1, F1 = B1.tree, set(B1.excluded)
    I2, F2 = B2.tree, set(B2.excluded)
    out: list[Cylinder] = []

    missing = [h for h in max_elements(I2) if h not in I1.paths]
    missing.sort(key=lambda p: path_key(graph, p))
    ladders: list[list[Path]] = []
    for h in missing:
        k = branch_decompose(I1, h)
        rungs = [Path(h.base, h.letters[:c]) for c in _segment_split(h, k)]
        ladders.append(rungs)

    if missing:
        index_ranges = [range(len(r) + 1) for r in ladders]
        for choice in itertools.product(*index_ranges):
            if all(i == len(r) for i, r in zip(choice, ladders)):
                continue  # the all-top tuple reproduces B1 n Z(I2)
            tree_paths = set(I1.paths)
            forced_next: list[Path] = []
            for i, rungs in zip(choice, ladders):
                if i > 0:
                    tree_paths.update(
                        Path(rungs[i - 1].base, rungs[i - 1].letters[:j])
                        for j in range(len(rungs[i - 1].letters) + 1)
                    )
                if i < len(rungs):
                    forced_next.append(rungs[i])
            In = canonicalize(
                graph,
                LowerSet(
                    I1.base,
                    tuple(sorted(tree_paths, key=lambda p: path_key(graph, p))),
                ),
            )
            if any(f in In.paths for f in forced_next):
                # ladders sharing a rung: the exclusion is forced inside the
                # tree, so this index tuple names the empty set
                continue
            Fn = [f for f in F1 if is_branch_extension(graph, In, f)]
            Fn += [f for f in forced_next if is_branch_extension(graph, In, f)]
            out.append(make_cylinder(graph, In, Fn))

    candidates = sorted(F2 - F1, key=lambda p: path_key(graph, p))
    for r in range(1, len(candidates) + 1):
        for H in itertools.combinations(candidates, r):
            pool = set(I1.paths) | set(I2.paths)
            for h in H:
                pool.update(Path(h.base, h.letters[:j]) for j in range(len(h.letters) + 1))
            ok = True
            listed = sorted(pool, key=lambda p: path_key(graph, p))
            for i, p in enumerate(listed):
                for q in listed[i + 1 :]:
                    if not compatible(graph, p, q):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            JH = LowerSet(I1.base, tuple(listed))
            if not is_canonical(JH):
                continue
            FH = [f for f in (F1 | F2) if is_branch_extension(graph, JH, f)]
            out.append(make_cylinder(graph, JH, FH))
    return out
