"""Samplers and small enumerators shared across the test modules."""

from __future__ import annotations

import random

from sgis.graph import SeparatedGraph
from sgis.paths import (
    Letter,
    Path,
    compatible,
    path_range,
    vertex_path,
)
from sgis.semilattice import LowerSet, lower_close_paths, lower_closure


def composable_letter_words(graph: SeparatedGraph, max_len: int) -> list[list[Letter]]:
    """Every composable nonempty letter word of length <= max_len."""
    out: list[list[Letter]] = []
    for v in graph.vertices:
        frontier: list[tuple[str, list[Letter]]] = [(v, [])]
        for _ in range(max_len):
            nxt = []
            for at, word in frontier:
                for e in graph.out_edges[at]:
                    w = word + [Letter(e, False)]
                    out.append(w)
                    nxt.append((graph.range_of[e], w))
                for e in graph.in_edges[at]:
                    w = word + [Letter(e, True)]
                    out.append(w)
                    nxt.append((graph.source_of[e], w))
            frontier = nxt
    return out


def separated_paths(graph: SeparatedGraph, v: str, max_len: int) -> list[Path]:
    """All reduced separated paths from v of length <= max_len."""
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
                nxt.append(Path(v, p.letters + (Letter(e, False),)))
            for e in graph.in_edges[at]:
                if last is not None and last.edge == e and not last.inverse:
                    continue
                nxt.append(Path(v, p.letters + (Letter(e, True),)))
        out.extend(nxt)
        frontier = nxt
    return out


def random_separated_path(
    graph: SeparatedGraph, v: str, rng: random.Random, max_len: int
) -> Path:
    p = vertex_path(v)
    for _ in range(rng.randint(0, max_len)):
        at = path_range(graph, p)
        last = p.letters[-1] if p.letters else None
        options = []
        for e in graph.out_edges[at]:
            if last is not None and last.edge == e and last.inverse:
                continue
            if (
                last is not None
                and last.inverse
                and graph.block_of[last.edge] is graph.block_of[e]
            ):
                continue
            options.append(Letter(e, False))
        for e in graph.in_edges[at]:
            if last is not None and last.edge == e and not last.inverse:
                continue
            options.append(Letter(e, True))
        if not options:
            break
        p = Path(v, p.letters + (rng.choice(options),))
    return p


def random_lower_set(
    graph: SeparatedGraph,
    v: str,
    rng: random.Random,
    max_len: int = 4,
    tries: int = 6,
) -> LowerSet:
    """A random compatible lower set grown by rejection sampling."""
    chosen: list[Path] = [vertex_path(v)]
    for _ in range(tries):
        cand = random_separated_path(graph, v, rng, max_len)
        closed = lower_close_paths([cand])
        if all(compatible(graph, p, q) for p in closed for q in chosen):
            chosen.extend(closed)
    return lower_closure(graph, chosen)


def grow_maximal_truncation(
    graph: SeparatedGraph, v: str, depth: int, rng: random.Random
) -> set[Path]:
    """A random untrimmed ultrafilter window: below depth, every member gets
    one edge per block (the tail edge when forced) plus all inverse letters."""
    members: set[Path] = {vertex_path(v)}
    frontier = [vertex_path(v)]
    while frontier:
        g = frontier.pop()
        if len(g.letters) >= depth:
            continue
        at = path_range(graph, g)
        last = g.letters[-1] if g.letters else None
        for b in graph.blocks_at[at]:
            if last is not None and last.inverse and last.edge in b.edges:
                continue  # the tail already represents this block
            e = rng.choice(b.edges)
            q = Path(v, g.letters + (Letter(e, False),))
            if q not in members:
                members.add(q)
                frontier.append(q)
        for e in graph.in_edges[at]:
            if last is not None and not last.inverse and last.edge == e:
                continue  # would cancel back
            q = Path(v, g.letters + (Letter(e, True),))
            if q not in members:
                members.add(q)
                frontier.append(q)
    return members


def random_filter_truncation(
    graph: SeparatedGraph, v: str, depth: int, rng: random.Random
) -> set[Path]:
    """A random compatible lower set of depth `depth`, grown block by block
    with random skips; superset of {v}."""
    members: set[Path] = {vertex_path(v)}
    frontier = [vertex_path(v)]
    while frontier:
        g = frontier.pop()
        if len(g.letters) >= depth:
            continue
        at = path_range(graph, g)
        last = g.letters[-1] if g.letters else None
        for b in graph.blocks_at[at]:
            if last is not None and last.inverse and last.edge in b.edges:
                continue
            if rng.random() < 0.4:
                continue
            e = rng.choice(b.edges)
            q = Path(v, g.letters + (Letter(e, False),))
            if q not in members:
                members.add(q)
                frontier.append(q)
        for e in graph.in_edges[at]:
            if last is not None and not last.inverse and last.edge == e:
                continue
            if rng.random() < 0.4:
                continue
            q = Path(v, g.letters + (Letter(e, True),))
            if q not in members:
                members.add(q)
                frontier.append(q)
    return members


def distinct_elements(graph: SeparatedGraph, max_len: int, level):
    """Deduplicated engine values of every composable word up to max_len."""
    from sgis.semigroup import evaluate

    seen = {}
    for word in composable_letter_words(graph, max_len):
        el = evaluate(graph, word, level)
        seen.setdefault(el, word)
    return seen
