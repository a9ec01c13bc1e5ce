"""Reduced paths on the double graph and the combinatorics built on them.

A `Path` is a source vertex plus a composable sequence of letters (edges or
formal inverses).  Length-0 paths at different vertices are distinct values.
All functions are pure; the graph is passed explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import WordError
from .graph import SeparatedGraph


@dataclass(frozen=True)
class Letter:
    edge: str
    inverse: bool = False

    def __invert__(self) -> "Letter":
        return Letter(self.edge, not self.inverse)

    def __repr__(self) -> str:
        return f"~{self.edge}" if self.inverse else self.edge


@dataclass(frozen=True)
class Path:
    base: str
    letters: tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __repr__(self) -> str:
        return render_path(self)


FreeGroupWord = tuple[Letter, ...]


def letter_source(graph: SeparatedGraph, x: Letter) -> str:
    return graph.range_of[x.edge] if x.inverse else graph.source_of[x.edge]


def letter_range(graph: SeparatedGraph, x: Letter) -> str:
    return graph.source_of[x.edge] if x.inverse else graph.range_of[x.edge]


def path_range(graph: SeparatedGraph, p: Path) -> str:
    return letter_range(graph, p.letters[-1]) if p.letters else p.base


def vertex_path(v: str) -> Path:
    return Path(v, ())


def make_word(graph: SeparatedGraph, base: str, letters: Sequence[Letter]) -> Path:
    """Validated, possibly unreduced word: consecutive letters must compose."""
    if base not in graph.vertex_index:
        raise WordError(f"unknown vertex {base!r}")
    at = base
    for x in letters:
        if x.edge not in graph.edge_index:
            raise WordError(f"unknown edge {x.edge!r}")
        if letter_source(graph, x) != at:
            raise WordError(f"letter {x!r} does not compose at {at!r}")
        at = letter_range(graph, x)
    return Path(base, tuple(letters))


def reduce_letters(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for x in letters:
        if out and out[-1].edge == x.edge and out[-1].inverse != x.inverse:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def reduce_path(p: Path) -> Path:
    """Free reduction: cancel adjacent mutually inverse letters."""
    return Path(p.base, reduce_letters(p.letters))


def is_reduced(p: Path) -> bool:
    return all(
        not (a.edge == b.edge and a.inverse != b.inverse)
        for a, b in zip(p.letters, p.letters[1:])
    )


def star(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    """Formal reversal-inverse of a letter sequence."""
    return tuple(~x for x in reversed(letters))


def path_inverse(graph: SeparatedGraph, p: Path) -> Path:
    return Path(path_range(graph, p), star(p.letters))


def is_separated_path(graph: SeparatedGraph, p: Path) -> bool:
    """No factor e^{-1}f with e != f in one block (p assumed reduced)."""
    for a, b in zip(p.letters, p.letters[1:]):
        if (
            a.inverse
            and not b.inverse
            and a.edge != b.edge
            and graph.block_of[a.edge] is graph.block_of[b.edge]
        ):
            return False
    return True


def is_separated_string(graph: SeparatedGraph, p: Path) -> bool:
    """No factor e^{-1}f for ANY e, f in one block (e = f included)."""
    for a, b in zip(p.letters, p.letters[1:]):
        if (
            a.inverse
            and not b.inverse
            and graph.block_of[a.edge] is graph.block_of[b.edge]
        ):
            return False
    return True


def common_prefix_length(g: Path, h: Path) -> int:
    n = 0
    for a, b in zip(g.letters, h.letters):
        if a != b:
            break
        n += 1
    return n


def longest_common_prefix(g: Path, h: Path) -> Path:
    if g.base != h.base:
        raise WordError(f"paths start at {g.base!r} and {h.base!r}")
    return Path(g.base, g.letters[: common_prefix_length(g, h)])


def compatible(graph: SeparatedGraph, g: Path, h: Path) -> bool:
    """Largest-common-prefix criterion: the only obstruction is a divergence
    into two distinct edges of one block, both traversed positively."""
    if g.base != h.base:
        raise WordError(
            f"compatibility undefined across vertices {g.base!r}, {h.base!r}"
        )
    n = common_prefix_length(g, h)
    if n == len(g.letters) or n == len(h.letters):
        return True
    x, y = g.letters[n], h.letters[n]
    return (
        x.inverse
        or y.inverse
        or graph.block_of[x.edge] is not graph.block_of[y.edge]
    )


def compatible_by_reduction(graph: SeparatedGraph, g: Path, h: Path) -> bool:
    """Independent route: the reduced geodesic h^{-1}g must stay separated."""
    if g.base != h.base:
        raise WordError(
            f"compatibility undefined across vertices {g.base!r}, {h.base!r}"
        )
    geodesic = Path(path_range(graph, h), reduce_letters(star(h.letters) + g.letters))
    return is_separated_path(graph, geodesic)


def is_prefix(g: Path, h: Path) -> bool:
    return (
        g.base == h.base
        and len(g.letters) <= len(h.letters)
        and h.letters[: len(g.letters)] == g.letters
    )


def prefixes(p: Path) -> Iterator[Path]:
    for i in range(len(p.letters) + 1):
        yield Path(p.base, p.letters[:i])


def prefix_decompose(p: Path) -> tuple[Path, tuple[Letter, ...]]:
    """Split p = p0 * w with p0 not ending in an inverse letter and w a run of
    inverse letters; the decomposition is unique."""
    cut = len(p.letters)
    while cut > 0 and p.letters[cut - 1].inverse:
        cut -= 1
    return Path(p.base, p.letters[:cut]), p.letters[cut:]


def positive_part(p: Path) -> Path:
    return prefix_decompose(p)[0]


def compose(graph: SeparatedGraph, g: Path, h: Path) -> Path | None:
    """red(gh) in the fundamental groupoid; None when the ranges do not meet."""
    if path_range(graph, g) != h.base:
        return None
    return Path(g.base, reduce_letters(g.letters + h.letters))


def to_free_word(p: Path) -> FreeGroupWord:
    """Forget the vertex data (injective on each source component)."""
    return p.letters


def letter_key(graph: SeparatedGraph, x: Letter) -> tuple[int, int]:
    # positive letters before inverse ones; within a class, later-declared
    # edges first (this tiebreak pins the published rendering order)
    return (1 if x.inverse else 0, -graph.edge_index[x.edge])


def path_key(graph: SeparatedGraph, p: Path):
    """Length-lexicographic order; total on paths from a fixed vertex."""
    return (len(p.letters), tuple(letter_key(graph, x) for x in p.letters))


def path_sort_key(graph: SeparatedGraph, p: Path):
    return (graph.vertex_index[p.base],) + path_key(graph, p)


def render_letter(x: Letter) -> str:
    return f"~{x.edge}" if x.inverse else x.edge


def render_path(p: Path) -> str:
    if not p.letters:
        return p.base
    return " ".join(render_letter(x) for x in p.letters)


def render_free_word(w: FreeGroupWord, unit: str = "1") -> str:
    if not w:
        return unit
    return " ".join(render_letter(x) for x in w)


def parse_tokens(graph: SeparatedGraph, tokens: Sequence[str]) -> list[str | Letter]:
    """CLI word grammar: `e` positive, `~e` inverse, `v` a vertex.

    Composability is not required here; a non-composable sequence simply
    denotes the zero product downstream.
    """
    atoms: list[str | Letter] = []
    for tok in tokens:
        if tok.startswith("~"):
            name = tok[1:]
            if name not in graph.edge_index:
                raise WordError(f"unknown edge {name!r} in token {tok!r}")
            atoms.append(Letter(name, True))
        elif tok in graph.edge_index:
            atoms.append(Letter(tok, False))
        elif tok in graph.vertex_index:
            atoms.append(tok)
        else:
            raise WordError(f"unknown token {tok!r}")
    return atoms


def parse_word_string(graph: SeparatedGraph, text: str) -> list[str | Letter]:
    tokens = text.split()
    if not tokens:
        raise WordError("empty word")
    return parse_tokens(graph, tokens)


def word_from_atoms(
    graph: SeparatedGraph, atoms: Sequence[str | Letter]
) -> Path | None:
    """Assemble a composable word from CLI atoms; None when non-composable
    (the zero of the path semigroup).  Vertex atoms contribute no letters but
    must match the running vertex."""
    if not atoms:
        raise WordError("empty word")
    first = atoms[0]
    base = first if isinstance(first, str) else letter_source(graph, first)
    at = base
    letters: list[Letter] = []
    for a in atoms:
        if isinstance(a, str):
            if a != at:
                return None
            continue
        if letter_source(graph, a) != at:
            return None
        letters.append(a)
        at = letter_range(graph, a)
    return Path(base, tuple(letters))
