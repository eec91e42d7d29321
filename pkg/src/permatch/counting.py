"""Exact counts of permutations, derangements, and perfect matchings on graphs.

A permutation on a graph maps every non-fixed vertex along a present arc; a
derangement additionally has no fixed point. Counts reduce to permanents of
the 0/1 models built in :mod:`permatch.graphs`; enumeration routines are kept
independent of the permanent code so the two can cross-check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    BadParamsError,
    NotDerangementError,
    NotOnGraphError,
    NotPerfectMatchingError,
    TooLargeError,
)
from .graphs import (
    BipartiteGraph,
    Digraph,
    Matching,
    UndirectedGraph,
    bits_of,
    derangement_model,
    permutation_model,
)
from .permanent import permanent_zero_one, permanent_ryser

ENUM_LIMIT = 10
MATCH_ENUM_LIMIT = 12
GENERAL_MATCH_LIMIT = 24

Permutation = tuple[int, ...]


def as_digraph(g: Digraph | UndirectedGraph) -> Digraph:
    if isinstance(g, UndirectedGraph):
        return g.base
    if isinstance(g, Digraph):
        return g
    raise BadParamsError(
        f"expected a directed or undirected graph, got {type(g).__name__}"
        " (bipartite graphs flatten via .to_graph())"
    )


# ---------------------------------------------------------------------------
# permutations on a digraph


def count_derangements(g: Digraph | UndirectedGraph) -> int:
    b = derangement_model(as_digraph(g))
    return permanent_zero_one(b.biadj, b.nl)


def count_permutations(g: Digraph | UndirectedGraph) -> int:
    b = permutation_model(as_digraph(g))
    return permanent_zero_one(b.biadj, b.nl)


def dp_ratio(g: Digraph | UndirectedGraph) -> Fraction:
    """Derangements over permutations; well-defined since the identity always counts."""
    return Fraction(count_derangements(g), count_permutations(g))


def enumerate_permutations(
    g: Digraph | UndirectedGraph, derangements_only: bool = False
) -> Iterator[Permutation]:
    """All permutations on g in lexicographic order (as image tuples)."""
    dg = as_digraph(g)
    n = dg.n
    if n > ENUM_LIMIT:
        raise TooLargeError(f"permutation enumeration capped at n={ENUM_LIMIT}, got {n}")
    allowed = [row | (0 if derangements_only else 1 << i) for i, row in enumerate(dg.rows)]
    image = [0] * n

    def rec(i: int, used: int) -> Iterator[Permutation]:
        if i == n:
            yield tuple(image)
            return
        for j in bits_of(allowed[i] & ~used):
            image[i] = j
            yield from rec(i + 1, used | 1 << j)

    return rec(0, 0)


def is_derangement(sigma: Sequence[int]) -> bool:
    return all(i != x for i, x in enumerate(sigma))


def fixed_points(sigma: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, x in enumerate(sigma) if i == x)


def check_permutation_on_graph(
    g: Digraph | UndirectedGraph, sigma: Sequence[int], require_derangement: bool = False
) -> Permutation:
    """Validate that sigma is a permutation moving along arcs of g; returns it as a tuple."""
    dg = as_digraph(g)
    sigma = tuple(sigma)
    if len(sigma) != dg.n or sorted(sigma) != list(range(dg.n)):
        raise BadParamsError(f"{sigma!r} is not a permutation of 0..{dg.n - 1}")
    for v, w in enumerate(sigma):
        if v == w:
            if require_derangement:
                raise NotDerangementError(f"vertex {v} is fixed")
        elif not dg.has_arc(v, w):
            raise NotOnGraphError(f"permutation uses missing arc ({v}, {w})")
    return sigma


def parse_permutation(text: str, n: int) -> Permutation:
    """Parse the comma-separated image list, e.g. "1,2,0"."""
    try:
        sigma = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise BadParamsError(f"permutation must be comma-separated integers, got {text!r}") from None
    if len(sigma) != n or sorted(sigma) != list(range(n)):
        raise BadParamsError(f"{text!r} is not a permutation of 0..{n - 1}")
    return sigma


def format_permutation(sigma: Sequence[int]) -> str:
    return ",".join(str(x) for x in sigma)


def is_directed_cycle(g: Digraph | UndirectedGraph) -> bool:
    """True iff the arcs form exactly one directed cycle through every vertex."""
    dg = as_digraph(g)
    if dg.n < 2:
        return False
    if any(row.bit_count() != 1 for row in dg.rows):
        return False
    seen = 1
    v = dg.rows[0].bit_length() - 1
    steps = 1
    while v != 0:
        if seen >> v & 1:
            return False
        seen |= 1 << v
        v = dg.rows[v].bit_length() - 1
        steps += 1
    return steps == dg.n


def permutations_by_fixed_points(g: Digraph | UndirectedGraph) -> tuple[int, ...]:
    """counts[k] = number of permutations on g with exactly k fixed points.

    Since the adjacency has no diagonal, the permanent of the block on any
    vertex subset S counts the derangements supported inside S; summing over
    the complement size buckets everything.
    """
    dg = as_digraph(g)
    n = dg.n
    if n > 12:
        raise TooLargeError(f"fixed-point profile capped at n=12, got {n}")
    counts = [0] * (n + 1)
    for mask in range(1 << n):
        members = list(bits_of(mask))
        sub = []
        for v in members:
            row = 0
            for t, w in enumerate(members):
                row |= (dg.rows[v] >> w & 1) << t
            sub.append(row)
        counts[n - len(members)] += permanent_zero_one(sub, len(members))
    return tuple(counts)


# ---------------------------------------------------------------------------
# perfect matchings


def count_perfect_matchings(b: BipartiteGraph) -> int:
    """Perfect matchings of a bipartite graph; 0 when the parts differ in size."""
    if not b.is_balanced:
        return 0
    return permanent_zero_one(b.biadj, b.nl)


def enumerate_perfect_matchings(b: BipartiteGraph) -> Iterator[Permutation]:
    """Perfect matchings as left-to-right image tuples, lexicographic."""
    if not b.is_balanced:
        return iter(())
    if b.nl > MATCH_ENUM_LIMIT:
        raise TooLargeError(f"matching enumeration capped at parts of {MATCH_ENUM_LIMIT}, got {b.nl}")
    n = b.nl
    image = [0] * n

    def rec(i: int, used: int) -> Iterator[Permutation]:
        if i == n:
            yield tuple(image)
            return
        for j in bits_of(b.biadj[i] & ~used):
            image[i] = j
            yield from rec(i + 1, used | 1 << j)

    return rec(0, 0)


def count_perfect_matchings_general(g: UndirectedGraph) -> int:
    """Perfect matchings of an undirected graph, by memoized pairing of the
    lowest uncovered vertex."""
    n = g.n
    if n > GENERAL_MATCH_LIMIT:
        raise TooLargeError(f"general matching count capped at {GENERAL_MATCH_LIMIT} vertices, got {n}")
    if n % 2:
        return 0
    rows = g.rows
    memo: dict[int, int] = {0: 1}

    def rec(mask: int) -> int:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        v = (mask & -mask).bit_length() - 1
        total = 0
        rest = mask & ~(1 << v)
        for w in bits_of(rows[v] & rest):
            total += rec(rest & ~(1 << w))
        memo[mask] = total
        return total

    return rec((1 << n) - 1)


def enumerate_perfect_matchings_general(g: UndirectedGraph) -> Iterator[Matching]:
    """Perfect matchings of an undirected graph in canonical order."""
    n = g.n
    if n > GENERAL_MATCH_LIMIT:
        raise TooLargeError(f"general matching enumeration capped at {GENERAL_MATCH_LIMIT} vertices, got {n}")
    if n % 2:
        return iter(())
    rows = g.rows
    pairs: list[tuple[int, int]] = []

    def rec(mask: int) -> Iterator[Matching]:
        if mask == 0:
            yield tuple(pairs)
            return
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        for w in bits_of(rows[v] & rest):
            pairs.append((v, w))
            yield from rec(rest & ~(1 << w))
            pairs.pop()

    return rec((1 << n) - 1)


@dataclass(frozen=True)
class IntersectionTally:
    """How many perfect matchings share an edge with a reference matching (hits)
    and how many avoid it entirely (misses)."""

    hits: int
    misses: int

    @property
    def total(self) -> int:
        return self.hits + self.misses


def matching_intersection_tally(
    b: BipartiteGraph, m: Sequence[tuple[int, int]] | Permutation
) -> IntersectionTally:
    """Tally every perfect matching of b against the reference matching m.

    m may be given as an image tuple or as (left, right) pairs; it must itself
    be a perfect matching of b. The reference counts as a hit.
    """
    ref = _as_image(b, m)
    hits = misses = 0
    for sigma in enumerate_perfect_matchings(b):
        if any(x == y for x, y in zip(sigma, ref)):
            hits += 1
        else:
            misses += 1
    return IntersectionTally(hits, misses)


def _as_image(b: BipartiteGraph, m: Sequence[tuple[int, int]] | Permutation) -> Permutation:
    if m and isinstance(m[0], tuple):
        image = [-1] * b.nl
        for i, j in m:  # type: ignore[misc]
            if not 0 <= i < b.nl or image[i] != -1:
                raise NotPerfectMatchingError(f"left vertex {i} not matched exactly once")
            image[i] = j
        m = tuple(image)
    m = tuple(m)  # type: ignore[arg-type]
    if (
        not b.is_balanced
        or len(m) != b.nl
        or sorted(m) != list(range(b.nr))
        or any(not b.has_edge(i, j) for i, j in enumerate(m))
    ):
        raise NotPerfectMatchingError(f"{m!r} is not a perfect matching of the bipartite graph")
    return m


def undirected_matching_tally(g: UndirectedGraph, m: Iterable[tuple[int, int]]) -> IntersectionTally:
    """Same tally over the perfect matchings of an undirected graph."""
    from .graphs import require_perfect_matching

    ref = set(require_perfect_matching(g, m))
    hits = misses = 0
    for other in enumerate_perfect_matchings_general(g):
        if ref.intersection(other):
            hits += 1
        else:
            misses += 1
    return IntersectionTally(hits, misses)


def bipartite_permutation_sum(b: BipartiteGraph) -> int:
    """Permutation count of the flattened bipartite graph, via squared subpermanents.

    Permutations of a bipartite graph pair up a left subset S with a right
    subset S' and use each crossing matching twice (once per direction), so
    the count is the sum of per(B[S, S'])^2 over all equal-size pairs.
    """
    if max(b.nl, b.nr) > 8:
        raise TooLargeError(f"squared subpermanent sum capped at parts of 8, got {b.nl} x {b.nr}")
    mat = b.matrix()
    from itertools import combinations

    total = 0
    for k in range(min(b.nl, b.nr) + 1):
        for s in combinations(range(b.nl), k):
            for sp in combinations(range(b.nr), k):
                sub = [[mat[i][j] for j in sp] for i in s]
                total += permanent_ryser(sub) ** 2
    return total
