"""Random graph models, exact first-moment formulas, and Monte Carlo ratio runs.

Sampling is deterministic given (model, seed): arc slots are visited in
row-major order and each Bernoulli draw consumes exactly one 53-bit word, so
adding features cannot silently shift the stream. Monte Carlo runs derive one
child seed per sample index, which makes them chunkable across workers
without changing the output.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, exp
from statistics import fmean, stdev

from .counting import dp_ratio
from .errors import BadParamsError, CounterexampleError
from .graphs import Digraph, UndirectedGraph, new_digraph, new_graph

MODEL_KINDS = ("digraph", "graph")


def _as_probability(q) -> Fraction:
    try:
        q = Fraction(q)  # exact for int, str ("0.8" -> 4/5), and Fraction
    except (ValueError, ZeroDivisionError, TypeError):
        raise BadParamsError(f"cannot read probability from {q!r}") from None
    if not 0 <= q <= 1:
        raise BadParamsError(f"probability must lie in [0, 1], got {q}")
    return q


@dataclass(frozen=True)
class ModelSpec:
    """Either G(n, q) / D(n, q) with independent edges or arcs (give q), or the
    uniform model with exactly m arcs (give m)."""

    kind: str
    n: int
    q: Fraction | None = None
    m: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise BadParamsError(f"model kind must be one of {MODEL_KINDS}, got {self.kind!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise BadParamsError(f"model needs a positive vertex count, got {self.n!r}")
        if (self.q is None) == (self.m is None):
            raise BadParamsError("give exactly one of q (independent) or m (fixed arc count)")
        if self.q is not None:
            object.__setattr__(self, "q", _as_probability(self.q))
        if self.m is not None and not 0 <= self.m <= self.slot_count:
            raise BadParamsError(f"arc count must lie in [0, {self.slot_count}], got {self.m}")

    @property
    def slot_count(self) -> int:
        if self.kind == "digraph":
            return self.n * (self.n - 1)
        return self.n * (self.n - 1) // 2

    def slots(self) -> list[tuple[int, int]]:
        n = self.n
        if self.kind == "digraph":
            return [(i, j) for i in range(n) for j in range(n) if i != j]
        return [(i, j) for i in range(n) for j in range(i + 1, n)]


def sample(model: ModelSpec, seed: int) -> Digraph | UndirectedGraph:
    rng = random.Random(seed)
    slots = model.slots()
    if model.q is not None:
        num, den = model.q.numerator, model.q.denominator
        threshold = num << 53
        chosen = [s for s in slots if rng.getrandbits(53) * den < threshold]
    else:
        picked = rng.sample(range(len(slots)), model.m)
        chosen = [slots[i] for i in sorted(picked)]
    if model.kind == "digraph":
        return new_digraph(model.n, chosen)
    return new_graph(model.n, chosen)


# ---------------------------------------------------------------------------
# exact expectations in the fixed-arc-count model


def derangement_number(n: int) -> int:
    """Derangements of an n-set: d(n) = (n-1) (d(n-1) + d(n-2))."""
    if n < 0:
        raise BadParamsError(f"need n >= 0, got {n}")
    a, b = 1, 0  # d(0), d(1)
    if n == 0:
        return a
    for t in range(2, n + 1):
        a, b = b, (t - 1) * (a + b)
    return b


def inclusion_probability(n: int, m: int, t: int) -> Fraction:
    """Probability that t prescribed arc slots are all present in a uniform
    m-arc digraph on n vertices."""
    slots = n * (n - 1)
    if not 0 <= m <= slots:
        raise BadParamsError(f"arc count must lie in [0, {slots}], got {m}")
    if not 0 <= t <= slots:
        raise BadParamsError(f"prescribed count must lie in [0, {slots}], got {t}")
    if t > m:
        return Fraction(0)
    return Fraction(comb(slots - t, m - t), comb(slots, m))


def expected_counts(n: int, m: int) -> tuple[Fraction, Fraction]:
    """(E[derangements], E[permutations]) for a uniform m-arc digraph on n vertices.

    A permutation with exactly the k-set F fixed needs its n - |F| cycle arcs
    present, so linearity gives sums of inclusion probabilities weighted by
    derangement numbers.
    """
    if n < 1:
        raise BadParamsError(f"need n >= 1, got {n}")
    ex = inclusion_probability(n, m, n) * derangement_number(n)
    ey = Fraction(0)
    for k in range(n + 1):
        ey += comb(n, k) * derangement_number(n - k) * inclusion_probability(n, m, n - k)
    return ex, ey


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class McSummary:
    model: ModelSpec
    samples: int
    mean: float
    stddev: float
    target: float

    def to_json_dict(self) -> dict:
        return {
            "kind": self.model.kind,
            "n": self.model.n,
            "q": float(self.model.q) if self.model.q is not None else None,
            "m": self.model.m,
            "samples": self.samples,
            "mean": self.mean,
            "stddev": self.stddev,
            "target": self.target,
        }


def child_seed(seed: int, index: int) -> int:
    # keep the full master seed and the index in disjoint bit ranges
    return seed * (1 << 32) + index


def _ratio_at(args: tuple[ModelSpec, int, int]) -> Fraction:
    model, seed, index = args
    g = sample(model, child_seed(seed, index))
    r = dp_ratio(g)
    if r > Fraction(1, 2):
        raise CounterexampleError(
            f"derangement/permutation ratio {r} exceeds 1/2 on a sampled graph "
            f"(kind={model.kind}, n={model.n}, seed={seed}, index={index})"
        )
    return r


def ratio_target(q: Fraction) -> float:
    """Large-n heuristic for the dense model: missing diagonal slots each cost
    a factor about e^(-1/q) relative to allowing fixed points."""
    if q == 0:
        return 0.0
    return exp(-1 / float(q))


def mc_dp_ratio(model: ModelSpec, samples: int, seed: int, threads: int = 1) -> McSummary:
    """Sample dp ratios; every sample is also asserted against the 1/2 bound."""
    if samples < 1:
        raise BadParamsError(f"need at least one sample, got {samples}")
    jobs = [(model, seed, i) for i in range(samples)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            ratios = list(pool.map(_ratio_at, jobs, chunksize=max(1, samples // (4 * threads))))
    else:
        ratios = [_ratio_at(j) for j in jobs]
    floats = [float(r) for r in ratios]
    mean = fmean(floats)
    spread = stdev(floats) if len(floats) > 1 else 0.0
    target = ratio_target(model.q) if model.q is not None else 0.0
    return McSummary(model, samples, mean, spread, target)
