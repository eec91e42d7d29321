"""Machine checks of the counting statements, plus survey scans over graph families.

Each ``check_*`` routine returns a :class:`TheoremReport` stating whether the
claimed inequality or identity holds on the given instance, with enough
witness data to be useful when it does not. Checks that admit two independent
computation routes run both. ``scan`` sweeps a family, records one row per
graph, and reports any violation it meets; exceedances of the extremal
conjecture for undirected graphs are surfaced as findings, not failures.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from math import factorial
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .counting import (
    count_derangements,
    count_perfect_matchings,
    count_perfect_matchings_general,
    count_permutations,
    dp_ratio,
    enumerate_perfect_matchings,
    enumerate_perfect_matchings_general,
    enumerate_permutations,
    is_directed_cycle,
    matching_intersection_tally,
    undirected_matching_tally,
)
from .errors import BadParamsError, TooLargeError
from .graphs import (
    BipartiteGraph,
    Digraph,
    Matching,
    UndirectedGraph,
    bipartitions_over_matching,
    blowup,
    canonical_matching,
    complete_bipartite,
    new_digraph,
    new_graph,
)
from .injection import apply_injection, hamilton_census, invert_injection
from .permanent import subpermanent_sides
from .random_models import ModelSpec, sample

HALF = Fraction(1, 2)


def format_12sig(x: Fraction) -> str:
    """Decimal string with 12 significant digits, round-half-even."""
    if x == 0:
        return "0.000000000000"
    with localcontext() as ctx:
        ctx.prec = 12
        ctx.rounding = ROUND_HALF_EVEN
        d = Decimal(x.numerator) / Decimal(x.denominator)
    with localcontext() as ctx:
        ctx.prec = 40  # plenty for the padding quantize below
        d = d.quantize(Decimal(1).scaleb(d.adjusted() - 11))
    return format(d, "f")


def format_ratio(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class TheoremReport:
    name: str
    instance: str
    holds: bool
    equality: bool | None = None
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        out = {"name": self.name, "instance": self.instance, "holds": self.holds}
        if self.equality is not None:
            out["equality"] = self.equality
        if self.details:
            out["details"] = self.details
        return out


def _describe(g: Digraph | UndirectedGraph | BipartiteGraph) -> str:
    if isinstance(g, BipartiteGraph):
        return f"bipartite {g.nl}x{g.nr}, {g.edge_count} edges"
    if isinstance(g, UndirectedGraph):
        return f"graph n={g.n}, {g.edge_count} edges"
    return f"digraph n={g.n}, {g.arc_count} arcs"


# ---------------------------------------------------------------------------
# per-instance checks


def check_ratio_half(g: Digraph | UndirectedGraph) -> TheoremReport:
    """Derangements are at most half of permutations, with equality exactly on
    directed cycles."""
    d = count_derangements(g)
    p = count_permutations(g)
    ratio = Fraction(d, p)
    equality = ratio == HALF
    cyclic = is_directed_cycle(g)
    holds = ratio <= HALF and equality == cyclic
    return TheoremReport(
        "ratio-half",
        _describe(g),
        holds,
        equality,
        {
            "derangements": d,
            "permutations": p,
            "ratio": format_ratio(ratio),
            "is_directed_cycle": cyclic,
        },
    )


def check_half_hitting(b: BipartiteGraph, limit: int = 6) -> TheoremReport:
    """For every perfect matching of a bipartite graph, at least half of all
    perfect matchings share an edge with it."""
    if not b.is_balanced or max(b.nl, b.nr) > limit:
        raise TooLargeError(f"half-hitting check wants balanced parts of at most {limit}")
    checked = 0
    worst: tuple[int, int] | None = None
    ok = True
    for m in enumerate_perfect_matchings(b):
        tally = matching_intersection_tally(b, m)
        checked += 1
        if worst is None or tally.hits - tally.misses < worst[0] - worst[1]:
            worst = (tally.hits, tally.misses)
        if tally.hits < tally.misses:
            ok = False
    details: dict = {"matchings": checked}
    if worst is not None:
        details["worst_hits"] = worst[0]
        details["worst_misses"] = worst[1]
    return TheoremReport("half-hitting", _describe(b), ok, None, details)


def check_matching_lower_bound(
    g: UndirectedGraph, m: Iterable[tuple[int, int]] | None = None, cross_check: bool | None = None
) -> TheoremReport:
    """Any perfect matching of a 2n-vertex graph meets more than a
    1/(2^(n-1)+1) fraction of all perfect matchings: misses <= 2^(n-1) * hits.

    With cross_check on (default for small graphs), the misses are recomputed
    by a second route: every matching disjoint from m must show up inside at
    least one of the 2^(n-1) bipartitions induced by m.
    """
    half_n = g.n // 2
    matchings = list(enumerate_perfect_matchings_general(g))
    if m is not None:
        targets = [canonical_matching(m)]
    else:
        targets = matchings
    if cross_check is None:
        cross_check = g.n <= 12
    bound = 1 << max(half_n - 1, 0)
    ok = True
    checked = 0
    worst: dict = {}
    for ref in targets:
        tally = undirected_matching_tally(g, ref)
        checked += 1
        if tally.misses > bound * tally.hits:
            ok = False
            worst = {"matching": [list(e) for e in ref], "hits": tally.hits, "misses": tally.misses}
        if cross_check:
            ref_set = set(ref)
            direct = {mm for mm in matchings if not ref_set.intersection(mm)}
            covered = set()
            for bp in bipartitions_over_matching(g, ref):
                for sigma in enumerate_perfect_matchings(bp.graph):
                    mm = canonical_matching(
                        (bp.left[i], bp.right[j]) for i, j in enumerate(sigma)
                    )
                    if not ref_set.intersection(mm):
                        covered.add(mm)
            if covered != direct:
                ok = False
                worst = {
                    "matching": [list(e) for e in ref],
                    "direct_misses": len(direct),
                    "bipartition_misses": len(covered),
                }
    details = {"matchings": len(matchings), "targets": checked, "bound_factor": bound}
    if worst:
        details["witness"] = worst
    return TheoremReport("matching-lower-bound", _describe(g), ok, None, details)


def knn_ratio_sum(n: int) -> Fraction:
    """The extremal permutations-to-derangements value for balanced bipartite
    graphs: sum over k of 1/k!^2."""
    return sum((Fraction(1, factorial(k) ** 2) for k in range(n + 1)), Fraction(0))


def check_bipartite_extremal(b: BipartiteGraph) -> TheoremReport:
    """Among balanced bipartite graphs with a perfect matching, permutations
    over derangements is minimized by the complete one, where it equals
    sum 1/k!^2; equality holds only there."""
    if not b.is_balanced:
        raise BadParamsError("the bipartite extremal statement needs balanced parts")
    n = b.nl
    g = b.to_graph()
    matchings = count_perfect_matchings(b)
    d = matchings ** 2
    d_direct = count_derangements(g)
    p = count_permutations(g)
    target = knn_ratio_sum(n)
    if d != d_direct:
        # two routes to the derangement count disagree: always a failure
        return TheoremReport(
            "bipartite-extremal",
            _describe(b),
            False,
            None,
            {"matchings_squared": d, "derangements": d_direct},
        )
    if d == 0:
        return TheoremReport(
            "bipartite-extremal", _describe(b), True, None, {"skipped": "no perfect matching"}
        )
    ratio = Fraction(p, d)
    is_complete = b.edge_count == n * n
    equality = ratio == target
    holds = ratio >= target and equality == is_complete
    return TheoremReport(
        "bipartite-extremal",
        _describe(b),
        holds,
        equality,
        {
            "permutations": p,
            "derangements": d,
            "ratio": format_ratio(ratio),
            "target": format_ratio(target),
        },
    )


def check_blowup_formulas(k: int, l: int) -> TheoremReport:
    """Counts on the cycle blowup match their closed forms:
    d = (k!)^l, p = sum_i (C(k,i) (k-i)!)^l, ratio = 1 / sum_i (1/i!)^l."""
    g = blowup(k, l)
    d = count_derangements(g)
    p = count_permutations(g)
    want_d = factorial(k) ** l
    from math import comb

    want_p = sum((comb(k, i) * factorial(k - i)) ** l for i in range(k + 1))
    want_ratio = 1 / sum((Fraction(1, factorial(i)) ** l for i in range(k + 1)), Fraction(0))
    holds = d == want_d and p == want_p and Fraction(d, p) == want_ratio
    return TheoremReport(
        "blowup-formulas",
        f"blowup k={k}, l={l}",
        holds,
        None,
        {"derangements": d, "permutations": p, "ratio": format_ratio(Fraction(d, p))},
    )


def check_subpermanent(g: Digraph | UndirectedGraph | BipartiteGraph, k: int | None = None) -> TheoremReport:
    """The block-splitting identity for the instance's 0/1 matrix, all k by default."""
    if isinstance(g, BipartiteGraph) and not g.is_balanced:
        raise BadParamsError("the splitting identity needs a square matrix; use balanced parts")
    mat = g.matrix()
    n = len(mat)
    ks = range(n + 1) if k is None else [k]
    ok = True
    sides = {}
    for kk in ks:
        lhs, rhs = subpermanent_sides(mat, kk)
        sides[str(kk)] = [lhs, rhs]
        if lhs != rhs:
            ok = False
    return TheoremReport("subpermanent-split", _describe(g), ok, None, {"sides": sides})


def check_injection(g: Digraph | UndirectedGraph, sample_cap: int | None = None) -> TheoremReport:
    """Round-trip and injectivity audit of the cycle-breaking map on one graph.

    For every root v: images of distinct derangements stay distinct, have a
    fixed point, invert back, and (when the derangement count is small enough
    to enumerate, sample_cap=None) every permutation outside the image is
    refused by the inverse.
    """
    from itertools import islice

    from .counting import as_digraph, fixed_points
    from .errors import NotInImageError

    dg = as_digraph(g)
    derangements = list(
        islice(enumerate_permutations(dg, derangements_only=True), sample_cap)
    )
    exhaustive = sample_cap is None
    ok = True
    details: dict = {"derangements": len(derangements), "exhaustive": exhaustive}
    round_trips = 0
    refused = 0
    for v in range(dg.n):
        images = set()
        for d in derangements:
            p = apply_injection(dg, d, v)
            if not fixed_points(p) or p in images:
                ok = False
                details["witness"] = {"v": v, "derangement": list(d)}
                break
            images.add(p)
            if invert_injection(dg, p, v) != d:
                ok = False
                details["witness"] = {"v": v, "derangement": list(d), "image": list(p)}
                break
            round_trips += 1
        if exhaustive and ok:
            for p in enumerate_permutations(dg):
                if p in images:
                    continue
                try:
                    back = invert_injection(dg, p, v)
                except NotInImageError:
                    refused += 1
                    continue
                ok = False
                details["witness"] = {"v": v, "image": list(p), "claimed_preimage": list(back)}
                break
        if not ok:
            break
    details["round_trips"] = round_trips
    if exhaustive:
        details["refusals"] = refused
    return TheoremReport("cycle-breaking-injection", _describe(dg), ok, None, details)


def check_cycle_doubling(g: Digraph | UndirectedGraph) -> TheoremReport:
    """If a graph other than a bare directed cycle has a Hamilton cycle, some
    vertex lies on at least twice as many simple cycles as there are Hamilton
    cycles. Vacuously true otherwise."""
    census = hamilton_census(g)
    cyclic = is_directed_cycle(g)
    if census.ham_count == 0 or cyclic:
        return TheoremReport(
            "cycle-doubling",
            _describe(g),
            True,
            None,
            {"hamilton_cycles": census.ham_count, "vacuous": True},
        )
    best = max(range(len(census.through)), key=lambda v: census.through[v])
    holds = census.through[best] >= 2 * census.ham_count
    return TheoremReport(
        "cycle-doubling",
        _describe(g),
        holds,
        None,
        {
            "hamilton_cycles": census.ham_count,
            "best_vertex": best,
            "cycles_through_best": census.through[best],
        },
    )


# ---------------------------------------------------------------------------
# exhaustive sweep for the cycle-doubling corollary (vectorized over graphs)


def _cycle_arc_masks(n: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """All simple directed cycle patterns on n labeled vertices, as
    (arc_mask, vertex_mask) pairs; second list holds just the Hamilton ones.
    Arc slots are numbered row-major skipping the diagonal."""
    from itertools import combinations, permutations

    def slot(i: int, j: int) -> int:
        return i * (n - 1) + (j if j < i else j - 1)

    cycles = []
    hams = []
    for k in range(2, n + 1):
        for verts in combinations(range(n), k):
            head = verts[0]
            for rest in permutations(verts[1:]):
                order = (head,) + rest
                arc_mask = 0
                for t in range(k):
                    arc_mask |= 1 << slot(order[t], order[(t + 1) % k])
                vmask = 0
                for x in verts:
                    vmask |= 1 << x
                cycles.append((arc_mask, vmask))
                if k == n:
                    hams.append((arc_mask, vmask))
    return cycles, hams


def cycle_doubling_sweep(n: int) -> dict:
    """Check the doubling corollary on every digraph with n <= 5 vertices at once.

    Returns counts; "failures" lists the offending arc-mask indices (expected
    empty). Cross-checking a slice of this sweep against hamilton_census is
    left to the test suite.
    """
    if not 2 <= n <= 5:
        raise TooLargeError("the exhaustive sweep is sized for 2..5 vertices")
    slots = n * (n - 1)
    total = 1 << slots
    cycles, _ = _cycle_arc_masks(n)
    gid = np.arange(total, dtype=np.uint32)
    ham = np.zeros(total, dtype=np.int32)
    through = np.zeros((n, total), dtype=np.int32)
    for arc_mask, vmask in cycles:
        present = (gid & np.uint32(arc_mask)) == np.uint32(arc_mask)
        if vmask.bit_count() == n:
            ham += present
        for v in range(n):
            if vmask >> v & 1:
                through[v] += present
    arc_count = np.bitwise_count(gid)
    is_cycle_graph = (ham >= 1) & (arc_count == n)
    doubled = (through >= 2 * ham).any(axis=0)
    ok = (ham == 0) | is_cycle_graph | doubled
    failures = np.flatnonzero(~ok)
    return {
        "n": n,
        "graphs": int(total),
        "with_hamilton": int((ham > 0).sum()),
        "directed_cycles": int(is_cycle_graph.sum()),
        "failures": [int(x) for x in failures[:20]],
        "failure_count": int(failures.size),
    }


def digraph_from_arc_index(n: int, index: int) -> Digraph:
    """Inverse of the row-major arc-slot numbering used by the exhaustive sweeps."""
    arcs = []
    t = 0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if index >> t & 1:
                arcs.append((i, j))
            t += 1
    return new_digraph(n, arcs)


# ---------------------------------------------------------------------------
# family scans


def survey_columns() -> tuple[str, ...]:
    return ("n", "arcs", "adjacency_hex", "derangements", "permutations", "ratio_exact", "ratio_float")


@dataclass(frozen=True)
class SurveyRecord:
    n: int
    arcs: int
    adjacency_hex: str
    derangements: int
    permutations: int
    ratio_exact: str
    ratio_float: str

    def row(self) -> tuple:
        return (
            self.n,
            self.arcs,
            self.adjacency_hex,
            self.derangements,
            self.permutations,
            self.ratio_exact,
            self.ratio_float,
        )


def adjacency_hex(g: Digraph | UndirectedGraph) -> str:
    rows = g.rows
    width = (g.n + 3) // 4
    return ":".join(f"{row:0{width}x}" for row in rows)


def survey_record(g: Digraph | UndirectedGraph) -> SurveyRecord:
    d = count_derangements(g)
    p = count_permutations(g)
    ratio = Fraction(d, p)
    dg = g.base if isinstance(g, UndirectedGraph) else g
    return SurveyRecord(
        g.n, dg.arc_count, adjacency_hex(g), d, p, format_ratio(ratio), format_12sig(ratio)
    )


FAMILIES = ("digraphs", "bipartite", "sampled-undirected")


def _digraph_chunk(args: tuple[int, int, int]) -> list[tuple[SurveyRecord, bool, bool]]:
    n, start, stop = args
    out = []
    for index in range(start, stop):
        g = digraph_from_arc_index(n, index)
        rec = survey_record(g)
        report = check_ratio_half(g)
        out.append((rec, report.holds, bool(report.equality)))
    return out


def _bipartite_chunk(args: tuple[int, int, int]) -> list[tuple[SurveyRecord, bool, bool]]:
    n, start, stop = args
    out = []
    for index in range(start, stop):
        b = BipartiteGraph(n, n, tuple((index >> (n * i)) & ((1 << n) - 1) for i in range(n)))
        g = b.to_graph()
        rec = survey_record(g)
        ok = check_ratio_half(g).holds
        if ok and count_perfect_matchings(b) > 0:
            ok = check_half_hitting(b).holds and check_bipartite_extremal(b).holds
        equality = rec.ratio_exact == "1/2"
        out.append((rec, ok, equality))
    return out


def _sampled_chunk(args: tuple[ModelSpec, int, int, int]) -> list[tuple[SurveyRecord, bool, bool]]:
    model, seed, start, stop = args
    from .random_models import child_seed

    out = []
    for index in range(start, stop):
        g = sample(model, child_seed(seed, index))
        rec = survey_record(g)
        report = check_ratio_half(g)
        out.append((rec, report.holds, bool(report.equality)))
    return out


def _chunked(total: int, threads: int) -> list[tuple[int, int]]:
    step = max(1, -(-total // max(threads * 4, 1)))
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def scan(
    family: str,
    n: int,
    samples: int = 0,
    q: Fraction | str = "1/2",
    seed: int = 0,
    out_path: str | Path | None = None,
    threads: int = 1,
) -> dict:
    """Sweep a graph family, stream one record per graph, and summarize.

    families:
      digraphs            all 2^(n(n-1)) digraphs, n <= 4
      bipartite           all 2^(n^2) balanced biadjacencies, n <= 4 (records
                          describe the flattened 2n-vertex graph)
      sampled-undirected  `samples` draws from G(n, q) at the given seed
    """
    if family == "digraphs":
        if n > 4:
            raise TooLargeError("exhaustive digraph scan is sized for n <= 4")
        jobs = [(n, lo, hi) for lo, hi in _chunked(1 << n * (n - 1), threads)]
        worker = _digraph_chunk
    elif family == "bipartite":
        if n > 4:
            raise TooLargeError("exhaustive bipartite scan is sized for parts of at most 4")
        jobs = [(n, lo, hi) for lo, hi in _chunked(1 << n * n, threads)]
        worker = _bipartite_chunk
    elif family == "sampled-undirected":
        if samples < 1:
            raise BadParamsError("sampled scan needs samples >= 1")
        model = ModelSpec("graph", n, q=Fraction(q))
        jobs = [(model, seed, lo, hi) for lo, hi in _chunked(samples, threads)]
        worker = _sampled_chunk
    else:
        raise BadParamsError(f"unknown family {family!r}; expected one of {FAMILIES}")

    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(worker, jobs))
    else:
        chunks = [worker(j) for j in jobs]

    records: list[SurveyRecord] = []
    counterexamples = 0
    equality_count = 0
    best: tuple[Fraction, SurveyRecord] | None = None
    for chunk in chunks:
        for rec, ok, equality in chunk:
            records.append(rec)
            if not ok:
                counterexamples += 1
            if equality:
                equality_count += 1
            ratio = Fraction(rec.derangements, rec.permutations)
            if best is None or ratio > best[0]:
                best = (ratio, rec)

    summary: dict = {
        "family": family,
        "n": n,
        "graphs": len(records),
        "counterexamples": counterexamples,
        "equality_count": equality_count,
        "max_ratio": best[1].ratio_exact if best else None,
        "max_ratio_float": best[1].ratio_float if best else None,
        "argmax_adjacency_hex": best[1].adjacency_hex if best else None,
    }
    if family == "sampled-undirected":
        summary["seed"] = seed
        summary["q"] = str(Fraction(q))
        summary["samples"] = samples
        if n % 2 == 0 and n >= 2:
            reference = dp_ratio(complete_bipartite(n // 2).to_graph())
            summary["reference_ratio"] = format_ratio(reference)
            summary["conjecture_exceedances"] = sum(
                1 for r in records if Fraction(r.derangements, r.permutations) > reference
            )
    if out_path is not None:
        write_records(records, out_path)
        summary["out"] = str(out_path)
    return summary


def write_records(records: Sequence[SurveyRecord], out_path: str | Path) -> None:
    """CSV by default; a .jsonl suffix switches to one JSON object per line."""
    out_path = Path(out_path)
    if out_path.suffix == ".jsonl":
        with out_path.open("w") as fh:
            for rec in records:
                fh.write(json.dumps(dict(zip(survey_columns(), rec.row()))) + "\n")
        return
    with out_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(survey_columns())
        for rec in records:
            writer.writerow(rec.row())
