"""Command line front end.

Exit codes: 0 success (or: the checked statement holds); 1 the checked
statement failed on the instance, or a permutation fell outside the image of
the cycle-breaking map; 2 usage or parameter errors; 3 missing, unreadable,
or malformed input files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import counting, verify
from .errors import (
    BadParamsError,
    CounterexampleError,
    GraphSyntaxError,
    NotInImageError,
    PermatchError,
)
from .graphs import (
    BipartiteGraph,
    Digraph,
    UndirectedGraph,
    construct,
    lonely_matching_ring,
    parse_graph,
    serialize_graph,
)
from .injection import apply_injection, invert_injection
from .random_models import ModelSpec, expected_counts, mc_dp_ratio
from .verify import format_12sig, format_ratio


def _load_graph(path: str) -> Digraph | UndirectedGraph | BipartiteGraph:
    text = Path(path).read_text()
    try:
        return parse_graph(text)
    except GraphSyntaxError as exc:
        raise GraphSyntaxError(f"{path}: {exc}") from None
    except PermatchError as exc:
        # bad vertex ids and the like are still a malformed file
        raise GraphSyntaxError(f"{path}: {exc}") from None


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def _threads(args: argparse.Namespace) -> int:
    if args.threads is not None:
        return args.threads
    try:
        return max(1, int(os.environ.get("PERMATCH_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# count


def _cmd_count(args: argparse.Namespace) -> int:
    g = _load_graph(args.input)
    what = args.what
    if what == "matchings":
        if isinstance(g, BipartiteGraph):
            value = counting.count_perfect_matchings(g)
        elif isinstance(g, UndirectedGraph):
            value = counting.count_perfect_matchings_general(g)
        else:
            raise BadParamsError("matchings need an undirected or bipartite input")
        n = g.nl + g.nr if isinstance(g, BipartiteGraph) else g.n
        if args.json:
            _emit({"what": what, "n": n, "value": value})
        else:
            print(value)
        return 0
    if isinstance(g, BipartiteGraph):
        g = g.to_graph()  # permutations of a bipartite graph live on the flattened vertex set
    if what in ("derangements", "permutations"):
        fn = counting.count_derangements if what == "derangements" else counting.count_permutations
        value = fn(g)
        if args.json:
            _emit({"what": what, "n": g.n, "value": value})
        else:
            print(value)
    elif what == "ratio":
        r = counting.dp_ratio(g)
        if args.json:
            _emit(
                {
                    "what": what,
                    "n": g.n,
                    "numerator": r.numerator,
                    "denominator": r.denominator,
                    "value": format_12sig(r),
                }
            )
        else:
            print(f"{format_ratio(r)} ({format_12sig(r)})")
    else:  # fixed-points
        profile = counting.permutations_by_fixed_points(g)
        if args.json:
            _emit({"what": what, "n": g.n, "counts": list(profile)})
        else:
            print(",".join(str(c) for c in profile))
    return 0


# ---------------------------------------------------------------------------
# construct


def _cmd_construct(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind == "blowup":
        if args.k is None or args.l is None:
            raise BadParamsError("blowup needs --k and --l")
        g = construct(kind, k=args.k, l=args.l)
    else:
        if args.n is None:
            raise BadParamsError(f"{kind} needs --n")
        g = construct(kind, n=args.n)
    fmt = "json" if args.out.endswith(".json") else "text"
    Path(args.out).write_text(serialize_graph(g, fmt))
    if kind == "thm2h":
        _, m0 = lonely_matching_ring(args.n)
        print("m0: " + " ".join(f"{a}-{b}" for a, b in m0))
    return 0


# ---------------------------------------------------------------------------
# inject


def _cmd_inject(args: argparse.Namespace) -> int:
    g = _load_graph(args.input)
    if isinstance(g, BipartiteGraph):
        raise BadParamsError("the cycle-breaking map needs a directed or undirected input")
    sigma = counting.parse_permutation(args.perm, g.n)
    if args.invert:
        result = invert_injection(g, sigma, args.vertex)
        direction = "invert"
    else:
        result = apply_injection(g, sigma, args.vertex)
        direction = "apply"
    if args.json:
        _emit(
            {
                "vertex": args.vertex,
                "direction": direction,
                "input": counting.format_permutation(sigma),
                "result": counting.format_permutation(result),
            }
        )
    else:
        print(counting.format_permutation(result))
    return 0


# ---------------------------------------------------------------------------
# verify

_THEOREM_TOKENS = ("1", "2", "3", "6", "injection", "blowup", "subpermanent", "corollary")


def _cmd_verify(args: argparse.Namespace) -> int:
    token = args.theorem
    if token == "blowup":
        if args.k is None or args.l is None:
            raise BadParamsError("verify --theorem blowup needs --k and --l")
        report = verify.check_blowup_formulas(args.k, args.l)
    else:
        if args.input is None:
            raise BadParamsError(f"verify --theorem {token} needs --input")
        g = _load_graph(args.input)
        if token == "1":
            if not isinstance(g, BipartiteGraph):
                raise BadParamsError("the half-hitting statement needs a bipartite input")
            report = verify.check_half_hitting(g)
        elif token == "2":
            if not isinstance(g, UndirectedGraph):
                raise BadParamsError("the matching lower bound needs an undirected input")
            report = verify.check_matching_lower_bound(g)
        elif token == "3":
            if isinstance(g, BipartiteGraph):
                g = g.to_graph()
            report = verify.check_ratio_half(g)
        elif token == "6":
            if not isinstance(g, BipartiteGraph):
                raise BadParamsError("the bipartite extremal statement needs a bipartite input")
            report = verify.check_bipartite_extremal(g)
        elif token == "injection":
            if isinstance(g, BipartiteGraph):
                raise BadParamsError("the injection audit needs a directed or undirected input")
            cap = None if g.n <= 5 else 200
            report = verify.check_injection(g, sample_cap=cap)
        elif token == "subpermanent":
            report = verify.check_subpermanent(g, k=args.k)
        else:  # corollary
            if isinstance(g, BipartiteGraph):
                g = g.to_graph()
            report = verify.check_cycle_doubling(g)
    if args.json:
        _emit(report.to_json_dict())
    else:
        verdict = "HOLDS" if report.holds else "FAILS"
        print(f"{report.name}: {verdict} on {report.instance}")
        for key, val in report.details.items():
            print(f"  {key}: {val}")
    return 0 if report.holds else 1


# ---------------------------------------------------------------------------
# scan / mc / expect


def _cmd_scan(args: argparse.Namespace) -> int:
    summary = verify.scan(
        args.family,
        args.n,
        samples=args.samples,
        q=args.q,
        seed=args.seed,
        out_path=args.out,
        threads=_threads(args),
    )
    _emit(summary)
    return 1 if summary["counterexamples"] else 0


def _cmd_mc(args: argparse.Namespace) -> int:
    model = ModelSpec(args.model, args.n, q=Fraction(args.q))
    summary = mc_dp_ratio(model, args.samples, args.seed, threads=_threads(args))
    if args.json:
        _emit(summary.to_json_dict())
    else:
        print(
            f"samples={summary.samples} mean={summary.mean:.6f} "
            f"stddev={summary.stddev:.6f} target={summary.target:.6f}"
        )
    return 0


def _cmd_expect(args: argparse.Namespace) -> int:
    ex, ey = expected_counts(args.n, args.m)
    if args.json:
        _emit(
            {
                "n": args.n,
                "m": args.m,
                "expected_derangements": {
                    "numerator": ex.numerator,
                    "denominator": ex.denominator,
                    "value": format_12sig(ex),
                },
                "expected_permutations": {
                    "numerator": ey.numerator,
                    "denominator": ey.denominator,
                    "value": format_12sig(ey),
                },
            }
        )
    else:
        print(f"expected derangements: {format_ratio(ex)} ({format_12sig(ex)})")
        print(f"expected permutations: {format_ratio(ey)} ({format_12sig(ey)})")
    return 0


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permatch",
        description="Exact counting of derangements, permutations, and perfect matchings on small graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count structures on a graph from a file")
    p.add_argument("--input", required=True, help="graph file (text or JSON)")
    p.add_argument(
        "--what",
        required=True,
        choices=["derangements", "permutations", "matchings", "ratio", "fixed-points"],
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("construct", help="write a named graph to a file")
    p.add_argument("--kind", required=True, choices=["cycle", "complete", "complete-bipartite", "blowup", "thm2h"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--out", required=True, help=".json suffix selects the JSON format")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("inject", help="apply or invert the cycle-breaking map")
    p.add_argument("--input", required=True)
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--perm", required=True, help='image list, e.g. "1,2,0"')
    p.add_argument("--invert", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_inject)

    p = sub.add_parser("verify", help="check one of the counting statements on an instance")
    p.add_argument("--theorem", required=True, choices=list(_THEOREM_TOKENS))
    p.add_argument("--input")
    p.add_argument("--k", type=int, help="blowup width, or a single block size for subpermanent")
    p.add_argument("--l", type=int, help="blowup cycle length")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("scan", help="sweep a graph family and write one record per graph")
    p.add_argument("--family", required=True, choices=list(verify.FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--q", default="1/2")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help=".csv or .jsonl")
    p.add_argument("--threads", type=int, default=None, help="defaults to PERMATCH_THREADS or 1")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("mc", help="Monte Carlo derangement/permutation ratios on random graphs")
    p.add_argument("--model", required=True, choices=["graph", "digraph"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", required=True, help='arc probability, e.g. "0.5" or "1/2"')
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="defaults to PERMATCH_THREADS or 1")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("expect", help="exact expected counts in the uniform fixed-arc model")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_expect)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CounterexampleError as exc:
        print(f"counterexample: {exc}", file=sys.stderr)
        return 1
    except NotInImageError as exc:
        print(f"not in image: {exc}", file=sys.stderr)
        return 1
    except GraphSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except PermatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
