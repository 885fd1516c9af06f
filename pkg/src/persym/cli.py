"""Command line front end.

Subcommands: census (compute one exact rank distribution), verify (run
closed-form checks over a plan of censuses plus census-free identity
suites), extract (recover coefficient rows from censuses), catalog
(dump every tabled closed form as JSON).

Exit codes: 0 success, 1 normative mismatch found by verify, 2 usage or
resource errors (including refused budgets).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import fitting, formulas
from .census import (
    BudgetExceededError,
    DEFAULT_BUDGET_BITS,
    RankCensus,
    _census_payload,
    full_census,
    multiset_census,
)
from .verify import default_plan, run_plan

__all__ = ["main"]


def parse_range(spec: str) -> list[int]:
    """Parse "1,3-5,9" into [1, 3, 4, 5, 9]."""
    out: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, _, hi = part.partition("-")
            lo_i, hi_i = int(lo), int(hi)
            if hi_i < lo_i:
                raise ValueError(f"empty range {part!r}")
            out.extend(range(lo_i, hi_i + 1))
        else:
            out.append(int(part))
    if not out:
        raise ValueError(f"no values in range spec {spec!r}")
    seen = set()
    uniq = []
    for v in out:
        if v not in seen:
            seen.add(v)
            uniq.append(v)
    return uniq


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _census_text(census: RankCensus, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_census_payload(census), indent=1)
    if fmt == "csv":
        lines = ["i,count"]
        lines += [f"{i},{c}" for i, c in enumerate(census.counts)]
        return "\n".join(lines)
    width = max(len(str(c)) for c in census.counts)
    lines = [
        f"n={census.n} k={census.k} method={census.method} "
        f"total=2^{census.n * (census.k + 1)} seconds={census.seconds:.3f}"
    ]
    lines += [f"  rank {i:>2}  {c:>{width}}" for i, c in enumerate(census.counts)]
    return "\n".join(lines)


def _cmd_census(args) -> int:
    compute = multiset_census if args.method == "multiset" else full_census
    try:
        census = compute(args.n, args.k, budget=args.budget, threads=args.threads)
    except BudgetExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(_census_text(census, args.format), args.out)
    return 0


def _cmd_verify(args) -> int:
    if args.formulas_only:
        plan = []
        include = True
    elif args.n or args.k:
        if not (args.n and args.k):
            print("error: --n and --k must be given together", file=sys.stderr)
            return 2
        try:
            ns, ks = parse_range(args.n), parse_range(args.k)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        method = "multiset-reduced" if args.method == "multiset" else "exhaustive"
        plan = [(n, k, method) for n in ns for k in ks]
        include = not args.no_identities
    else:
        plan = default_plan()
        include = not args.no_identities
    cache_dir = None if args.no_cache else args.cache_dir
    report = run_plan(
        plan,
        cache_dir=cache_dir,
        budget=args.budget,
        threads=args.threads,
        include_identities=include,
    )
    if args.format == "json":
        _emit(json.dumps(report.to_json(), indent=1), args.out)
    else:
        _emit(report.to_text(), args.out)
    return report.exit_code


def _frac_text(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _fit_text(fit) -> str:
    lines = [
        f"rank {fit.i} in {fit.variable}, {fit.fixed_name}={fit.fixed_value}, "
        f"route={fit.route}, verdict={fit.verdict}"
    ]
    lines.append(
        "  coefficients: "
        + ", ".join(f"[{j}] {_frac_text(c)}" for j, c in enumerate(fit.coefficients))
    )
    if fit.bracket is not None:
        lines.append(
            "  bracket:      "
            + ", ".join(f"[{j}] {_frac_text(c)}" for j, c in enumerate(fit.bracket))
        )
    lines.append(
        f"  samples {list(fit.sample_points)}, holdouts {list(fit.holdout_points)}"
    )
    for p, pred, obs in fit.mismatches:
        lines.append(f"  mismatch at {p}: predicted {pred}, observed {obs}")
    return "\n".join(lines)


def _counts_for(i, fixed_name, fixed_value, sample_points, budget, threads):
    counts = {}
    for p in sample_points:
        n, k = (fixed_value, p) if fixed_name == "n" else (p, fixed_value)
        counts[p] = full_census(n, k, budget=budget, threads=threads).count(i)
    return counts


def _cmd_extract(args) -> int:
    try:
        if args.affine_check:
            if not args.ks:
                print("error: --affine-check needs --ks", file=sys.stderr)
                return 2
            ks = parse_range(args.ks)
            if args.empirical:
                samples = parse_range(args.samples_n) if args.samples_n else None
                tops = {}
                for k in ks:
                    ns = samples or list(range(1, args.i + 1))
                    counts = _counts_for(args.i, "k", k, ns, args.budget, args.threads)
                    fit = fitting.fit_in_2n(args.i, k, counts)
                    if not fit.consistent:
                        print(f"error: inconsistent fit at k={k}", file=sys.stderr)
                        return 1
                    tops[k] = fit.coefficients[args.i - 1]
                source = "fitted-counts"
            else:
                tops = {
                    k: formulas.interior_coefficient(args.i, args.i - 1).evaluate(
                        Fraction(2) ** k
                    )
                    for k in ks
                }
                source = "tabled-row"
            chk = fitting.check_affine_top_coefficient(args.i, tops, source=source)
            doc = {
                "rank": chk.i,
                "ks": list(chk.ks),
                "slope": _frac_text(chk.slope),
                "intercept": _frac_text(chk.intercept),
                "consistent": chk.consistent,
                "matches_table": chk.matches_table,
                "source": chk.source,
            }
            if args.format == "json":
                _emit(json.dumps(doc, indent=1), args.out)
            else:
                _emit(
                    f"rank {chk.i} top coefficient over ks={list(chk.ks)} ({source}):\n"
                    f"  {_frac_text(chk.slope)} * 2^k + ({_frac_text(chk.intercept)})"
                    f"  consistent={chk.consistent} matches_table={chk.matches_table}",
                    args.out,
                )
            return 0 if (chk.consistent and chk.matches_table) else 1

        if args.fix_k is not None:
            if not args.samples_n:
                print("error: --fix-k needs --samples-n", file=sys.stderr)
                return 2
            pts = parse_range(args.samples_n)
            counts = _counts_for(args.i, "k", args.fix_k, pts, args.budget, args.threads)
            fit = fitting.fit_in_2n(args.i, args.fix_k, counts, route=args.route)
        elif args.fix_n is not None:
            if not args.samples_k:
                print("error: --fix-n needs --samples-k", file=sys.stderr)
                return 2
            pts = parse_range(args.samples_k)
            counts = _counts_for(args.i, "n", args.fix_n, pts, args.budget, args.threads)
            fit = fitting.fit_in_2k(args.i, args.fix_n, counts)
        else:
            print("error: pick --fix-k/--samples-n, --fix-n/--samples-k, or --affine-check", file=sys.stderr)
            return 2
    except BudgetExceededError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        _emit(json.dumps(fitting.fit_report_json(fit), indent=1), args.out)
    else:
        _emit(_fit_text(fit), args.out)
    return 0 if fit.consistent else 1


def _cmd_catalog(args) -> int:
    _emit(json.dumps(formulas.formula_catalog(), indent=1), args.out)
    return 0


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET_BITS,
                   help="refuse work at or above 2^BUDGET rank evaluations")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", default=None, help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="persym",
        description="Exact rank censuses and closed-form checks for "
        "stacked persymmetric GF(2) matrix families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="compute one exact rank distribution")
    p.add_argument("--n", type=int, required=True, help="number of stacked blocks")
    p.add_argument("--k", type=int, required=True, help="columns per block")
    p.add_argument("--method", choices=("exhaustive", "multiset"), default="exhaustive")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    _add_common(p)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("verify", help="check censuses against closed forms")
    p.add_argument("--n", default=None, help="block counts, e.g. 1,3-4")
    p.add_argument("--k", default=None, help="column counts, e.g. 2-7")
    p.add_argument("--method", choices=("exhaustive", "multiset"), default="exhaustive")
    p.add_argument("--formulas-only", action="store_true",
                   help="run only the census-free identity suites")
    p.add_argument("--no-identities", action="store_true",
                   help="skip the census-free identity suites")
    p.add_argument("--cache-dir", default=os.environ.get("PERSYM_CACHE_DIR", ".census-cache"))
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("extract", help="recover coefficient rows from censuses")
    p.add_argument("--i", type=int, required=True, help="rank whose count is fitted")
    p.add_argument("--fix-k", type=int, default=None)
    p.add_argument("--samples-n", default=None, help="n values, e.g. 1-3")
    p.add_argument("--fix-n", type=int, default=None)
    p.add_argument("--samples-k", default=None, help="k values, e.g. 5-8")
    p.add_argument("--route", choices=("auto", "power", "factored"), default="auto")
    p.add_argument("--affine-check", action="store_true",
                   help="check the top coefficient is affine in 2^k")
    p.add_argument("--ks", default=None, help="k values for --affine-check")
    p.add_argument("--empirical", action="store_true",
                   help="affine check from censuses instead of tabled rows")
    p.add_argument("--format", choices=("text", "json"), default="text")
    _add_common(p)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("catalog", help="dump all tabled closed forms as JSON")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_catalog)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
