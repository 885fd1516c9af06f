"""Conjecture verification: census counts against closed forms.

Every comparison becomes a CheckResult with an exact verdict. Checks are
either normative (a mismatch is a genuine counterexample and gates the
exit code) or informational (boundary rows are reported for visibility
but expected to disagree at some points). Reports are deterministic:
anything timing- or machine-dependent lives in a separate meta section.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import fitting
from .census import (
    ENGINE_VERSION,
    BudgetExceededError,
    RankCensus,
    census_moment,
    full_census,
    kernel_moment,
    load_census,
    multiset_census,
    save_census,
)
from .formulas import (
    ClosedFormPoly,
    NotCoveredError,
    bracket_coefficient,
    count,
    fixed_n_row,
    full_rank_count,
    interior_coefficient,
    leading_affine_by_recurrence,
    leading_affine_pair,
    prefactor_poly,
    rank5_four_block_count,
    rank8_count,
    rank8_count_factored,
    rank8_fixed_k_row,
    rank8_row,
    rank8_special_row,
)

__all__ = [
    "CheckResult",
    "VerificationReport",
    "default_plan",
    "run_plan",
    "verify_case",
    "verify_census_pair",
    "verify_formula_identities",
    "verify_rank8_identities",
]

VERDICTS = ("match", "mismatch", "not-covered", "skipped-budget", "error")


@dataclass(frozen=True)
class CheckResult:
    """One comparison. Normative mismatches gate the exit code;
    informational ones are reported only."""

    check_id: str
    verdict: str
    normative: bool
    n: int | None = None
    k: int | None = None
    i: int | None = None
    expected: int | str | None = None
    observed: int | str | None = None
    detail: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def to_json(self) -> dict:
        doc = {"check": self.check_id, "verdict": self.verdict, "normative": self.normative}
        for name in ("n", "k", "i"):
            v = getattr(self, name)
            if v is not None:
                doc[name] = v
        if self.expected is not None:
            doc["expected"] = self.expected
        if self.observed is not None:
            doc["observed"] = self.observed
        if self.detail:
            doc["detail"] = self.detail
        return doc


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def extend(self, more) -> None:
        self.checks.extend(more)

    def tally(self) -> dict[str, int]:
        out = {v: 0 for v in VERDICTS}
        for c in self.checks:
            out[c.verdict] += 1
        out["normative_mismatches"] = sum(
            1 for c in self.checks if c.normative and c.verdict == "mismatch"
        )
        return out

    @property
    def exit_code(self) -> int:
        if any(c.verdict == "error" for c in self.checks):
            return 2
        if any(c.normative and c.verdict == "mismatch" for c in self.checks):
            return 1
        return 0

    def to_json(self, *, with_meta: bool = True) -> dict:
        doc = {
            "schema_version": 1,
            "checks": [c.to_json() for c in self.checks],
            "tally": self.tally(),
            "exit_code": self.exit_code,
        }
        if with_meta:
            doc["meta"] = self.meta
        return doc

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            point = " ".join(
                f"{name}={getattr(c, name)}"
                for name in ("n", "k", "i")
                if getattr(c, name) is not None
            )
            flag = "" if c.normative else " (info)"
            line = f"[{c.verdict:>14}] {c.check_id:<28} {point}{flag}"
            if c.verdict == "mismatch":
                line += f"  expected={c.expected} observed={c.observed}"
            if c.detail:
                line += f"  ({c.detail})"
            lines.append(line)
        t = self.tally()
        lines.append(
            f"-- {len(self.checks)} checks: {t['match']} match, "
            f"{t['mismatch']} mismatch ({t['normative_mismatches']} normative), "
            f"{t['not-covered']} not covered, {t['skipped-budget']} skipped, "
            f"{t['error']} errors"
        )
        return "\n".join(lines)


def _counts_digest(census: RankCensus) -> str:
    blob = f"{census.n}|{census.k}|{','.join(map(str, census.counts))}"
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def verify_case(census: RankCensus) -> list[CheckResult]:
    """All checks that apply to one exact census."""
    n, k = census.n, census.k
    digest = _counts_digest(census)
    checks: list[CheckResult] = []

    total = sum(census.counts)
    checks.append(
        CheckResult(
            "sum-identity", "match" if total == census.total else "mismatch",
            True, n=n, k=k, expected=census.total, observed=total,
            detail=f"census {digest}",
        )
    )

    if k <= 30:
        moment = kernel_moment(n, k).value
        observed = census_moment(census)
        checks.append(
            CheckResult(
                "kernel-moment", "match" if observed == moment else "mismatch",
                True, n=n, k=k, expected=moment, observed=observed,
            )
        )
        closed = (1 << (n * (k + 1))) + ((1 << k) - 1) * (1 << (n * (k - 1)))
        checks.append(
            CheckResult(
                "kernel-moment-closed", "match" if moment == closed else "mismatch",
                True, n=n, k=k, expected=closed, observed=moment,
            )
        )

    for i, observed in enumerate(census.counts):
        if i == 0:
            continue
        try:
            expected = count(n, k, i)
        except NotCoveredError as exc:
            checks.append(
                CheckResult(
                    "closed-form-count", "not-covered", False,
                    n=n, k=k, i=i, detail=str(exc),
                )
            )
            continue
        checks.append(
            CheckResult(
                "closed-form-count", "match" if expected == observed else "mismatch",
                True, n=n, k=k, i=i, expected=expected, observed=observed,
            )
        )

    if n == 4 and k >= 5 and len(census.counts) > 5:
        expected = rank5_four_block_count(k)
        observed = census.counts[5]
        detail = "deficient-boundary point" if k == 5 else ""
        checks.append(
            CheckResult(
                "rank5-four-block", "match" if expected == observed else "mismatch",
                True, n=n, k=k, i=5, expected=expected, observed=observed,
                detail=detail,
            )
        )

    if k < 2 * n and n <= 3:
        row = fixed_n_row(n, k).int_at(k)
        observed = census.counts[k]
        checks.append(
            CheckResult(
                "boundary-row-value", "match" if row == observed else "mismatch",
                False, n=n, k=k, i=k, expected=row, observed=observed,
                detail="table row evaluated at its deficient boundary",
            )
        )

    return checks


def verify_census_pair(a: RankCensus, b: RankCensus) -> CheckResult:
    """Equality of two censuses of the same point (e.g. the exhaustive
    and the multiset-reduced routes)."""
    if (a.n, a.k) != (b.n, b.k):
        raise ValueError("censuses cover different points")
    same = a.counts == b.counts
    return CheckResult(
        "census-two-routes", "match" if same else "mismatch", True,
        n=a.n, k=a.k,
        expected=",".join(map(str, a.counts)),
        observed=",".join(map(str, b.counts)),
        detail=f"{a.method} vs {b.method}",
    )


def _identity(check_id: str, ok: bool, detail: str, **point) -> CheckResult:
    return CheckResult(
        check_id, "match" if ok else "mismatch", True, detail=detail, **point
    )


def verify_rank8_identities(n_max: int = 10, k_min: int = 9, k_max: int = 20) -> list[CheckResult]:
    """Internal consistency of every tabled rank-8 form."""
    checks = []
    grid = [(n, k) for n in range(1, n_max + 1) for k in range(k_min, k_max + 1)]

    bad = [(n, k) for n, k in grid if rank8_count(n, k) != rank8_count_factored(n, k)]
    checks.append(
        _identity(
            "rank8-two-routes", not bad,
            f"power rows vs factored bracket on {len(grid)} points"
            + (f"; first failure {bad[0]}" if bad else ""),
        )
    )

    bad = [
        (n, k)
        for n, k in grid
        if n <= 3 and rank8_count(n, k) != 0
    ]
    checks.append(
        _identity(
            "rank8-vanishes-small-n", not bad,
            f"zero count for n <= 3, k in {k_min}..{k_max}"
            + (f"; first failure {bad[0]}" if bad else ""),
        )
    )

    for n in (4, 5, 6):
        scalar, poly = rank8_special_row(n)
        bad = [
            k for k in range(k_min, k_max + 1)
            if scalar * poly.int_at(k) != rank8_count(n, k)
        ]
        checks.append(
            _identity(
                "rank8-fixed-n-row", not bad,
                f"scalar*quartic vs power rows, k in {k_min}..{k_max}"
                + (f"; first failure k={bad[0]}" if bad else ""),
                n=n,
            )
        )

    for k in (9, 10):
        row = rank8_fixed_k_row(k)
        bad = [n for n in range(1, n_max + 1) if row.int_at(n) != rank8_count(n, k)]
        checks.append(
            _identity(
                "rank8-fixed-k-row", not bad,
                f"degree-8 row vs power rows, n in 1..{n_max}"
                + (f"; first failure n={bad[0]}" if bad else ""),
                k=k,
            )
        )

    pre = prefactor_poly(8)
    bracket = {j: bracket_coefficient(8, j) for j in range(5)}
    expanded = fitting.expand_product_form(pre, bracket)
    ok = all(expanded.get(j) == rank8_row(j) for j in range(9))
    checks.append(
        _identity(
            "rank8-bracket-expansion", ok,
            "prefactor * bracket reproduces all nine power rows as polynomials",
        )
    )

    bad = [k for k in range(8, k_max + 1) if rank8_count(4, k) != full_rank_count(4, k)]
    checks.append(
        _identity(
            "rank8-fullrank-n4", not bad,
            f"rank-8 count equals the full-rank product at n=4, k in 8..{k_max}"
            + (f"; first failure k={bad[0]}" if bad else ""),
            n=4,
        )
    )

    bad = []
    for j in range(9):
        for k in range(k_min, 31):
            v = rank8_row(j).evaluate(Fraction(2) ** k)
            if v.denominator != 1:
                bad.append((j, k))
    checks.append(
        _identity(
            "rank8-rows-integral", not bad,
            f"all nine rows integer-valued for k in {k_min}..30"
            + (f"; first failure {bad[0]}" if bad else ""),
        )
    )

    return checks


def verify_formula_identities() -> list[CheckResult]:
    """Internal consistency of the interior tables, products, affine law
    and bracket forms; no census required."""
    checks = []

    arec, brec = leading_affine_by_recurrence(64)
    ok = all(
        leading_affine_pair(j)[0] == Fraction(arec[j]) / Fraction(2) ** (j - 3)
        and leading_affine_pair(j)[1] == brec[j]
        for j in range(2, 65)
    )
    checks.append(
        _identity(
            "affine-closed-vs-recurrence", ok,
            "closed affine pairs match the recurrence sequences for 2 <= j <= 64",
        )
    )

    ok = all(
        interior_coefficient(i, i - 1)
        == ClosedFormPoly("2^k", {1: leading_affine_pair(i)[0], 0: -leading_affine_pair(i)[1]})
        for i in (2, 3, 4, 5)
    ) and rank8_row(7) == ClosedFormPoly(
        "2^k", {1: leading_affine_pair(8)[0], 0: -leading_affine_pair(8)[1]}
    )
    checks.append(
        _identity(
            "affine-top-rows", ok,
            "top interior coefficient equals a*2^k - b for i in {2,3,4,5,8}",
        )
    )

    pre5 = prefactor_poly(5)
    bracket5 = {j: bracket_coefficient(5, j) for j in range(3)}
    expanded5 = fitting.expand_product_form(pre5, bracket5)
    ok = all(expanded5.get(j) == interior_coefficient(5, j) for j in range(6))
    checks.append(
        _identity(
            "rank5-bracket-expansion", ok,
            "prefactor * bracket reproduces the six rank-5 power rows",
        )
    )

    bad = []
    for n in (1, 2, 3):
        for i in range(1, min(2 * n, 5) + 1):
            if i == 2 * n:
                continue
            for k in range(i + 1, 26):
                lead = ((1 << (i + 1)) - 1) * Fraction(2) ** (i * n)
                general = lead + sum(
                    interior_coefficient(i, j).evaluate(Fraction(2) ** k)
                    * Fraction(2) ** (j * n)
                    for j in range(i)
                )
                if general != fixed_n_row(n, i).evaluate(Fraction(2) ** k):
                    bad.append((n, i, k))
    checks.append(
        _identity(
            "general-vs-fixed-n-rows", not bad,
            "general coefficient rows reproduce the fixed-n tables (k <= 25)"
            + (f"; first failure {bad[0]}" if bad else ""),
        )
    )

    bad = [
        (n, k)
        for n in (1, 2, 3)
        for k in range(2 * n, 26)
        if fixed_n_row(n, 2 * n).int_at(k) != full_rank_count(n, k)
    ]
    checks.append(
        _identity(
            "fixed-n-fullrank-row", not bad,
            "fixed-n top rows equal the full-rank product (k <= 25)"
            + (f"; first failure {bad[0]}" if bad else ""),
        )
    )

    bad = [
        k
        for k in range(5, 31)
        if rank5_four_block_count(k)
        != ((1 << 6) - 1) * 2 ** (5 * 4)
        + sum(
            interior_coefficient(5, j).int_at(k) * 2 ** (4 * j) for j in range(5)
        )
    ]
    checks.append(
        _identity(
            "rank5-four-block-vs-rows", not bad,
            "quadratic rank-5 form equals the general rows at n=4 (k in 5..30)"
            + (f"; first failure k={bad[0]}" if bad else ""),
        )
    )

    bad = []
    for i in (1, 2, 3, 4, 5):
        for j in range(i):
            for k in range(i + 1, 31):
                if interior_coefficient(i, j).evaluate(Fraction(2) ** k).denominator != 1:
                    bad.append((i, j, k))
    checks.append(
        _identity(
            "interior-rows-integral", not bad,
            "interior coefficient rows integer-valued for k > i"
            + (f"; first failure {bad[0]}" if bad else ""),
        )
    )

    return checks


def default_plan() -> list[tuple[int, int, str]]:
    """Verification grid that completes in seconds: every point with at
    most 2^24 parameter evaluations."""
    plan = []
    for n, k_top in ((1, 10), (2, 9), (3, 7), (4, 5)):
        for k in range(1, k_top + 1):
            plan.append((n, k, "exhaustive"))
    return plan


def _cache_path(cache_dir, n: int, k: int) -> str:
    return os.path.join(cache_dir, f"census_v{ENGINE_VERSION}_n{n}_k{k}.json")


class _FileLock:
    """Advisory lock so two processes don't compute the same census."""

    def __init__(self, path: str, timeout: float = 600.0):
        self.path = path + ".lock"
        self.timeout = timeout
        self.fd = None

    def __enter__(self):
        deadline = time.monotonic() + self.timeout
        while True:
            try:
                self.fd = os.open(self.path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
                return self
            except FileExistsError:
                if time.monotonic() > deadline:
                    raise TimeoutError(f"lock {self.path} is stuck")
                time.sleep(0.05)

    def __exit__(self, *exc):
        if self.fd is not None:
            os.close(self.fd)
        try:
            os.unlink(self.path)
        except FileNotFoundError:
            pass
        return False


def _obtain_census(
    n: int, k: int, method: str, cache_dir, budget: int, threads
) -> tuple[RankCensus, str]:
    compute = multiset_census if method == "multiset-reduced" else full_census
    if cache_dir is None:
        return compute(n, k, budget=budget, threads=threads), "computed"
    os.makedirs(cache_dir, exist_ok=True)
    path = _cache_path(cache_dir, n, k)
    with _FileLock(path):
        if os.path.exists(path):
            census = load_census(path)
            if census.n == n and census.k == k:
                return census, "cache"
        census = compute(n, k, budget=budget, threads=threads)
        save_census(census, path)
    return census, "computed"


def run_plan(
    plan: list[tuple[int, int, str]] | None = None,
    *,
    cache_dir: str | None = None,
    budget: int = 30,
    threads: int | None = None,
    include_identities: bool = True,
) -> VerificationReport:
    """Census each plan point, check it against every applicable closed
    form, and append the census-free identity suites. Budget refusals
    and unexpected per-point failures are recorded, not raised."""
    if plan is None:
        plan = default_plan()
    report = VerificationReport()
    cases_meta = []
    start = time.perf_counter()
    for n, k, method in plan:
        try:
            census, source = _obtain_census(n, k, method, cache_dir, budget, threads)
        except BudgetExceededError as exc:
            report.checks.append(
                CheckResult(
                    "census-run", "skipped-budget", False, n=n, k=k,
                    detail=str(exc),
                )
            )
            continue
        except Exception as exc:
            report.checks.append(
                CheckResult(
                    "census-run", "error", True, n=n, k=k,
                    detail=f"{type(exc).__name__}: {exc}",
                )
            )
            continue
        report.extend(verify_case(census))
        cases_meta.append(
            {
                "n": n,
                "k": k,
                "method": census.method,
                "source": source,
                "seconds": census.seconds,
            }
        )
    if include_identities:
        report.extend(verify_formula_identities())
        report.extend(verify_rank8_identities())
    report.meta = {
        "engine_version": ENGINE_VERSION,
        "seconds": time.perf_counter() - start,
        "cases": cases_meta,
    }
    return report
