"""Exact recovery of closed-form coefficients from census counts.

Fits are exact linear algebra over Fraction: pick just enough sample
points to determine the unknowns, solve, then replay every remaining
sample as a holdout. A holdout mismatch is reported as an inconsistent
fit (a counterexample to the assumed shape), never as a numerical issue.

Counts are supplied by the caller as plain mappings, so this module
stays independent of how they were produced (census engine, closed
forms, or files).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .formulas import ClosedFormPoly, leading_affine_pair, prefactor_poly

__all__ = [
    "AffineCheck",
    "CoefficientFit",
    "expand_product_form",
    "fit_affine_line",
    "fit_in_2k",
    "fit_in_2n",
    "fit_report_json",
    "refactor_product_form",
    "solve_exact",
]


def solve_exact(
    matrix: Sequence[Sequence[int | Fraction]],
    rhs: Sequence[int | Fraction],
) -> list[Fraction]:
    """Solve a square linear system exactly by Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in matrix]
    b = [Fraction(x) for x in rhs]
    size = len(m)
    if any(len(row) != size for row in m) or len(b) != size:
        raise ValueError("system is not square")
    for col in range(size):
        pivot = next((r for r in range(col, size) if m[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular system")
        m[col], m[pivot] = m[pivot], m[col]
        b[col], b[pivot] = b[pivot], b[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        b[col] *= inv
        for r in range(size):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
                b[r] -= f * b[col]
    return b


@dataclass(frozen=True)
class CoefficientFit:
    """Result of recovering one rank count's coefficient row.

    coefficients[j] multiplies the j-th power of the fitted variable
    (2^n or 2^k). For variable 2^n the known leading coefficient
    2^(i+1) - 1 at power i is included. route is "power" (direct) or
    "factored" (divide out the vanishing prefactor first, then expand);
    bracket holds the factored form's inner coefficients when that
    route was used.
    """

    i: int
    variable: str
    fixed_name: str
    fixed_value: int
    route: str
    sample_points: tuple[int, ...]
    holdout_points: tuple[int, ...]
    coefficients: tuple[Fraction, ...]
    verdict: str
    mismatches: tuple[tuple[int, int, int], ...] = ()
    bracket: tuple[Fraction, ...] | None = None
    zero_checked_points: tuple[int, ...] = ()

    @property
    def consistent(self) -> bool:
        return self.verdict == "consistent"

    def predict(self, value_exponent: int) -> Fraction:
        """Predicted count with the fitted variable set to 2**value_exponent."""
        x = Fraction(2) ** value_exponent
        return sum(
            (c * x**j for j, c in enumerate(self.coefficients)), Fraction(0)
        )


def _check_samples(points: Sequence[int], counts: Mapping[int, int], who: str) -> list[int]:
    pts = sorted(points)
    if len(set(pts)) != len(pts):
        raise ValueError(f"duplicate {who} sample points")
    missing = [p for p in pts if p not in counts]
    if missing:
        raise ValueError(f"no counts supplied for {who} = {missing}")
    return pts


def _holdout_verdict(
    coefficients: Sequence[Fraction], holdouts: Sequence[int], counts: Mapping[int, int]
) -> tuple[str, tuple[tuple[int, int, int], ...]]:
    bad = []
    for p in holdouts:
        x = Fraction(2) ** p
        pred = sum((c * x**j for j, c in enumerate(coefficients)), Fraction(0))
        if pred != counts[p]:
            bad.append((p, int(pred) if pred.denominator == 1 else pred, counts[p]))
    if bad:
        return "inconsistent", tuple(bad)
    return "consistent", ()


def fit_in_2n(
    i: int,
    k: int,
    counts: Mapping[int, int],
    *,
    route: str = "auto",
) -> CoefficientFit:
    """Fit the rank-i count at fixed k as a polynomial in 2^n.

    counts maps each sampled n to the exact rank-i count at (n, k).
    The leading term (2^(i+1) - 1) * 2^(i*n) is known, leaving i
    unknowns on the power route. The factored route divides by
    prod_t (2^n - 2^t) first, which both shrinks the system to
    i - 1 - (i-1)//2 unknowns and discards samples where the prefactor
    vanishes (their counts are only checked to be zero).
    """
    if i < 1:
        raise ValueError("i must be >= 1")
    if route not in ("auto", "power", "factored"):
        raise ValueError(f"unknown route {route!r}")
    pts = _check_samples(list(counts), counts, "n")
    lead = (1 << (i + 1)) - 1
    E = (i - 1) // 2
    usable = [p for p in pts if p > E]

    if route == "auto":
        route = "power" if len(pts) >= i else "factored"
    if route == "power":
        if len(pts) < i:
            raise ValueError(f"power route needs at least {i} samples, got {len(pts)}")
        base, holdouts = pts[:i], pts[i:]
        matrix = [[Fraction(2) ** (j * p) for j in range(i)] for p in base]
        rhs = [Fraction(counts[p]) - lead * Fraction(2) ** (i * p) for p in base]
        sol = solve_exact(matrix, rhs)
        coeffs = tuple(sol) + (Fraction(lead),)
        verdict, bad = _holdout_verdict(coeffs, holdouts, counts)
        return CoefficientFit(
            i=i, variable="2^n", fixed_name="k", fixed_value=k, route="power",
            sample_points=tuple(base), holdout_points=tuple(holdouts),
            coefficients=coeffs, verdict=verdict, mismatches=bad,
        )

    top = i - 1 - E
    if len(usable) < top:
        raise ValueError(
            f"factored route needs {top} samples with n > {E}, got {len(usable)}"
        )
    pre = prefactor_poly(i)
    zero_pts = tuple(p for p in pts if p <= E)
    bad = tuple((p, 0, counts[p]) for p in zero_pts if counts[p] != 0)
    base, holdouts = usable[:top], usable[top:]
    matrix = [[Fraction(2) ** (j * p) for j in range(top)] for p in base]
    rhs = []
    for p in base:
        scaled = Fraction(counts[p]) / pre.evaluate(Fraction(2) ** p)
        rhs.append(scaled - lead * Fraction(2) ** (top * p))
    sol = solve_exact(matrix, rhs)
    bracket = tuple(sol) + (Fraction(lead),)
    expanded = expand_product_form(pre, dict(enumerate(bracket)))
    coeffs = tuple(expanded.get(j, Fraction(0)) for j in range(i + 1))
    verdict, more = _holdout_verdict(coeffs, holdouts, counts)
    if bad:
        verdict = "inconsistent"
    return CoefficientFit(
        i=i, variable="2^n", fixed_name="k", fixed_value=k, route="factored",
        sample_points=tuple(base), holdout_points=tuple(holdouts),
        coefficients=coeffs, verdict=verdict, mismatches=bad + more,
        bracket=bracket, zero_checked_points=zero_pts,
    )


def fit_in_2k(i: int, n: int, counts: Mapping[int, int]) -> CoefficientFit:
    """Fit the rank-i count at fixed n as a polynomial in 2^k with
    i//2 + 1 unknown coefficients; counts maps sampled k to counts."""
    if i < 1:
        raise ValueError("i must be >= 1")
    pts = _check_samples(list(counts), counts, "k")
    unknowns = i // 2 + 1
    if len(pts) < unknowns:
        raise ValueError(f"need at least {unknowns} samples, got {len(pts)}")
    base, holdouts = pts[:unknowns], pts[unknowns:]
    matrix = [[Fraction(2) ** (j * p) for j in range(unknowns)] for p in base]
    rhs = [Fraction(counts[p]) for p in base]
    sol = solve_exact(matrix, rhs)
    coeffs = tuple(sol)
    verdict, bad = _holdout_verdict(coeffs, holdouts, counts)
    return CoefficientFit(
        i=i, variable="2^k", fixed_name="n", fixed_value=n, route="power",
        sample_points=tuple(base), holdout_points=tuple(holdouts),
        coefficients=coeffs, verdict=verdict, mismatches=bad,
    )


def expand_product_form(prefactor: ClosedFormPoly, bracket: Mapping[int, object]) -> dict:
    """Multiply out prefactor(X) * sum_j bracket[j] X^j.

    bracket values may be Fractions or ClosedFormPoly coefficients; the
    result maps powers of X to the same kind of value.
    """
    out: dict[int, object] = {}
    for dp, cp in prefactor.coeffs().items():
        for db, cb in bracket.items():
            term = cb * cp
            key = dp + db
            out[key] = term if key not in out else out[key] + term
    return {d: v for d, v in out.items() if not _is_zero(v)}


def refactor_product_form(coefficients: Mapping[int, object], i: int) -> dict:
    """Inverse of expand_product_form: divide a power-basis row by the
    rank-i prefactor via synthetic division at each root 2^t. Raises
    ValueError when the prefactor does not divide exactly."""
    work = dict(coefficients)
    for t in range((i - 1) // 2 + 1):
        root = 1 << t
        degree = max(work, default=0)
        quot: dict[int, object] = {}
        carry = work.get(degree, Fraction(0))
        for d in range(degree - 1, -1, -1):
            quot[d] = carry
            carry = work.get(d, Fraction(0)) + carry * root
        if not _is_zero(carry):
            raise ValueError(f"prefactor root 2^{t} does not divide the row")
        work = {d: v for d, v in quot.items() if not _is_zero(v)}
    return work


def _is_zero(v) -> bool:
    if isinstance(v, ClosedFormPoly):
        return not v.coeffs()
    return v == 0


@dataclass(frozen=True)
class AffineCheck:
    """Outcome of testing that the top interior coefficient is affine in
    2^k, i.e. equal to slope * 2^k + intercept across the given ks."""

    i: int
    ks: tuple[int, ...]
    slope: Fraction
    intercept: Fraction
    consistent: bool
    matches_table: bool
    source: str


def fit_affine_line(values: Mapping[int, Fraction]) -> tuple[Fraction, Fraction]:
    """Slope and intercept of v = slope * 2^k + intercept through the
    first two points; caller checks the rest."""
    ks = sorted(values)
    if len(ks) < 2:
        raise ValueError("need at least two points")
    k0, k1 = ks[0], ks[1]
    x0, x1 = Fraction(2) ** k0, Fraction(2) ** k1
    slope = (Fraction(values[k1]) - Fraction(values[k0])) / (x1 - x0)
    intercept = Fraction(values[k0]) - slope * x0
    return slope, intercept


def check_affine_top_coefficient(
    i: int,
    top_values: Mapping[int, Fraction],
    *,
    source: str,
) -> AffineCheck:
    """Fit the top coefficient a_(i-1) as affine in 2^k and compare with
    the tabled pair (slope a, intercept -b)."""
    slope, intercept = fit_affine_line(top_values)
    consistent = all(
        slope * Fraction(2) ** k + intercept == Fraction(v)
        for k, v in top_values.items()
    )
    a, b = leading_affine_pair(i)
    return AffineCheck(
        i=i,
        ks=tuple(sorted(top_values)),
        slope=slope,
        intercept=intercept,
        consistent=consistent,
        matches_table=(slope == a and intercept == -b),
        source=source,
    )


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def fit_report_json(fit: CoefficientFit) -> dict:
    """JSON-ready description of one fit."""
    doc = {
        "rank": fit.i,
        "variable": fit.variable,
        "fixed": {fit.fixed_name: fit.fixed_value},
        "route": fit.route,
        "sample_points": list(fit.sample_points),
        "holdout_points": list(fit.holdout_points),
        "coefficients": [_frac_str(c) for c in fit.coefficients],
        "verdict": fit.verdict,
    }
    if fit.mismatches:
        doc["mismatches"] = [
            {"point": p, "predicted": str(pred), "observed": str(obs)}
            for p, pred, obs in fit.mismatches
        ]
    if fit.bracket is not None:
        doc["bracket"] = [_frac_str(c) for c in fit.bracket]
    if fit.zero_checked_points:
        doc["zero_checked_points"] = list(fit.zero_checked_points)
    return doc
