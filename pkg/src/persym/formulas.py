"""Closed-form rank counts for the stacked persymmetric family.

Counts live on the grid (n, k, i) with 0 <= i <= min(2n, k). Three regimes:

* interior (i < min(2n, k)): count is a polynomial in 2^n whose
  coefficients are polynomials in 2^k. Rows are tabled for i <= 5 and
  i = 8; for n <= 3 the same counts are also tabled directly as
  polynomials in 2^k.
* full rank (i = 2n <= k): an explicit product over the block count.
* deficient boundary (i = k < 2n): the complement of the interior total.

All arithmetic is exact (int / Fraction). Anything outside the tabled
regimes raises NotCoveredError rather than extrapolating.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "ClosedFormPoly",
    "NotCoveredError",
    "bracket_coefficient",
    "complement_count",
    "count",
    "covered",
    "fixed_n_row",
    "formula_catalog",
    "full_rank_count",
    "interior_coefficient",
    "interior_count",
    "leading_affine_by_recurrence",
    "leading_affine_pair",
    "predicted_census",
    "prefactor_poly",
    "rank5_four_block_count",
    "rank8_count",
    "rank8_count_factored",
    "rank8_fixed_k_row",
    "rank8_row",
    "rank8_special_row",
]


class NotCoveredError(Exception):
    """No tabled closed form covers the requested point."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class ClosedFormPoly:
    """Polynomial in a doubling variable (2^k or 2^n) with exact rational
    coefficients. Immutable; supports ring arithmetic and exact evaluation."""

    __slots__ = ("var", "_coeffs")

    def __init__(self, var: str, coeffs: Mapping[int, int | Fraction]):
        if var not in ("2^k", "2^n"):
            raise ValueError(f"unknown variable {var!r}")
        clean = {}
        for deg, c in coeffs.items():
            if deg < 0:
                raise ValueError("negative degree")
            c = _frac(c)
            if c != 0:
                clean[int(deg)] = c
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "_coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ClosedFormPoly is immutable")

    @property
    def degree(self) -> int:
        return max(self._coeffs, default=0)

    def coeff(self, deg: int) -> Fraction:
        return self._coeffs.get(deg, Fraction(0))

    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._coeffs)

    def _match(self, other: "ClosedFormPoly") -> None:
        if self.var != other.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")

    def __add__(self, other):
        if isinstance(other, ClosedFormPoly):
            self._match(other)
            out = dict(self._coeffs)
            for d, c in other._coeffs.items():
                out[d] = out.get(d, Fraction(0)) + c
            return ClosedFormPoly(self.var, out)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, ClosedFormPoly):
            return self + (other * -1)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, ClosedFormPoly):
            self._match(other)
            out: dict[int, Fraction] = {}
            for d1, c1 in self._coeffs.items():
                for d2, c2 in other._coeffs.items():
                    out[d1 + d2] = out.get(d1 + d2, Fraction(0)) + c1 * c2
            return ClosedFormPoly(self.var, out)
        if isinstance(other, (int, Fraction)):
            return ClosedFormPoly(
                self.var, {d: c * other for d, c in self._coeffs.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __eq__(self, other):
        if not isinstance(other, ClosedFormPoly):
            return NotImplemented
        return self.var == other.var and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.var, tuple(sorted(self._coeffs.items()))))

    def evaluate(self, value: int | Fraction) -> Fraction:
        """Value of the polynomial at a given value of the doubling variable."""
        value = _frac(value)
        return sum((c * value**d for d, c in self._coeffs.items()), Fraction(0))

    def int_at(self, exponent: int) -> int:
        """Exact integer value with the variable set to 2**exponent."""
        v = self.evaluate(Fraction(2) ** exponent)
        if v.denominator != 1:
            raise ValueError(
                f"non-integer value {v} at {self.var} = 2^{exponent}"
            )
        return int(v)

    def to_catalog(self) -> dict:
        return {
            "variable": self.var,
            "coefficients": {str(d): _frac_str(c) for d, c in sorted(self._coeffs.items())},
        }

    def __repr__(self):
        if not self._coeffs:
            return f"ClosedFormPoly({self.var!r}, 0)"
        terms = " + ".join(
            f"({c})*{self.var}^{d}" if d else f"({c})"
            for d, c in sorted(self._coeffs.items(), reverse=True)
        )
        return f"ClosedFormPoly[{terms}]"


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _pk(coeffs: Mapping[int, int | Fraction]) -> ClosedFormPoly:
    return ClosedFormPoly("2^k", coeffs)


def _pn(coeffs: Mapping[int, int | Fraction]) -> ClosedFormPoly:
    return ClosedFormPoly("2^n", coeffs)


# --------------------------------------------------------------------------
# Interior rank counts as polynomials in 2^n: for i < min(2n, k),
#   count(n, k, i) = (2^(i+1) - 1) * 2^(i*n) + sum_j row[i][j](2^k) * 2^(j*n).
# Coefficient rows are exact for every n once k > i.
# --------------------------------------------------------------------------

_INTERIOR_2N: dict[int, dict[int, ClosedFormPoly]] = {
    1: {0: _pk({0: -3})},
    2: {
        0: _pk({1: -2, 0: 18}),
        1: _pk({1: 2, 0: -25}),
    },
    3: {
        0: _pk({1: 14, 0: -176}),
        1: _pk({1: -21, 0: 294}),
        2: _pk({1: 7, 0: -133}),
    },
    4: {
        0: _pk({2: Fraction(4, 3), 1: -156, 0: Fraction(9440, 3)}),
        1: _pk({2: -2, 1: 269, 0: -5744}),
        2: _pk({2: Fraction(2, 3), 1: Fraction(-783, 6), 0: Fraction(19028, 6)}),
        3: _pk({1: Fraction(35, 2), 0: -605}),
    },
    5: {
        0: _pk({2: -20, 1: 2960, 0: -106752}),
        1: _pk({2: 35, 1: -5490, 0: 203872}),
        2: _pk({2: Fraction(-35, 2), 1: Fraction(6265, 2), 0: -123760}),
        3: _pk({2: Fraction(5, 2), 1: Fraction(-2565, 4), 0: 29150}),
        4: _pk({1: Fraction(155, 4), 0: -2573}),
    },
}

# Bracket coefficients of the factored interior form
#   count = prod_{t=0}^{E} (2^n - 2^t) * [ (2^(i+1)-1) * 2^((i-1-E)n)
#                                          + sum_j alpha[i][j](2^k) * 2^(jn) ]
# with E = (i-1)//2. Tabled for i = 5 and i = 8.

_BRACKET_2N: dict[int, dict[int, ClosedFormPoly]] = {
    5: {
        0: _pk({2: Fraction(5, 2), 1: -370, 0: 13344}),
        1: _pk({1: Fraction(155, 4), 0: -2132}),
    },
    8: {
        0: _pk(
            {
                4: Fraction(1, 1260),
                3: Fraction(-10005, 1260),
                2: Fraction(22047760, 1260),
                1: Fraction(-17459355 * 2**10, 1260),
                0: Fraction(35464937 * 2**17, 1260),
            }
        ),
        1: _pk({3: Fraction(31, 64), 2: Fraction(-12679, 8), 1: 1499448, 0: -408345 * 2**10}),
        2: _pk({2: Fraction(3937, 128), 1: -43688, 0: 222582 * 64}),
        3: _pk({1: Fraction(10795, 32), 0: -165820}),
    },
}

# Rank-8 interior coefficient rows (valid for k >= 9, every n; the value
# vanishes for n <= 3 and reduces to the full-rank product at n = 4).

_RANK8_2N: dict[int, ClosedFormPoly] = {
    8: _pk({0: 511}),
    7: _pk({1: Fraction(10795, 32), 0: -173485}),
    6: _pk({2: Fraction(3937, 128), 1: Fraction(-1559941, 32), 0: 16768318}),
    5: _pk(
        {
            3: Fraction(31, 64),
            2: Fraction(-261919, 128),
            1: Fraction(34854113, 16),
            0: -643492720,
        }
    ),
    4: _pk(
        {
            4: Fraction(1, 1260),
            3: Fraction(-20437, 1344),
            2: Fraction(25012451, 576),
            1: Fraction(-3341482313, 84),
            0: Fraction(7289277664) + Fraction(35464937 * 2**15, 315),
        }
    ),
    3: _pk(
        {
            4: Fraction(-1, 84),
            3: Fraction(102825, 672),
            2: Fraction(-126707455, 336),
            1: Fraction(110225510) + Fraction(5819785 * 256, 7),
            0: Fraction(-7081677751 * 2**8, 21),
        }
    ),
    2: _pk(
        {
            4: Fraction(1, 18),
            3: Fraction(-14735, 24),
            2: Fraction(25506523, 18),
            1: Fraction(-55123739 * 64, 3),
            0: Fraction(169923845 * 2**14, 9),
        }
    ),
    1: _pk(
        {
            4: Fraction(-2, 21),
            3: Fraction(20661, 21),
            2: Fraction(-6603656, 3),
            1: Fraction(24591157 * 2**9, 7),
            0: Fraction(-150434993 * 2**16, 21),
        }
    ),
    0: _pk(
        {
            4: Fraction(16, 315),
            3: Fraction(-10005 * 16, 315),
            2: Fraction(22047760 * 16, 315),
            1: Fraction(-17459355 * 2**10 * 16, 315),
            0: Fraction(35464937 * 2**17 * 16, 315),
        }
    ),
}

# Rank-8 count at small fixed n: scalar prefactor times a quartic in 2^k
# (valid for k >= 9).

_RANK8_FIXED_N: dict[int, tuple[int, ClosedFormPoly]] = {
    4: (16, _pk({4: 1, 3: -240, 2: 17920, 1: -491520, 0: 2**22})),
    5: (496, _pk({4: 1, 3: 9525, 2: -2169440, 1: 2**11 * 68115, 0: -9749 * 2**18})),
    6: (10416, _pk({4: 1, 3: 29055, 2: 52983280, 1: -(2**10) * 10751745, 0: 7323814 * 2**16})),
}

# Rank-8 count at small fixed k as a polynomial in 2^n.

_RANK8_FIXED_K: dict[int, ClosedFormPoly] = {
    9: _pn(
        {
            8: 511,
            7: -765,
            6: -127762,
            5: 440496,
            4: 8456800,
            3: -57511680,
            2: 118013952,
            1: -83951616,
            0: 14680064,
        }
    ),
    10: _pn(
        {
            8: 511,
            7: 171955,
            6: -897890,
            5: -38376240,
            4: 323250144,
            3: 271514880,
            2: -436135 * 2**14,
            1: 242795 * 2**16,
            0: -4445 * 2**21,
        }
    ),
}

# Complete rank distributions at fixed n as polynomials in 2^k.
# Row i is the exact count whenever i < min(2n, k), and row 2n is the
# full-rank product; at the deficient boundary i = k < 2n the row value
# generally differs from the true count.

_FIXED_N_2K: dict[int, dict[int, ClosedFormPoly]] = {
    1: {
        0: _pk({0: 1}),
        1: _pk({0: 3}),
        2: _pk({1: 2, 0: -4}),
    },
    2: {
        0: _pk({0: 1}),
        1: _pk({0: 9}),
        2: _pk({1: 6, 0: 30}),
        3: _pk({1: 42, 0: -168}),
        4: _pk({2: 4, 1: -48, 0: 128}),
    },
    3: {
        0: _pk({0: 1}),
        1: _pk({0: 21}),
        2: _pk({1: 14, 0: 266}),
        3: _pk({1: 294, 0: 1344}),
        4: _pk({2: 28, 1: 2604, 0: -22624}),
        5: _pk({2: 420, 1: -10080, 0: 53760}),
        6: _pk({3: 8, 2: -448, 1: 7168, 0: -32768}),
    },
}


def interior_coefficient(i: int, j: int) -> ClosedFormPoly:
    """Coefficient of 2^(j*n) in the interior count of rank i, as a
    polynomial in 2^k. The leading coefficient (j = i) is the constant
    2^(i+1) - 1 and is also returned here."""
    if j == i:
        return _pk({0: (1 << (i + 1)) - 1})
    if i in _INTERIOR_2N and 0 <= j < i:
        return _INTERIOR_2N[i][j]
    if i == 8 and 0 <= j < 8:
        return _RANK8_2N[j]
    raise NotCoveredError(f"no tabled coefficient for rank {i}, power {j}")


def bracket_coefficient(i: int, j: int) -> ClosedFormPoly:
    """Coefficient of 2^(j*n) inside the factored form's bracket."""
    top = i - 1 - (i - 1) // 2
    if j == top:
        return _pk({0: (1 << (i + 1)) - 1})
    if i in _BRACKET_2N and 0 <= j < top:
        return _BRACKET_2N[i][j]
    raise NotCoveredError(f"no tabled bracket coefficient for rank {i}, power {j}")


def prefactor_poly(i: int) -> ClosedFormPoly:
    """prod_{t=0}^{(i-1)//2} (X - 2^t) as a polynomial in X = 2^n."""
    if i < 1:
        raise ValueError("i must be >= 1")
    out = _pn({0: 1})
    for t in range((i - 1) // 2 + 1):
        out = out * _pn({1: 1, 0: -(1 << t)})
    return out


def fixed_n_row(n: int, i: int) -> ClosedFormPoly:
    """Row i of the complete fixed-n distribution (n <= 3), in 2^k."""
    try:
        return _FIXED_N_2K[n][i]
    except KeyError:
        raise NotCoveredError(f"no fixed-n table row for n={n}, i={i}") from None


def leading_affine_pair(i: int) -> tuple[Fraction, Fraction]:
    """(a, b) with the top interior coefficient equal to a * 2^k - b."""
    if i < 2:
        raise ValueError("defined for i >= 2")
    a = Fraction((1 << (2 * i - 1)) - 3 * (1 << (i - 1)) + 1, 3) / (
        Fraction(2) ** (i - 3)
    )
    b = Fraction((1 << (2 * i + 3)) - 15 * (1 << i) + 7, 3)
    return a, b


def leading_affine_by_recurrence(j_max: int) -> tuple[dict[int, int], dict[int, int]]:
    """Integer sequences from (1, 25) under a_j = 4a + 2^(j-1) - 1 and
    b_j = 4b + 33 + 40*(2^(j-3) - 1); keys run 2..j_max. They determine
    the affine pairs: leading_affine_pair(i) == (a_i / 2^(i-3), b_i)."""
    a = {2: 1}
    b = {2: 25}
    for j in range(3, j_max + 1):
        a[j] = 4 * a[j - 1] + (1 << (j - 1)) - 1
        b[j] = 4 * b[j - 1] + 33 + 40 * ((1 << (j - 3)) - 1)
    return a, b


def covered(n: int, k: int, i: int) -> bool:
    """True when count(n, k, i) can be produced from the tabled forms."""
    try:
        count(n, k, i)
    except NotCoveredError:
        return False
    return True


def interior_count(n: int, k: int, i: int) -> int:
    """Exact count for i strictly below min(2n, k)."""
    if not 0 <= i < min(2 * n, k):
        raise ValueError(f"i={i} is not interior for n={n}, k={k}")
    if i == 0:
        return 1
    if n <= 3:
        return fixed_n_row(n, i).int_at(k)
    if i in _INTERIOR_2N or i == 8:
        total = Fraction(0)
        for j in range(i + 1):
            total += interior_coefficient(i, j).evaluate(Fraction(2) ** k) * (
                Fraction(2) ** (j * n)
            )
        if total.denominator != 1:
            raise NotCoveredError(f"coefficient row for i={i} not integral at k={k}")
        return int(total)
    raise NotCoveredError(f"no interior form for rank {i} at n={n}")


def full_rank_count(n: int, k: int) -> int:
    """Count of full-rank members, 2^n * prod_{j=1}^{n} (2^k - 2^(2n-j)).

    Only meaningful when the matrix can reach rank 2n, i.e. k >= 2n."""
    if k < 2 * n:
        raise ValueError(f"rank 2n is unreachable for k={k} < 2n={2 * n}")
    v = 1 << n
    for j in range(1, n + 1):
        v *= (1 << k) - (1 << (2 * n - j))
    return v


def complement_count(n: int, k: int) -> int:
    """Count at the deficient boundary i = k < 2n: total minus all
    interior counts. Needs every interior rank to be covered."""
    if k >= 2 * n:
        raise ValueError(f"k={k} is not below 2n={2 * n}")
    total = 1 << (n * (k + 1))
    for i in range(k):
        total -= interior_count(n, k, i)
    if total < 0:
        raise ValueError(f"negative complement at n={n}, k={k}")
    return total


def count(n: int, k: int, i: int) -> int:
    """Exact closed-form count of rank-i members, or NotCoveredError."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    top = min(2 * n, k)
    if i < 0 or i > top:
        return 0
    if i < top:
        return interior_count(n, k, i)
    if i == 2 * n:
        return full_rank_count(n, k)
    return complement_count(n, k)


def predicted_census(n: int, k: int) -> tuple[int, ...]:
    """Full predicted distribution; raises NotCoveredError if any rank
    bucket has no tabled form."""
    return tuple(count(n, k, i) for i in range(min(2 * n, k) + 1))


def rank5_four_block_count(k: int) -> int:
    """Rank-5 count for the four-block family, 6300*(4^k + 100*2^k - 1856),
    valid for k >= 5."""
    if k < 5:
        raise ValueError("valid for k >= 5")
    return 6300 * ((1 << (2 * k)) + 100 * (1 << k) - 1856)


def rank8_row(j: int) -> ClosedFormPoly:
    """Coefficient of 2^(j*n) in the rank-8 count for k >= 9, in 2^k."""
    try:
        return _RANK8_2N[j]
    except KeyError:
        raise NotCoveredError(f"rank-8 rows carry powers 0..8, not {j}") from None


def rank8_count(n: int, k: int) -> int:
    """Exact rank-8 count via the power-basis rows (k >= 9), the full-rank
    product (n = 4, k = 8), or zero when rank 8 is unreachable."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    if min(2 * n, k) < 8:
        return 0
    if k >= 9:
        total = Fraction(0)
        for j in range(9):
            total += _RANK8_2N[j].evaluate(Fraction(2) ** k) * (Fraction(2) ** (j * n))
        if total.denominator != 1:
            raise NotCoveredError(f"rank-8 rows not integral at k={k}")
        return int(total)
    if n == 4:
        return full_rank_count(4, 8)
    raise NotCoveredError(f"rank 8 at the deficient boundary k=8, n={n} is not tabled")


def rank8_count_factored(n: int, k: int) -> int:
    """Rank-8 count for k >= 9 via the factored route: the quartic
    prefactor in 2^n times an explicit bracket. Independent of
    rank8_count's row table for cross-checking."""
    if k < 9:
        raise ValueError("factored rank-8 form is tabled for k >= 9")
    X = Fraction(2) ** n
    Y = Fraction(2) ** k
    p = X**4 - 15 * X**3 + 70 * X**2 - 120 * X + 64
    total = (
        Fraction(Y**4, 1260) * p
        + Fraction(Y**3, 21 * 2**6) * p * (651 * X - 10672)
        + Fraction(Y**2, 315 * 2**7)
        * p
        * (1240155 * X**2 - 63902160 * X + 22047760 * 2**5)
        + Fraction(Y, 21 * 2**5)
        * p
        * (226695 * X**3 - 29358336 * X**2 + 1007629056 * X - 1163957 * 2**13)
        + Fraction(1, 315)
        * p
        * (
            160965 * X**4
            - 52233300 * X**3
            + 4487253120 * X**2
            - 131715763200 * X
            + 1162115055616
        )
    )
    if total.denominator != 1:
        raise NotCoveredError(f"factored rank-8 form not integral at n={n}, k={k}")
    return int(total)


def rank8_special_row(n: int) -> tuple[int, ClosedFormPoly]:
    """(scalar, quartic in 2^k) whose product is the rank-8 count at this
    fixed n for k >= 9; tabled for n in {4, 5, 6}."""
    try:
        return _RANK8_FIXED_N[n]
    except KeyError:
        raise NotCoveredError(f"no fixed-n rank-8 row for n={n}") from None


def rank8_fixed_k_row(k: int) -> ClosedFormPoly:
    """Rank-8 count at fixed k in {9, 10} as a degree-8 polynomial in 2^n."""
    try:
        return _RANK8_FIXED_K[k]
    except KeyError:
        raise NotCoveredError(f"no fixed-k rank-8 row for k={k}") from None


def _rows_catalog(rows: Mapping[int, ClosedFormPoly]) -> dict:
    return {str(j): rows[j].to_catalog() for j in sorted(rows)}


def formula_catalog() -> dict:
    """Machine-readable dump of every tabled closed form."""
    a_pairs = {
        str(i): [_frac_str(v) for v in leading_affine_pair(i)] for i in range(2, 9)
    }
    return {
        "schema_version": 1,
        "interior_power_basis": {
            "description": (
                "count(n,k,i) = (2^(i+1)-1)*2^(i n) + sum_j row[j](2^k)*2^(j n) "
                "for i < min(2n,k)"
            ),
            "rows": {str(i): _rows_catalog(r) for i, r in _INTERIOR_2N.items()},
        },
        "interior_bracket_basis": {
            "description": (
                "count = prod_{t=0}^{(i-1)//2} (2^n - 2^t) * "
                "[(2^(i+1)-1)*2^((i-1-(i-1)//2) n) + sum_j row[j](2^k)*2^(j n)]"
            ),
            "rows": {str(i): _rows_catalog(r) for i, r in _BRACKET_2N.items()},
        },
        "fixed_n_distributions": {
            "description": "row i = count(n,k,i) in 2^k for i < min(2n,k) or i = 2n",
            "rows": {str(n): _rows_catalog(r) for n, r in _FIXED_N_2K.items()},
        },
        "rank8_power_basis": _rows_catalog(_RANK8_2N),
        "rank8_fixed_n": {
            str(n): {"scalar": c, "poly": p.to_catalog()}
            for n, (c, p) in _RANK8_FIXED_N.items()
        },
        "rank8_fixed_k": {str(k): p.to_catalog() for k, p in _RANK8_FIXED_K.items()},
        "full_rank_product": "2^n * prod_{j=1}^{n} (2^k - 2^(2n-j)) for k >= 2n",
        "rank5_four_block": "6300*(4^k + 100*2^k - 1856) for k >= 5",
        "leading_affine_pairs": {
            "description": "top interior coefficient a_(i-1) = a*2^k - b",
            "pairs": a_pairs,
        },
    }
