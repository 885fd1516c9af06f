"""Acceptance gate: ten criteria, one printed pass/fail line each.

Every comparison is exact integer equality; runtime bounds are asserted
with a warmed JIT cache so they measure enumeration work.
"""

import math
import os
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from persym import (
    BudgetExceededError,
    census_moment,
    fit_in_2k,
    fit_in_2n,
    full_census,
    full_rank_count,
    kernel_moment,
    multiset_census,
    predicted_census,
    rank5_four_block_count,
    rank8_count,
)
from persym import fitting as FIT
from persym import formulas as F
from persym import verify as V

POINTS_N1 = [(1, k) for k in range(1, 11)]
POINTS_N2 = [(2, k) for k in range(1, 10)]
POINTS_N3 = [(3, k) for k in range(1, 8)]
POINT_N4 = (4, 5)
ALL_POINTS = POINTS_N1 + POINTS_N2 + POINTS_N3 + [POINT_N4]


@pytest.fixture
def announce(capsys):
    @contextmanager
    def run(num: int):
        try:
            yield
        except BaseException:
            with capsys.disabled():
                print(f"[ACCEPT] criterion {num}: FAIL")
            raise
        with capsys.disabled():
            print(f"[ACCEPT] criterion {num}: PASS")

    return run


def test_criterion_01_single_block_exact(announce, warm_engine, census_of):
    with announce(1):
        start = time.perf_counter()
        censuses = [full_census(1, k) for k in range(1, 11)]
        elapsed = time.perf_counter() - start
        for k, census in zip(range(1, 11), censuses):
            assert census.counts == predicted_census(1, k)
            if k >= 2:
                assert census.counts[2] == 2 ** (k + 1) - 4
                assert census.counts[1] == 3
        assert elapsed < 1.0, f"took {elapsed:.3f}s"


def test_criterion_02_two_block_exact(announce, warm_engine, census_of):
    with announce(2):
        start = time.perf_counter()
        small = [full_census(2, k) for k in range(1, 8)]
        elapsed_small = time.perf_counter() - start
        for k, census in zip(range(1, 8), small):
            assert census.counts == predicted_census(2, k)
        for k in (8, 9):
            assert census_of(2, k).counts == predicted_census(2, k)
        assert census_of(2, 4).counts == (1, 9, 126, 504, 384)
        assert elapsed_small < 10.0, f"took {elapsed_small:.3f}s"


def test_criterion_03_three_block_exact(announce, warm_engine, census_of):
    with announce(3):
        start = time.perf_counter()
        censuses = [full_census(3, k) for k in range(1, 8)]
        elapsed = time.perf_counter() - start
        for k, census in zip(range(1, 8), censuses):
            assert census.counts == predicted_census(3, k)
        top = censuses[5].counts[6]  # k = 6, full rank
        assert top == 2 ** (3 * 6 + 3) - 7 * 2 ** (2 * 6 + 6) + 7 * 2 ** (6 + 10) - 32768
        assert top == 688128
        assert elapsed < 30.0, f"took {elapsed:.3f}s"


def test_criterion_04_four_block_rank5_three_way(announce, census_of):
    with announce(4):
        census = census_of(4, 5)
        observed = census.counts[5]
        assert observed == 14918400
        assert observed == rank5_four_block_count(5)
        assert observed == F.complement_count(4, 5)
        assert census.counts == predicted_census(4, 5)


def test_criterion_05_kernel_moment_identity(announce, census_of):
    with announce(5):
        for n, k in ALL_POINTS:
            census = census_of(n, k)
            assert census_moment(census) == kernel_moment(n, k).value, (n, k)


def test_criterion_06_sum_identity(announce, census_of):
    with announce(6):
        for n, k in ALL_POINTS:
            census = census_of(n, k)
            assert sum(census.counts) == 1 << (n * (k + 1)), (n, k)


def test_criterion_07_coefficient_recovery(announce, gamma_of):
    with announce(7):
        # rank counts as polynomials in 2^n at k = 5, 6, 7
        windows = {
            2: [(1, 2, 3), (2, 3, 4)],
            3: [(1, 2, 3), (2, 3, 4)],
            4: [(2, 3), (3, 4)],
            5: [(3, 4)],  # n = 5 censuses are beyond desk scale
        }
        for k in (5, 6, 7):
            for i, sample_sets in windows.items():
                fits = []
                for ns in sample_sets:
                    counts = {n: gamma_of(n, k, i) for n in ns}
                    fit = fit_in_2n(i, k, counts)
                    assert fit.consistent, (i, k, ns)
                    for j in range(i + 1):
                        expected = F.interior_coefficient(i, j).evaluate(
                            Fraction(2) ** k
                        )
                        assert fit.coefficients[j] == expected, (i, j, k)
                    fits.append(fit.coefficients)
                assert len(set(fits)) == 1  # window independence

        # complete fixed-n coefficient matrices in 2^k
        windows_2k = {
            (1, 1): (2, 3, 4),
            (1, 2): (2, 3, 4),
            (2, 1): (2, 3, 4),
            (2, 2): (3, 4, 5),
            (2, 3): (4, 5, 6),
            (2, 4): (4, 5, 6, 7),
            (3, 1): (2, 3, 4),
            (3, 2): (3, 4, 5),
            (3, 3): (4, 5, 6),
            (3, 4): (5, 6, 7),
            (3, 5): (6, 7, 8),
            (3, 6): (6, 7, 8, 9),
        }
        for (n, i), ks in windows_2k.items():
            counts = {k: gamma_of(n, k, i) for k in ks}
            fit = fit_in_2k(i, n, counts)
            assert fit.consistent, (n, i)
            row = F.fixed_n_row(n, i)
            assert fit.coefficients == tuple(
                row.coeff(j) for j in range(i // 2 + 1)
            ), (n, i)


def test_criterion_08_affine_top_coefficient(announce, gamma_of):
    with announce(8):
        arec, brec = F.leading_affine_by_recurrence(64)
        for j in range(2, 65):
            a, b = F.leading_affine_pair(j)
            assert a == Fraction(arec[j]) / Fraction(2) ** (j - 3)
            assert b == brec[j]
        assert [arec[j] for j in range(2, 8)] == [1, 7, 35, 155, 651, 2667]
        assert [brec[j] for j in range(2, 8)] == [25, 133, 605, 2573, 10605, 43053]
        assert F.leading_affine_pair(8) == (Fraction(10795, 32), Fraction(173485))

        # empirical confirmation from censuses for i <= 4
        plans = {
            2: ((1, 2), (3, 4, 5)),
            3: ((1, 2, 3), (4, 5, 6)),
            4: ((2, 3), (5, 6, 7)),
        }
        for i, (ns, ks) in plans.items():
            tops = {}
            for k in ks:
                fit = fit_in_2n(i, k, {n: gamma_of(n, k, i) for n in ns})
                tops[k] = fit.coefficients[i - 1]
            chk = FIT.check_affine_top_coefficient(i, tops, source="fitted-counts")
            assert chk.consistent and chk.matches_table, i
            assert chk.source == "fitted-counts"

        # i = 5 needs five-block censuses; formula-level only, flagged
        tops5 = {
            k: F.interior_coefficient(5, 4).evaluate(Fraction(2) ** k)
            for k in (6, 7, 8)
        }
        chk5 = FIT.check_affine_top_coefficient(5, tops5, source="tabled-row")
        assert chk5.consistent and chk5.matches_table
        assert chk5.source == "tabled-row"


def test_criterion_09_rank8_identity_suite(announce):
    with announce(9):
        start = time.perf_counter()
        checks = V.verify_rank8_identities(n_max=10, k_min=9, k_max=20)
        elapsed = time.perf_counter() - start
        assert all(c.verdict == "match" for c in checks), [
            (c.check_id, c.verdict) for c in checks if c.verdict != "match"
        ]
        ids = {c.check_id for c in checks}
        for want in (
            "rank8-two-routes",
            "rank8-vanishes-small-n",
            "rank8-fixed-n-row",
            "rank8-fixed-k-row",
            "rank8-bracket-expansion",
            "rank8-fullrank-n4",
        ):
            assert want in ids
        assert elapsed < 1.0, f"took {elapsed:.3f}s"


def test_criterion_10_rank8_brute_force_out_of_scope(announce):
    with announce(10):
        # exhaustive rank-8 confirmation needs >= 2^36 evaluations and is
        # refused at the default budget; the identity suite plus the
        # flag-gated job below stand in for it
        with pytest.raises(BudgetExceededError):
            full_census(4, 8)
        with pytest.raises(BudgetExceededError):
            multiset_census(4, 8)
        evals = math.comb((1 << 9) + 3, 4)
        assert evals.bit_length() == 32  # still refused at the default 2^30
        assert all(
            c.verdict == "match" for c in V.verify_rank8_identities(n_max=6, k_max=12)
        )


@pytest.mark.skipif(
    os.environ.get("PERSYM_RUN_LONG") != "1",
    reason="multi-minute rank-8 confirmation; set PERSYM_RUN_LONG=1 to run",
)
def test_long_rank8_brute_force_confirmation():
    census = multiset_census(4, 8, budget=33)
    assert census.counts[8] == rank8_count(4, 8)
    assert census.counts[8] == full_rank_count(4, 8)
    assert census_moment(census) == kernel_moment(4, 8).value
    for i in range(6):
        assert census.counts[i] == F.interior_count(4, 8, i)
