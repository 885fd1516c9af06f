"""Coefficient recovery: exact solves, routes, holdouts, round trips."""

from fractions import Fraction

import pytest

from persym import fitting as FIT
from persym import formulas as F


class TestSolveExact:
    def test_simple(self):
        assert FIT.solve_exact([[2, 0], [0, 4]], [6, 2]) == [3, Fraction(1, 2)]

    def test_pivoting(self):
        sol = FIT.solve_exact([[0, 1], [1, 0]], [5, 7])
        assert sol == [7, 5]

    def test_singular(self):
        with pytest.raises(ValueError):
            FIT.solve_exact([[1, 2], [2, 4]], [1, 2])

    def test_not_square(self):
        with pytest.raises(ValueError):
            FIT.solve_exact([[1, 2]], [1])


class TestFitIn2n:
    def test_power_route_rank2(self, gamma_of):
        counts = {n: gamma_of(n, 5, 2) for n in (1, 2, 3)}
        fit = FIT.fit_in_2n(2, 5, counts)
        assert fit.route == "power"
        assert fit.coefficients == (Fraction(-46), Fraction(39), Fraction(7))
        assert fit.consistent and fit.holdout_points == (3,)

    def test_window_independence(self, gamma_of):
        counts = {n: gamma_of(n, 6, 2) for n in (1, 2, 3, 4)}
        w1 = FIT.fit_in_2n(2, 6, {n: counts[n] for n in (1, 2)})
        w2 = FIT.fit_in_2n(2, 6, {n: counts[n] for n in (3, 4)})
        assert w1.coefficients == w2.coefficients

    def test_factored_route_rank4(self, gamma_of):
        counts = {n: gamma_of(n, 5, 4) for n in (1, 2, 3, 4)}
        fit = FIT.fit_in_2n(4, 5, counts, route="factored")
        assert fit.route == "factored"
        assert fit.zero_checked_points == (1,)
        assert fit.holdout_points == (4,) and fit.consistent
        assert fit.coefficients == (
            Fraction(-480),
            Fraction(816),
            Fraction(-322),
            Fraction(-45),
            Fraction(31),
        )
        assert fit.bracket == (Fraction(-240), Fraction(48), Fraction(31))

    def test_auto_picks_factored_when_short(self, gamma_of):
        counts = {n: gamma_of(n, 5, 4) for n in (1, 2, 3)}
        fit = FIT.fit_in_2n(4, 5, counts)
        assert fit.route == "factored" and fit.consistent

    def test_fit_matches_tabled_rows(self, gamma_of):
        for i, ns in ((2, (1, 2, 3)), (3, (1, 2, 3, 4)), (4, (2, 3, 4))):
            for k in (5, 6, 7):
                counts = {n: gamma_of(n, k, i) for n in ns}
                fit = FIT.fit_in_2n(i, k, counts)
                assert fit.consistent, (i, k)
                for j in range(i + 1):
                    expected = F.interior_coefficient(i, j).evaluate(Fraction(2) ** k)
                    assert fit.coefficients[j] == expected, (i, j, k)

    def test_prediction_helper(self, gamma_of):
        counts = {n: gamma_of(n, 5, 2) for n in (1, 2)}
        fit = FIT.fit_in_2n(2, 5, counts)
        assert fit.predict(3) == gamma_of(3, 5, 2)

    def test_corrupted_sample_inconsistent(self, gamma_of):
        counts = {n: gamma_of(n, 5, 2) for n in (1, 2, 3)}
        counts[3] += 1
        fit = FIT.fit_in_2n(2, 5, counts)
        assert fit.verdict == "inconsistent"
        assert fit.mismatches == ((3, gamma_of(3, 5, 2), counts[3]),)

    def test_nonzero_where_prefactor_vanishes(self, gamma_of):
        counts = {n: gamma_of(n, 5, 4) for n in (1, 2, 3)}
        counts[1] = 5  # rank 4 is unreachable with one block
        fit = FIT.fit_in_2n(4, 5, counts, route="factored")
        assert fit.verdict == "inconsistent"
        assert (1, 0, 5) in fit.mismatches

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            FIT.fit_in_2n(3, 5, {1: 0, 2: 0}, route="power")
        with pytest.raises(ValueError):
            FIT.fit_in_2n(5, 6, {1: 0, 2: 0, 3: 1}, route="factored")

    def test_bad_route_name(self):
        with pytest.raises(ValueError):
            FIT.fit_in_2n(2, 5, {1: 0, 2: 0}, route="magic")


class TestFitIn2k:
    def test_rank2_single_block(self, gamma_of):
        counts = {k: gamma_of(1, k, 2) for k in (2, 3, 4, 5)}
        fit = FIT.fit_in_2k(2, 1, counts)
        assert fit.coefficients == (Fraction(-4), Fraction(2))
        assert fit.consistent and fit.holdout_points == (4, 5)

    def test_matches_fixed_n_rows(self, gamma_of):
        windows = {
            (1, 1): (2, 3, 4),
            (2, 3): (4, 5, 6),
            (2, 4): (4, 5, 6, 7),
            (3, 4): (5, 6, 7),
        }
        for (n, i), ks in windows.items():
            counts = {k: gamma_of(n, k, i) for k in ks}
            fit = FIT.fit_in_2k(i, n, counts)
            assert fit.consistent, (n, i)
            row = F.fixed_n_row(n, i)
            assert fit.coefficients == tuple(row.coeff(j) for j in range(i // 2 + 1))

    def test_too_few_samples(self):
        with pytest.raises(ValueError):
            FIT.fit_in_2k(4, 2, {4: 384, 5: 0})


class TestProductForm:
    def test_expand_scalar(self):
        pre = F.prefactor_poly(5)
        expanded = FIT.expand_product_form(pre, {0: Fraction(3), 1: Fraction(1)})
        # (X-1)(X-2)(X-4) * (X + 3)
        assert expanded == {
            4: Fraction(1),
            3: Fraction(-4),
            2: Fraction(-7),
            1: Fraction(34),
            0: Fraction(-24),
        }

    def test_round_trip_scalar(self):
        pre = F.prefactor_poly(7)
        bracket = {0: Fraction(5), 1: Fraction(-3), 2: Fraction(1, 2), 3: Fraction(255)}
        assert FIT.refactor_product_form(FIT.expand_product_form(pre, bracket), 7) == bracket

    def test_round_trip_polynomial_coefficients(self):
        bracket = {j: F.bracket_coefficient(8, j) for j in range(4)}
        bracket[4] = F.ClosedFormPoly("2^k", {0: 511})
        expanded = FIT.expand_product_form(F.prefactor_poly(8), bracket)
        assert FIT.refactor_product_form(expanded, 8) == bracket
        for j in range(9):
            assert expanded[j] == F.rank8_row(j)

    def test_refactor_rejects_non_divisible(self):
        with pytest.raises(ValueError):
            FIT.refactor_product_form({0: Fraction(1), 1: Fraction(1)}, 3)


class TestAffineCheck:
    def test_from_tabled_rows(self):
        tops = {
            k: F.interior_coefficient(5, 4).evaluate(Fraction(2) ** k)
            for k in (6, 7, 8)
        }
        chk = FIT.check_affine_top_coefficient(5, tops, source="tabled-row")
        assert chk.consistent and chk.matches_table
        assert chk.slope == Fraction(155, 4) and chk.intercept == -2573

    def test_from_fitted_counts(self, gamma_of):
        tops = {}
        for k in (4, 5, 6):
            counts = {n: gamma_of(n, k, 3) for n in (1, 2, 3)}
            tops[k] = FIT.fit_in_2n(3, k, counts).coefficients[2]
        chk = FIT.check_affine_top_coefficient(3, tops, source="fitted-counts")
        assert chk.consistent and chk.matches_table
        assert chk.source == "fitted-counts"

    def test_detects_non_affine(self):
        chk = FIT.check_affine_top_coefficient(
            3, {4: Fraction(1), 5: Fraction(2), 6: Fraction(100)}, source="tabled-row"
        )
        assert not chk.consistent

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            FIT.fit_affine_line({4: Fraction(1)})


class TestReport:
    def test_json_fields(self, gamma_of):
        counts = {n: gamma_of(n, 5, 4) for n in (1, 2, 3, 4)}
        fit = FIT.fit_in_2n(4, 5, counts, route="factored")
        doc = FIT.fit_report_json(fit)
        assert doc["rank"] == 4 and doc["route"] == "factored"
        assert doc["coefficients"] == ["-480", "816", "-322", "-45", "31"]
        assert doc["bracket"] == ["-240", "48", "31"]
        assert doc["zero_checked_points"] == [1]
        import json

        json.dumps(doc)
