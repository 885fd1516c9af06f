"""
Recovering coefficient rows from census data alone
==================================================

"""

# The tabled coefficient rows can be reconstructed by solving exact
# linear systems over census data, which is how new rows are found in
# the first place. Collect the rank-2 count at k = 6 for several block
# counts n; as a polynomial in Y = 2^n it has known leading coefficient
# 2^3 - 1 = 7 and two unknown lower coefficients.
from persym import fit_in_2n, full_census

k = 6
counts = {n: full_census(n, k).counts[2] for n in (1, 2, 3)}
fit = fit_in_2n(2, k, counts)
print("rank-2 fit at k=6:", fit.coefficients, "route:", fit.route)
print("consistent:", fit.consistent)

# The answer must not depend on which n were sampled. Refit from a
# shifted window and compare; the shifted window needs n = 4, which is
# out of exhaustive range, so the multiset route computes it.
from persym import multiset_census

counts_hi = dict(counts)
counts_hi[4] = multiset_census(4, k).counts[2]
fit_hi = fit_in_2n(2, k, {n: counts_hi[n] for n in (2, 3, 4)})
assert fit_hi.coefficients == fit.coefficients
print("window {1,2,3} and window {2,3,4} agree")

# Higher ranks outgrow the sample supply: rank 4 has five power-basis
# coefficients but only n >= 2 contributes. The factored route divides
# out the known prefactor (2^n - 1)(2^n - 2) first, leaving a bracket
# with just two unknowns, and checks the prefactor's forced zeros.
counts4 = {2: full_census(2, k).counts[4], 3: full_census(3, k).counts[4]}
fit4 = fit_in_2n(4, k, counts4, route="factored")
print("rank-4 bracket:", fit4.bracket)
print("rank-4 power-basis row:", fit4.coefficients)
assert fit4.consistent

# Across k the recovered top coefficient moves along a straight line in
# 2^k. check_affine_top_coefficient fits that line and compares slope
# and intercept against the tabled pair.
from persym import check_affine_top_coefficient

# full_census(1, k).count(3) is zero: a two-row matrix never has rank 3,
# and the fitted row absorbs that through its (2^n - 2) factor.
tops = {}
for kk in (4, 5, 6):
    f = fit_in_2n(3, kk, {n: full_census(n, kk).count(3) for n in (1, 2, 3)})
    tops[kk] = f.coefficients[2]
check = check_affine_top_coefficient(3, tops, source="fitted-counts")
print(f"rank-3 top coefficient: {check.slope} * 2^k - {-check.intercept}")
print("matches table:", check.matches_table)

# The same idea works in the other variable: fix n, sample several k,
# and solve for the polynomial in 2^k. Rank 4 at n = 2 needs three
# coefficients, so three sampled widths suffice and a fourth is kept
# as a holdout check.
from persym import fit_in_2k

samples = {kk: full_census(2, kk).counts[4] for kk in (4, 5, 6, 7)}
fit2k = fit_in_2k(4, 2, samples)
print("rank-4 row at n=2 in powers of 2^k:", fit2k.coefficients)
print("holdout points:", fit2k.holdout_points, "consistent:", fit2k.consistent)
