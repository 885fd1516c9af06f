"""
Predicting whole rank censuses from closed forms
================================================

"""

# Every rank count in this family is a polynomial expression in 2^k and
# 2^n, split into three regimes: interior ranks i < min(2n, k), the
# full-rank count i = 2n <= k, and the deficient boundary i = k < 2n.
from persym import full_census, predicted_census

for n, k in ((1, 6), (2, 5), (3, 4), (3, 6)):
    engine = full_census(n, k).counts
    formula = predicted_census(n, k)
    status = "agree" if engine == formula else "DISAGREE"
    print(f"n={n} k={k} {status}: {formula}")
    assert engine == formula

# Interior counts come from tabled coefficient rows. For fixed n the
# rank-i count is a polynomial in X = 2^k; fixed_n_row returns it with
# exact rational coefficients.
from persym import fixed_n_row

row = fixed_n_row(2, 3)  # rank 3 of the two-block family
print("rank-3 count at n=2, as a polynomial in 2^k:", row)
for k in (4, 5, 6):
    assert row.int_at(k) == full_census(2, k).counts[3]

# The full-rank count has a product form: 2^n times a falling product
# of (2^k - 2^j) factors. At n=3, k=6 it expands to a quartic-free
# cubic in 2^k.
from persym import full_rank_count

print("full-rank count n=3 k=6:", full_rank_count(3, 6))
assert full_rank_count(3, 6) == 688128
assert full_rank_count(3, 6) == fixed_n_row(3, 6).int_at(6)

# When k < 2n the top rank is k and its count is whatever the interior
# rows leave over; no separate formula is needed.
from persym import complement_count

census = full_census(3, 2)
print("boundary count n=3 k=2:", complement_count(3, 2))
assert complement_count(3, 2) == census.counts[2] == 490

# The four-block family has its own compact rank-5 form, valid from
# k = 5 on; at k = 5 it lands exactly on the deficient boundary count.
from persym import rank5_four_block_count

print("rank-5 count n=4 k=5:", rank5_four_block_count(5))
assert rank5_four_block_count(5) == complement_count(4, 5) == 14918400

# interior_coefficient exposes the general-n rows: the rank-i count is
# (2^{i+1}-1) * 2^{in} plus lower powers of 2^n whose coefficients are
# polynomials in 2^k.
from fractions import Fraction
from persym import interior_coefficient

for j in range(3):
    print(f"rank-2 coefficient of 2^({j}n):", interior_coefficient(2, j))
val = sum(
    interior_coefficient(2, j).evaluate(Fraction(2) ** 5) * Fraction(2) ** (j * 3)
    for j in range(3)
)
assert val == full_census(3, 5).counts[2]
print("rank-2 count rebuilt from coefficients at n=3 k=5:", int(val))
