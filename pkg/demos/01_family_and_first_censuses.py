"""
Building the matrix family and counting ranks exhaustively
==========================================================

"""

# Each family member is a stack of n two-row blocks over GF(2). A block
# is described by k+1 parameter bits m_1..m_{k+1}: the first row reads
# bits 1..k, the second row reads bits 2..k+1, so the rows overlap in a
# one-step shift.
from persym import PersymParams, build_block, build_matrix, BitVec, rank

bits = BitVec.from_bits((1, 1, 0, 1))  # m_1..m_4 for k = 3
block = build_block(bits, k=3)
print("parameter bits:", bits.to_bits())
print("row 0:", block.rows[0].to_bits())
print("row 1:", block.rows[1].to_bits())

# The shift is visible: row 1 at column c equals row 0 at column c+1.
for c in range(2):
    assert block.rows[1].bit(c) == block.rows[0].bit(c + 1)

# A full member stacks n independent blocks. Parameters pack into one
# integer, block j in bit positions j*(k+1) .. (j+1)*(k+1)-1.
params = PersymParams.from_index(n=2, k=3, index=0b1011_0101)
matrix = build_matrix(params)
for r in range(matrix.nrows):
    print("matrix row", r, matrix.rows[r].to_bits())
print("rank:", rank(matrix))

# Exhaustive censuses: count members of every rank. With n blocks and
# k+1 bits each there are 2^(n(k+1)) members; the rank runs 0..min(2n,k).
from persym import full_census

for n, k in ((1, 3), (1, 5), (2, 3), (2, 5)):
    census = full_census(n, k)
    print(f"n={n} k={k} counts={census.counts} total={census.total}")

# Two invariants hold for every census. The counts sum to the family
# size, and the weighted sum below collapses to a two-term closed form
# because it also counts pairs (member, vector in the right kernel of
# the parameter system).
from persym import census_moment, kernel_moment

census = full_census(2, 5)
assert sum(census.counts) == census.total
assert census_moment(census) == kernel_moment(2, 5).value
print("kernel moment at n=2 k=5:", kernel_moment(2, 5).value)

# The same census can be computed without visiting all 2^(n(k+1))
# members: ranks only depend on the multiset of blocks, so one can walk
# nondecreasing block tuples and weight by multinomials. Both routes
# must agree exactly.
from persym import multiset_census

a = full_census(2, 4)
b = multiset_census(2, 4)
assert a.counts == b.counts
print("two routes agree at n=2 k=4:", a.counts)
