"""Bit-packed GF(2) linear algebra and the stacked persymmetric family.

A family member is built from n parameter vectors of k+1 bits each. Vector
bits a_1..a_{k+1} (stored little-endian: bit 0 is a_1) define one 2-row
block: row 0 reads a_1..a_k, row 1 reads the shifted window a_2..a_{k+1}.
Stacking the n blocks gives a 2n x k matrix over GF(2).

Rows are Python ints used as bitsets; column j of a row is bit j. Rank is
computed by word-XOR elimination with lowest-set-bit pivots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "BitVec",
    "GF2Matrix",
    "PersymParams",
    "build_block",
    "build_matrix",
    "rank",
    "rank_rows",
    "transpose",
]

# Rows must fit one 64-bit word; parameter vectors carry one extra bit.
MAX_COLS = 64
_MAX_BITVEC_LEN = MAX_COLS + 1


@dataclass(frozen=True)
class BitVec:
    """Fixed-length bit vector. bit(i) is the i-th coordinate, 0-indexed."""

    length: int
    bits: int

    def __post_init__(self) -> None:
        if not 1 <= self.length <= _MAX_BITVEC_LEN:
            raise ValueError(f"length must be in 1..{_MAX_BITVEC_LEN}, got {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits has set bits beyond length")

    @classmethod
    def from_int(cls, bits: int, length: int) -> "BitVec":
        return cls(length=length, bits=bits)

    @classmethod
    def from_bits(cls, coords: Iterable[int]) -> "BitVec":
        coords = list(coords)
        value = 0
        for pos, c in enumerate(coords):
            if c not in (0, 1):
                raise ValueError("coordinates must be 0 or 1")
            value |= c << pos
        return cls(length=len(coords), bits=value)

    @classmethod
    def zeros(cls, length: int) -> "BitVec":
        return cls(length=length, bits=0)

    def bit(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"bit index {i} out of range for length {self.length}")
        return (self.bits >> i) & 1

    def to_bits(self) -> tuple[int, ...]:
        return tuple((self.bits >> i) & 1 for i in range(self.length))

    def __len__(self) -> int:
        return self.length

    def __iter__(self) -> Iterator[int]:
        return iter(self.to_bits())


@dataclass(frozen=True)
class GF2Matrix:
    """Dense GF(2) matrix; every row is a BitVec of width ncols."""

    rows: tuple[BitVec, ...]
    ncols: int

    def __post_init__(self) -> None:
        if not 1 <= self.ncols <= MAX_COLS:
            raise ValueError(f"ncols must be in 1..{MAX_COLS}, got {self.ncols}")
        for row in self.rows:
            if row.length != self.ncols:
                raise ValueError("row width differs from ncols")

    @classmethod
    def from_rows(cls, rows: Iterable[BitVec]) -> "GF2Matrix":
        rows = tuple(rows)
        if not rows:
            raise ValueError("matrix needs at least one row")
        return cls(rows=rows, ncols=rows[0].length)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> int:
        return self.rows[i].bit(j)

    def row_ints(self) -> list[int]:
        return [row.bits for row in self.rows]


@dataclass(frozen=True)
class PersymParams:
    """Parameter point for the n-block family at width k.

    alphas holds n bit vectors of length k+1; alphas[j] drives block j.
    """

    n: int
    k: int
    alphas: tuple[BitVec, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 1 <= self.k <= MAX_COLS:
            raise ValueError(f"k must be in 1..{MAX_COLS}")
        if len(self.alphas) != self.n:
            raise ValueError("need exactly n parameter vectors")
        for a in self.alphas:
            if a.length != self.k + 1:
                raise ValueError("each parameter vector must have length k+1")

    @classmethod
    def from_index(cls, n: int, k: int, index: int) -> "PersymParams":
        """Decode a point from its position in the 2^{n(k+1)}-element space.

        Block j occupies bits [j*(k+1), (j+1)*(k+1)) of the index.
        """
        width = k + 1
        if not 0 <= index < 1 << (n * width):
            raise ValueError("index out of range")
        mask = (1 << width) - 1
        alphas = tuple(
            BitVec(length=width, bits=(index >> (j * width)) & mask) for j in range(n)
        )
        return cls(n=n, k=k, alphas=alphas)

    def to_index(self) -> int:
        width = self.k + 1
        value = 0
        for j, a in enumerate(self.alphas):
            value |= a.bits << (j * width)
        return value


def build_block(alpha: BitVec, k: int) -> GF2Matrix:
    """Two-row block from a (k+1)-bit parameter vector.

    Row 0 is coordinates 1..k of alpha, row 1 the shifted window 2..k+1.
    """
    if alpha.length != k + 1:
        raise ValueError("parameter vector must have length k+1")
    mask = (1 << k) - 1
    row0 = BitVec(length=k, bits=alpha.bits & mask)
    row1 = BitVec(length=k, bits=(alpha.bits >> 1) & mask)
    return GF2Matrix(rows=(row0, row1), ncols=k)


def build_matrix(params: PersymParams) -> GF2Matrix:
    """Stack the n blocks into a 2n x k matrix."""
    rows: list[BitVec] = []
    for a in params.alphas:
        rows.extend(build_block(a, params.k).rows)
    return GF2Matrix(rows=tuple(rows), ncols=params.k)


def rank_rows(rows: Iterable[int]) -> int:
    """Rank over GF(2) of rows given as int bitsets.

    Maintains a basis sorted by lowest set bit; each incoming row is reduced
    against the basis in ascending pivot order, so a surviving row always
    carries a fresh pivot.
    """
    basis: list[int] = []  # ascending by (row & -row)
    for r in rows:
        for b in basis:
            if r & (b & -b):
                r ^= b
        if r:
            basis.append(r)
            basis.sort(key=lambda v: v & -v)
    return len(basis)


def rank(m: GF2Matrix) -> int:
    """Rank of a GF2Matrix; never exceeds min(nrows, ncols)."""
    return rank_rows(m.row_ints())


def transpose(m: GF2Matrix) -> GF2Matrix:
    """Exchange rows and columns."""
    cols = []
    for j in range(m.ncols):
        bits = 0
        for i in range(m.nrows):
            bits |= m.rows[i].bit(j) << i
        cols.append(BitVec(length=m.nrows, bits=bits))
    return GF2Matrix(rows=tuple(cols), ncols=m.nrows)
