"""Exact rank censuses for the stacked persymmetric family.

full_census enumerates every parameter point; multiset_census enumerates
unordered block multisets with multinomial weights (rank does not depend on
block order, so the two must agree exactly). kernel_moment computes
sum_i count_i * 2^(k-i) by an independent route: for each target vector x
it counts, via a small rank computation, the parameter vectors whose block
annihilates x, and raises that to the n-th power.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from .gf2 import PersymParams, build_matrix, rank, rank_rows

__all__ = [
    "ENGINE_VERSION",
    "SCHEMA_VERSION",
    "BudgetExceededError",
    "CensusIntegrityError",
    "CensusSchemaError",
    "MomentValue",
    "RankCensus",
    "census_moment",
    "full_census",
    "kernel_moment",
    "load_census",
    "multiset_census",
    "save_census",
]

ENGINE_VERSION = "0.1.0"
SCHEMA_VERSION = 1

DEFAULT_BUDGET_BITS = 30

# Beyond this the int64 kernels would be at risk regardless of budget.
_ENGINE_MAX_BITS = 40


class BudgetExceededError(Exception):
    """Raised instead of starting a run that needs >= 2^budget evaluations."""

    def __init__(self, evaluations: int, budget_bits: int, what: str):
        self.evaluations = evaluations
        self.required_bits = evaluations.bit_length()
        self.budget_bits = budget_bits
        super().__init__(
            f"{what} needs {evaluations} rank evaluations, at or above the "
            f"2^{budget_bits} budget; pass budget={self.required_bits} "
            f"or higher to allow it"
        )


class CensusIntegrityError(Exception):
    """A census file failed validation."""


class CensusSchemaError(Exception):
    """A census file uses an unsupported schema version."""


@dataclass(frozen=True)
class RankCensus:
    """Exact rank distribution: counts[i] matrices of rank i.

    counts always has min(2n,k)+1 entries, sums to 2^{n(k+1)}, and starts
    with the single all-zero matrix.
    """

    n: int
    k: int
    counts: tuple[int, ...]
    method: str
    seconds: float
    engine_version: str = ENGINE_VERSION

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be >= 1")
        width = min(2 * self.n, self.k) + 1
        if len(self.counts) != width:
            raise CensusIntegrityError(
                f"expected {width} rank buckets, got {len(self.counts)}"
            )
        if any(c < 0 for c in self.counts):
            raise CensusIntegrityError("negative count")
        if self.counts[0] != 1:
            raise CensusIntegrityError("rank-0 bucket must contain exactly the zero matrix")
        if sum(self.counts) != self.total:
            raise CensusIntegrityError(
                f"counts sum to {sum(self.counts)}, expected 2^{self.n * (self.k + 1)}"
            )

    @property
    def total(self) -> int:
        return 1 << (self.n * (self.k + 1))

    @property
    def max_rank(self) -> int:
        return min(2 * self.n, self.k)

    def count(self, i: int) -> int:
        """Number of members with rank exactly i (0 outside the bucket range)."""
        if 0 <= i < len(self.counts):
            return self.counts[i]
        return 0


@dataclass(frozen=True)
class MomentValue:
    """Value of sum over members of 2^(k - rank), computed without enumeration
    of the full family."""

    n: int
    k: int
    value: int


def _space_bits(n: int, k: int) -> int:
    return n * (k + 1)


def _check_args(n: int, k: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= k <= 64:
        raise ValueError("k must be in 1..64")


def _check_budget(evaluations: int, budget_bits: int, what: str) -> None:
    if evaluations >= (1 << budget_bits):
        raise BudgetExceededError(evaluations, budget_bits, what)


@contextmanager
def _thread_limit(threads: int | None):
    if threads is None:
        yield
        return
    if threads < 1:
        raise ValueError("threads must be >= 1")
    import numba

    current = numba.get_num_threads()
    numba.set_num_threads(max(1, min(threads, numba.config.NUMBA_NUM_THREADS)))
    try:
        yield
    finally:
        numba.set_num_threads(current)


def full_census(
    n: int,
    k: int,
    *,
    budget: int = DEFAULT_BUDGET_BITS,
    threads: int | None = None,
) -> RankCensus:
    """Exhaustive census over all 2^{n(k+1)} parameter points."""
    _check_args(n, k)
    bits = _space_bits(n, k)
    _check_budget(1 << bits, budget, f"full census at n={n}, k={k}")
    if bits > _ENGINE_MAX_BITS:
        raise ValueError(f"parameter space of 2^{bits} exceeds the engine limit 2^{_ENGINE_MAX_BITS}")
    from . import _kernels

    width = min(2 * n, k) + 1
    nchunks = min(1 << bits, 1024)
    start = time.perf_counter()
    with _thread_limit(threads):
        hist = _kernels.run_ordered(n, k, nchunks, width)
    seconds = time.perf_counter() - start
    return RankCensus(
        n=n,
        k=k,
        counts=tuple(int(c) for c in hist),
        method="exhaustive",
        seconds=seconds,
    )


def multiset_census(
    n: int,
    k: int,
    *,
    budget: int = DEFAULT_BUDGET_BITS,
    threads: int | None = None,
) -> RankCensus:
    """Census via unordered block multisets with multinomial weights."""
    _check_args(n, k)
    evaluations = math.comb((1 << (k + 1)) + n - 1, n)
    _check_budget(evaluations, budget, f"multiset census at n={n}, k={k}")
    if _space_bits(n, k) > _ENGINE_MAX_BITS:
        raise ValueError(f"totals beyond 2^{_ENGINE_MAX_BITS} exceed the engine limit")
    from . import _kernels

    width = min(2 * n, k) + 1
    nchunks = min(1 << (k + 1), 1024)
    start = time.perf_counter()
    with _thread_limit(threads):
        hist = _kernels.run_multiset(n, k, nchunks, width)
    seconds = time.perf_counter() - start
    return RankCensus(
        n=n,
        k=k,
        counts=tuple(int(c) for c in hist),
        method="multiset-reduced",
        seconds=seconds,
    )


def _census_python(n: int, k: int, limit_bits: int = 20) -> RankCensus:
    """Reference counter going through the object layer; small spaces only."""
    _check_args(n, k)
    bits = _space_bits(n, k)
    if bits > limit_bits:
        raise ValueError(f"reference counter capped at 2^{limit_bits} points")
    counts = [0] * (min(2 * n, k) + 1)
    start = time.perf_counter()
    for index in range(1 << bits):
        m = build_matrix(PersymParams.from_index(n, k, index))
        counts[rank(m)] += 1
    seconds = time.perf_counter() - start
    return RankCensus(
        n=n, k=k, counts=tuple(counts), method="exhaustive", seconds=seconds
    )


def kernel_moment(n: int, k: int) -> MomentValue:
    """Sum over x in GF(2)^k of (number of parameter vectors annihilating x)^n.

    For fixed x the two block rows impose the linear system with rows
    (x_1..x_k, 0) and (0, x_1..x_k) on the k+1 parameter bits; the solution
    count is 2^{(k+1) - rank}. Equals sum_i count_i * 2^{k-i} of any census.
    """
    _check_args(n, k)
    if k > 30:
        raise ValueError("kernel moment capped at k <= 30")
    value = 0
    for x in range(1 << k):
        r = rank_rows((x, x << 1))
        value += 1 << (n * (k + 1 - r))
    return MomentValue(n=n, k=k, value=value)


def census_moment(census: RankCensus) -> int:
    """sum_i counts[i] * 2^(k-i); must equal kernel_moment(n, k).value."""
    return sum(c << (census.k - i) for i, c in enumerate(census.counts))


def _census_payload(census: RankCensus) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "n": census.n,
        "k": census.k,
        "method": census.method,
        "counts": [str(c) for c in census.counts],
        "total": str(census.total),
        "engine_version": census.engine_version,
        "seconds": census.seconds,
    }


def save_census(census: RankCensus, path: str | Path) -> None:
    """Write one census as JSON (counts as decimal strings)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_census_payload(census), indent=1) + "\n")


def load_census(path: str | Path) -> RankCensus:
    """Read and validate a census file."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise CensusIntegrityError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise CensusIntegrityError(f"{path}: expected a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise CensusSchemaError(
            f"{path}: schema_version {version!r} is not supported (expected {SCHEMA_VERSION})"
        )
    try:
        n = int(doc["n"])
        k = int(doc["k"])
        counts = tuple(int(c) for c in doc["counts"])
        total = int(doc["total"])
        method = doc["method"]
        engine_version = doc["engine_version"]
        seconds = float(doc["seconds"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CensusIntegrityError(f"{path}: malformed field ({exc})") from exc
    if method not in ("exhaustive", "multiset-reduced"):
        raise CensusIntegrityError(f"{path}: unknown method {method!r}")
    try:
        census = RankCensus(
            n=n, k=k, counts=counts, method=method, seconds=seconds,
            engine_version=engine_version,
        )
    except (CensusIntegrityError, ValueError) as exc:
        raise CensusIntegrityError(f"{path}: {exc}") from exc
    if census.total != total:
        raise CensusIntegrityError(f"{path}: declared total {total} is wrong")
    return census


def census_file_digest(path: str | Path) -> str:
    """Hex digest used as the witness handle for cached censuses."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]
