import pytest

from persym import full_census, multiset_census

# One census per (n, k) for the whole session; big spaces go through the
# multiset route, which is exact and much cheaper.
_CACHE = {}


def _get_census(n: int, k: int):
    key = (n, k)
    if key not in _CACHE:
        if n * (k + 1) <= 24:
            _CACHE[key] = full_census(n, k)
        else:
            _CACHE[key] = multiset_census(n, k)
    return _CACHE[key]


@pytest.fixture(scope="session")
def census_of():
    """census_of(n, k) -> RankCensus, memoized across the session."""
    return _get_census


@pytest.fixture(scope="session")
def gamma_of():
    """gamma_of(n, k, i) -> exact count of rank-i members."""

    def get(n: int, k: int, i: int) -> int:
        return _get_census(n, k).count(i)

    return get


@pytest.fixture(scope="session")
def warm_engine():
    """Compile the enumeration kernels once so timed tests measure work,
    not JIT compilation."""
    full_census(1, 1)
    multiset_census(1, 1)
