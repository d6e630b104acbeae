import random

import pytest
from hypothesis import strategies as st

from raynaudcoh.complexes import ColumnComplex
from raynaudcoh.raynaud import SemilinearMap
from raynaudcoh.witt import WittVec, make_field, witt_ring

# filled by test_acceptance.report(), printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


# (p, f, n) grid used by the structural suites
GRID = [(p, f, n) for p in (2, 3) for f in (1, 2) for n in (1, 2, 3)]


@pytest.fixture(params=[(2, 1), (2, 2), (3, 1), (3, 2)], ids=lambda t: f"F{t[0]}^{t[1]}")
def field(request):
    return make_field(*request.param)


def random_witt(rng: random.Random, fd, n: int, min_val: int = 0) -> WittVec:
    coords = [0] * min(min_val, n) + [rng.randrange(fd.q) for _ in range(max(0, n - min_val))]
    return WittVec(fd, n, tuple(coords))


def random_operator(rng: random.Random, fd, n: int, src, dst, twist: int) -> SemilinearMap:
    """Random semilinear map with entries respecting the annihilators."""
    rows = [[random_witt(rng, fd, n, max(0, dst[i] - src[j])) for j in range(len(src))]
            for i in range(len(dst))]
    return SemilinearMap.build(fd, n, src, dst, rows, twist)


def random_lengths(rng: random.Random, fd, n: int, max_size: int) -> tuple:
    """Summand lengths in 1..n with q^(total length) <= max_size (at least one summand)."""
    budget = 0
    while fd.q ** (budget + 1) <= max_size:
        budget += 1
    out = []
    while budget and (not out or rng.random() < 0.6):
        l = rng.randint(1, min(n, budget))
        out.append(l)
        budget -= l
    return tuple(out)


def random_column(rng: random.Random, fd, n: int, max_size: int = 2**10) -> ColumnComplex:
    """Two-term column C^0 -> C^1 with d over W(F_p) and F = c sigma, so d F = F d."""
    R = witt_ring(fd, n)
    L0 = random_lengths(rng, fd, n, max(fd.q, int(max_size**0.5)))
    L1 = random_lengths(rng, fd, n, max(fd.q, int(max_size**0.5)))
    p = fd.p
    rows = [[R.from_int(p ** max(0, L1[i] - L0[j]) * rng.randrange(p**n)) for j in range(len(L0))]
            for i in range(len(L1))]
    d = SemilinearMap.build(fd, n, L0, L1, rows, 0)
    c = R.from_int(rng.randrange(p**n))
    F0 = SemilinearMap.scalar(fd, n, L0, c, 1)
    F1 = SemilinearMap.scalar(fd, n, L1, c, 1)
    return ColumnComplex(fd, n, 0, {0: L0, 1: L1}, {0: d}, {0: F0, 1: F1})


fields = st.sampled_from([(2, 1), (2, 2), (3, 1), (3, 2)]).map(lambda t: make_field(*t))


@st.composite
def witt_vectors(draw, fd=None, n=None, count=1):
    fd = fd or draw(fields)
    n = n or draw(st.integers(1, 3))
    vecs = [WittVec(fd, n, tuple(draw(st.integers(0, fd.q - 1)) for _ in range(n))) for _ in range(count)]
    return vecs
