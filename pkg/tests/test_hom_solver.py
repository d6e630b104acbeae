import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from raynaudcoh.complexes import ColumnComplex, column, column_cohomology, unit_complex
from raynaudcoh.errors import NotNilpotentError, OracleRefused
from raynaudcoh.hom_solver import (
    FinAbPGroup, brute_force_fiber, brute_force_oracle, fiber_cohomology, geometric_inverse,
    ker_coker_1_minus_F, linearize, smith_normal_form,
)
from raynaudcoh.raynaud import SemilinearMap
from raynaudcoh.witt import make_field, witt_ring

from conftest import random_column, random_lengths, random_operator


def sigma(fd, n, lengths=None):
    return SemilinearMap.scalar(fd, n, lengths or (n,), 1, 1)


def test_group_basics():
    g = FinAbPGroup(2, (1, 3, 2))
    assert g.factors == (3, 2, 1) and g.order == 64
    assert str(g) == "Z/8 + Z/4 + Z/2"
    assert str(FinAbPGroup(3)) == "0" and FinAbPGroup(3).is_trivial()
    assert g.to_json() == {"p": 2, "factors": [3, 2, 1]}
    assert g.capped(2).factors == (2, 2, 1)


def test_linearize_examples():
    fd = make_field(3)
    assert linearize(sigma(fd, 3)).matrix == ((1,),)
    assert linearize(SemilinearMap.scalar(fd, 3, (3,), 3)).matrix == ((3,),)
    f4 = make_field(2, 2)
    L = linearize(sigma(f4, 2))
    assert len(L.matrix) == 2 and L.src_orders == (2, 2)


def test_smith_examples():
    fd = make_field(2)
    coker, ker = smith_normal_form(linearize(SemilinearMap.zero(fd, 3, (3,), (3,))))
    assert coker.factors == (3,) and len(ker) == 1
    coker, ker = smith_normal_form(linearize(SemilinearMap.scalar(fd, 3, (3,), 2)))
    assert coker.factors == (1,)
    assert ker == [[4]]


@pytest.mark.parametrize("p,f,n,expect", [
    (2, 1, 3, 3), (2, 2, 2, 2), (3, 2, 3, 3), (3, 1, 1, 1),
])
def test_fixed_points_of_sigma(p, f, n, expect):
    fd = make_field(p, f)
    ker, coker = ker_coker_1_minus_F(sigma(fd, n))
    assert ker.factors == (expect,) and coker.factors == (expect,)
    assert brute_force_oracle(sigma(fd, n)) == (ker, coker)


def test_p_sigma_has_trivial_kernel_and_cokernel():
    fd = make_field(2)
    F = SemilinearMap.scalar(fd, 2, (2,), 2, 1)
    assert ker_coker_1_minus_F(F) == (FinAbPGroup(2), FinAbPGroup(2))


def test_geometric_inverse_examples():
    fd = make_field(2)
    F = SemilinearMap.scalar(fd, 2, (2,), 2, 1)
    S = geometric_inverse(F)
    assert len(S.terms) == 2 and S.terms[1].equals(F)
    x = (witt_ring(fd, 2).from_int(3),)
    one_minus_F = lambda v: tuple(a - b for a, b in zip(v, F.apply(v)))
    assert one_minus_F(S.apply(x)) == x
    assert len(geometric_inverse(SemilinearMap.zero(fd, 2, (2,), (2,), 1)).terms) == 1
    with pytest.raises(NotNilpotentError):
        geometric_inverse(sigma(fd, 2))


@pytest.mark.parametrize("p,f,n", [(2, 1, 3), (2, 2, 2), (3, 1, 2)])
def test_fiber_of_unit(p, f, n):
    col = column(unit_complex(make_field(p, f), n), 0)
    got = {m: fiber_cohomology(col, m).factors for m in range(-1, 3)}
    assert got == {-1: (), 0: (n,), 1: (n,), 2: ()}
    assert all(brute_force_fiber(col, m).factors == got[m] for m in got)


def test_fiber_of_empty_column_is_zero():
    fd = make_field(2)
    col = ColumnComplex(fd, 2, 0, {}, {}, {})
    assert all(fiber_cohomology(col, m).is_trivial() for m in range(-2, 3))
    assert brute_force_fiber(col, 0).is_trivial()


def test_oracle_refuses_large_components():
    fd = make_field(3, 2)
    with pytest.raises(OracleRefused):
        brute_force_oracle(sigma(fd, 3, (3, 3, 3)), limit=2**12)
    assert brute_force_oracle(SemilinearMap.zero(fd, 2, (), (), 1)) == (FinAbPGroup(3), FinAbPGroup(3))


@pytest.mark.parametrize("seed", range(30))
def test_random_operators_match_oracle(seed):
    rng = random.Random(seed)
    fd = make_field(rng.choice([2, 3]), rng.choice([1, 2]))
    n = rng.randint(1, 3)
    L = random_lengths(rng, fd, n, 2**9)
    F = random_operator(rng, fd, n, L, L, rng.choice([0, 1, -1]))
    assert ker_coker_1_minus_F(F) == brute_force_oracle(F)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_kernel_and_cokernel_have_equal_order(rnd):
    fd = make_field(rnd.choice([2, 3]), rnd.choice([1, 2]))
    n = rnd.randint(1, 3)
    L = random_lengths(rnd, fd, n, 3**6)
    F = random_operator(rnd, fd, n, L, L, 1)
    ker, coker = ker_coker_1_minus_F(F)
    # |ker| |im| = |component| and |coker| = |component| / |im|
    assert ker.order == coker.order


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_permuting_summands_does_not_change_factors(rnd):
    fd = make_field(rnd.choice([2, 3]), rnd.choice([1, 2]))
    n = rnd.randint(1, 3)
    L = random_lengths(rnd, fd, n, 3**6)
    F = random_operator(rnd, fd, n, L, L, 1)
    perm = list(range(len(L)))
    rnd.shuffle(perm)
    PL = tuple(L[i] for i in perm)
    rows = [[F.matrix[perm[i]][perm[j]] for j in range(len(L))] for i in range(len(L))]
    G = SemilinearMap.build(fd, n, PL, PL, rows, 1)
    assert ker_coker_1_minus_F(F) == ker_coker_1_minus_F(G)
    assert ker_coker_1_minus_F(F) == ker_coker_1_minus_F(F)


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_fiber_exact_sequence_orders(rnd):
    fd = make_field(rnd.choice([2, 3]), rnd.choice([1, 2]))
    n = rnd.randint(1, 3)
    col = random_column(rnd, fd, n)
    for m in range(0, 3):
        prev = column_cohomology(col, m - 1)[1]
        here = column_cohomology(col, m)[1]
        coker_prev = ker_coker_1_minus_F(prev)[1]
        ker_here = ker_coker_1_minus_F(here)[0]
        assert fiber_cohomology(col, m).log_order == coker_prev.log_order + ker_here.log_order


@settings(max_examples=15, deadline=None)
@given(st.randoms(use_true_random=False))
def test_fiber_matches_enumeration(rnd):
    fd = make_field(rnd.choice([2, 3]), 1)
    n = rnd.randint(1, 2)
    col = random_column(rnd, fd, n, max_size=2**8)
    for m in range(0, 3):
        assert fiber_cohomology(col, m) == brute_force_fiber(col, m)


@settings(max_examples=20, deadline=None)
@given(st.randoms(use_true_random=False))
def test_nilpotent_F_gives_acyclic_fiber(rnd):
    fd = make_field(rnd.choice([2, 3]), rnd.choice([1, 2]))
    n = rnd.randint(1, 3)
    col = random_column(rnd, fd, n)
    R = witt_ring(fd, n)
    c = R.from_int(fd.p * rnd.randrange(1, fd.p**n))
    F = {j: SemilinearMap.scalar(fd, n, l, c, 1) for j, l in col.terms.items()}
    col = ColumnComplex(fd, n, 0, col.terms, col.d, F)
    for j in col.terms:
        geometric_inverse(col.F_map(j))
    assert all(fiber_cohomology(col, m).is_trivial() for m in range(-1, 3))
