"""Kernel, cokernel and fiber cohomology of 1 - F.

sigma is Z/p^n-linear, so every semilinear map becomes an honest matrix
over Z/p^n once W_n(F_q) is written in a basis over Z/p^n.  A summand
W_{n_j} contributes f generators of order p^{n_j}.  All homology is then
ordinary chain-ring linear algebra (see :mod:`raynaudcoh.linalg`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .complexes import ColumnComplex, gr_apply
from .errors import InvariantViolation, NotNilpotentError, OracleRefused, ShapeError
from .galois import galois_ring, integers_mod
from .linalg import subquotient, zeros
from .raynaud import SemilinearMap
from .witt import WittVec, witt_p_mult, witt_ring

ORACLE_LIMIT = 2**20


@dataclass(frozen=True)
class FinAbPGroup:
    """The finite abelian p-group sum Z/p^e over ``factors`` (descending)."""

    p: int
    factors: tuple = ()

    def __post_init__(self):
        fs = tuple(sorted((int(e) for e in self.factors if e), reverse=True))
        if any(e < 0 for e in fs):
            raise ValueError("invariant factors must be positive")
        object.__setattr__(self, "factors", fs)

    @property
    def order(self) -> int:
        return self.p ** sum(self.factors)

    @property
    def log_order(self) -> int:
        return sum(self.factors)

    def is_trivial(self) -> bool:
        return not self.factors

    def capped(self, m: int) -> "FinAbPGroup":
        """Image of the group under reduction to precision m."""
        return FinAbPGroup(self.p, tuple(min(e, m) for e in self.factors))

    def quotient_by_p_power(self, m: int) -> "FinAbPGroup":
        """G / p^m G."""
        return self.capped(m)

    def p_power_torsion(self, m: int) -> "FinAbPGroup":
        """G[p^m]."""
        return self.capped(m)

    def to_json(self) -> dict:
        return {"p": self.p, "factors": list(self.factors)}

    def __str__(self):
        if not self.factors:
            return "0"
        return " + ".join(f"Z/{self.p ** e}" for e in self.factors)


@dataclass(frozen=True)
class LinearizedMap:
    """Integer matrix over Z/p^n between presented modules sum Z/p^{orders}."""

    p: int
    n: int
    src_orders: tuple
    dst_orders: tuple
    matrix: tuple  # rows of ints

    @property
    def ring(self):
        return integers_mod(self.p, self.n)

    def __sub__(self, other: "LinearizedMap") -> "LinearizedMap":
        if (self.src_orders, self.dst_orders) != (other.src_orders, other.dst_orders):
            raise ShapeError("shape mismatch")
        mod = self.p**self.n
        rows = tuple(tuple((a - b) % mod for a, b in zip(r, s))
                     for r, s in zip(self.matrix, other.matrix))
        return LinearizedMap(self.p, self.n, self.src_orders, self.dst_orders, rows)

    def reduced(self) -> "LinearizedMap":
        rows = tuple(tuple(x % self.p**e for x in r) for r, e in zip(self.matrix, self.dst_orders))
        return LinearizedMap(self.p, self.n, self.src_orders, self.dst_orders, rows)

    def rows(self) -> list:
        return [list(r) for r in self.matrix]


def generator_orders(field, lengths: Sequence[int]) -> tuple:
    return tuple(l for l in lengths for _ in range(field.f))


def identity_map(field, n, lengths) -> LinearizedMap:
    orders = generator_orders(field, lengths)
    k = len(orders)
    rows = tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))
    return LinearizedMap(field.p, n, orders, orders, rows)


def linearize(op: SemilinearMap, check: bool = True) -> LinearizedMap:
    """Matrix of ``op`` over Z/p^n in the basis [1], [t], ..., [t^(f-1)] of each summand."""
    field, n, f = op.field, op.n, op.field.f
    G = galois_ring(field, n)
    src_o = generator_orders(field, op.src)
    dst_o = generator_orders(field, op.dst)
    cols = []
    mat = [[G.from_witt(x) for x in row] for row in op.matrix]
    for j in range(len(op.src)):
        for k in range(f):
            vec = [G.zero] * len(op.src)
            vec[j] = tuple(1 if t == k else 0 for t in range(f))
            image = gr_apply(op, vec, mat)
            cols.append([c for elem in image for c in elem])
            if check:
                wv = tuple(G.to_witt(vec[a], op.src[a]) for a in range(len(op.src)))
                expect = op.apply(wv)
                got = tuple(G.to_witt(e, op.dst[a]) for a, e in enumerate(image))
                if expect != got:
                    raise InvariantViolation("linearization disagrees with the semilinear map")
    rows = tuple(tuple(cols[c][r] for c in range(len(cols))) for r in range(len(dst_o)))
    return LinearizedMap(field.p, n, src_o, dst_o, rows)


def smith_normal_form(M: LinearizedMap) -> tuple[FinAbPGroup, list]:
    """(cokernel invariants, kernel generators) of M between presented modules."""
    ring = M.ring
    mat = M.rows()
    coker = subquotient(ring, list(M.dst_orders), mat if M.src_orders else None,
                        len(M.src_orders), None, [])
    ker = subquotient(ring, list(M.src_orders), None, 0,
                      mat if M.dst_orders else None, list(M.dst_orders))
    return FinAbPGroup(M.p, tuple(coker.orders)), ker.basis


def kernel_group(M: LinearizedMap) -> FinAbPGroup:
    ring = M.ring
    sq = subquotient(ring, list(M.src_orders), None, 0,
                     M.rows() if M.dst_orders else None, list(M.dst_orders))
    return FinAbPGroup(M.p, tuple(sq.orders))


def one_minus(F_op: SemilinearMap) -> LinearizedMap:
    if F_op.src != F_op.dst:
        raise ShapeError("F must be an endomorphism")
    return identity_map(F_op.field, F_op.n, F_op.src) - linearize(F_op)


def ker_coker_1_minus_F(F_op: SemilinearMap) -> tuple[FinAbPGroup, FinAbPGroup]:
    """Kernel and cokernel of id - F on the component carrying ``F_op``."""
    L = one_minus(F_op)
    return kernel_group(L), smith_normal_form(L)[0]


# -- geometric series ------------------------------------------------------------


@dataclass(frozen=True)
class OperatorSeries:
    """A finite sum of semilinear maps; the k-th term has twist k * twist(F)."""

    terms: tuple

    def apply(self, x: Sequence[WittVec]) -> tuple:
        out = None
        for t in self.terms:
            y = t.apply(x)
            out = y if out is None else tuple(a + b for a, b in zip(out, y))
        return out

    def linearized(self) -> LinearizedMap:
        lins = [linearize(t) for t in self.terms]
        mod = lins[0].p ** lins[0].n
        rows = tuple(tuple(sum(vals) % mod for vals in zip(*rs)) for rs in zip(*(l.matrix for l in lins)))
        return LinearizedMap(lins[0].p, lins[0].n, lins[0].src_orders, lins[0].dst_orders, rows).reduced()


def _mat_mul_mod(a, b, orders, p, n):
    mod = p**n
    k = len(b[0]) if b else 0
    out = [[sum(a[i][t] * b[t][j] for t in range(len(b))) % mod for j in range(k)] for i in range(len(a))]
    return [[x % p**orders[i] for x in row] for i, row in enumerate(out)]


def geometric_inverse(F_op: SemilinearMap, tol: int = 64) -> OperatorSeries:
    """(1 - F)^-1 = sum_k F^k when F is nilpotent at the working precision."""
    if F_op.src != F_op.dst:
        raise ShapeError("F must be an endomorphism")
    terms = [SemilinearMap.identity(F_op.field, F_op.n, F_op.src)]
    power = F_op
    while not power.is_zero():
        if len(terms) > tol:
            raise NotNilpotentError(f"F^{tol} is not zero at precision {F_op.n}")
        terms.append(power)
        power = power @ F_op
    series = OperatorSeries(tuple(terms))
    if F_op.src:
        S = series.linearized().rows()
        L = one_minus(F_op)
        orders = L.dst_orders
        ident = identity_map(F_op.field, F_op.n, F_op.src).reduced().rows()
        for prod in (_mat_mul_mod(L.rows(), S, orders, L.p, L.n),
                     _mat_mul_mod(S, L.rows(), orders, L.p, L.n)):
            if prod != ident:
                raise InvariantViolation("geometric series is not an inverse of 1 - F")
    return series


# -- mapping fiber ------------------------------------------------------------------


def _fiber_differential(col: ColumnComplex, m: int):
    """Fib^m -> Fib^(m+1), (x, y) -> (dx, (1 - F)x - dy), with generator orders."""
    field, n = col.field, col.n
    p = field.p
    mod = p**n
    src = generator_orders(field, col.term(m)) + generator_orders(field, col.term(m - 1))
    dst = generator_orders(field, col.term(m + 1)) + generator_orders(field, col.term(m))
    a, b = len(generator_orders(field, col.term(m))), len(generator_orders(field, col.term(m - 1)))
    c = len(generator_orders(field, col.term(m + 1)))
    mat = zeros(integers_mod(p, n), len(dst), len(src))
    if a and c:
        d = linearize(col.d_map(m)).matrix
        for i in range(c):
            for j in range(a):
                mat[i][j] = d[i][j]
    if a:
        L = one_minus(col.F_map(m)).matrix
        for i in range(a):
            for j in range(a):
                mat[c + i][j] = L[i][j]
    if a and b:
        d = linearize(col.d_map(m - 1)).matrix
        for i in range(a):
            for j in range(b):
                mat[c + i][a + j] = (-d[i][j]) % mod
    return src, dst, mat


def fiber_cohomology(col: ColumnComplex, m: int) -> FinAbPGroup:
    """H^m of the mapping fiber of 1 - F on a column complex."""
    p, n = col.field.p, col.n
    ring = integers_mod(p, n)
    src, dst, beta = _fiber_differential(col, m)
    if not src:
        return FinAbPGroup(p)
    asrc, _, alpha = _fiber_differential(col, m - 1)
    sq = subquotient(ring, list(src), alpha if asrc else None, len(asrc),
                     beta if dst else None, list(dst))
    return FinAbPGroup(p, tuple(sq.orders))


# -- brute-force oracle -----------------------------------------------------------------


def _elements(field, lengths: Sequence[int]):
    rings = [list(witt_ring(field, l).elements()) for l in lengths]
    return itertools.product(*rings)


def _size(field, lengths) -> int:
    return field.q ** sum(lengths)


def _vadd(x, y):
    return tuple(a + b for a, b in zip(x, y))


def _vsub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def _vp(x):
    return tuple(witt_p_mult(a) for a in x)


def _zero_vec(field, lengths) -> tuple:
    return tuple(witt_ring(field, l).zero for l in lengths)


def _is_zero(x) -> bool:
    return all(a.is_zero() for a in x)


def _factors_from_filtration(p: int, sizes: list) -> FinAbPGroup:
    """Invariant factors from |p^k H| for k = 0, 1, ... (ending in 1)."""
    logs = [round(math.log(s, p)) for s in sizes]
    counts = [logs[k] - logs[k + 1] for k in range(len(logs) - 1)]  # factors > k
    factors = []
    for k, cnt in enumerate(counts):
        nxt = counts[k + 1] if k + 1 < len(counts) else 0
        factors += [k + 1] * (cnt - nxt)
    return FinAbPGroup(p, tuple(factors))


def _quotient_factors(p: int, Z: set, B: set) -> FinAbPGroup:
    """Invariant factors of Z/B, with |p^k(Z/B)| = |p^k Z| / |p^k Z meet B|."""
    sizes = []
    cur = Z
    while True:
        sizes.append(len(cur) // len(cur & B))
        if sizes[-1] == 1:
            break
        cur = {_vp(x) for x in cur}
    return _factors_from_filtration(p, sizes)


def brute_force_oracle(F_op: SemilinearMap, limit: int = ORACLE_LIMIT) -> tuple[FinAbPGroup, FinAbPGroup]:
    """(ker, coker) of id - F by exhaustive enumeration of the component."""
    field, lengths = F_op.field, F_op.src
    if _size(field, lengths) > limit:
        raise OracleRefused(f"component has {_size(field, lengths)} elements")
    if not lengths:
        return FinAbPGroup(field.p), FinAbPGroup(field.p)
    G, K, I = set(), set(), set()
    for x in _elements(field, lengths):
        y = _vsub(x, F_op.apply(x))
        G.add(x)
        I.add(y)
        if _is_zero(y):
            K.add(x)
    return _quotient_factors(field.p, K, {_zero_vec(field, lengths)}), _quotient_factors(field.p, G, I)


def brute_force_fiber(col: ColumnComplex, m: int, limit: int = ORACLE_LIMIT) -> FinAbPGroup:
    """H^m of the fiber of 1 - F by enumeration of Fib^m and Fib^(m-1)."""
    field = col.field
    p = field.p
    here = col.term(m) + col.term(m - 1)
    below = col.term(m - 1) + col.term(m - 2)
    if max(_size(field, here), _size(field, below)) > limit:
        raise OracleRefused("fiber terms are too large to enumerate")
    if not here:
        return FinAbPGroup(p)
    a = len(col.term(m))
    b = len(col.term(m - 1))
    dm, dm1, dm2 = col.d_map(m), col.d_map(m - 1), col.d_map(m - 2)
    Fm, Fm1 = col.F_map(m), col.F_map(m - 1)

    def d_fib(x, y, d_x, d_y, F):
        return d_x.apply(x) + _vsub(_vsub(x, F.apply(x)), d_y.apply(y))

    Z = set()
    for v in _elements(field, here):
        x, y = v[:a], v[a:]
        if _is_zero(d_fib(x, y, dm, dm1, Fm)):
            Z.add(v)
    B = set()
    c = len(col.term(m - 2))
    for v in _elements(field, below):
        x, y = v[:b], v[b:b + c]
        B.add(d_fib(x, y, dm1, dm2, Fm1))
    B.add(_zero_vec(field, here))
    return _quotient_factors(p, Z, B)
