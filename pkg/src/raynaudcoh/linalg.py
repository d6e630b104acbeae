"""Exact linear algebra over finite chain rings (Z/p^n and W_n(F_q)).

A chain ring has a uniformizer p, and every element is p^v times a unit, so
Smith reduction needs only minimal-valuation pivots and unit inverses.
Modules are presented as direct sums of cyclic modules R/p^e on explicit
generators; ``orders`` lists the exponents e (at most n).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Matrix = list  # list of rows


def zeros(ring, rows: int, cols: int) -> Matrix:
    return [[ring.zero] * cols for _ in range(rows)]


def identity(ring, k: int) -> Matrix:
    m = zeros(ring, k, k)
    for i in range(k):
        m[i][i] = ring.one
    return m


def matmul(ring, a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if not a:
        return []
    inner = len(b) if inner is None else inner
    cols = len(b[0]) if b else 0
    out = zeros(ring, len(a), cols)
    for i, row in enumerate(a):
        orow = out[i]
        for k in range(inner):
            x = row[k]
            if ring.is_zero(x):
                continue
            brow = b[k]
            for j in range(cols):
                y = brow[j]
                if not ring.is_zero(y):
                    orow[j] = ring.add(orow[j], ring.mul(x, y))
    return out


def matvec(ring, a: Matrix, v: Sequence) -> list:
    out = []
    for row in a:
        acc = ring.zero
        for x, y in zip(row, v):
            if not ring.is_zero(x) and not ring.is_zero(y):
                acc = ring.add(acc, ring.mul(x, y))
        out.append(acc)
    return out


def hstack(ring, rows: int, *blocks: Matrix) -> Matrix:
    out = [[] for _ in range(rows)]
    for b in blocks:
        for i in range(rows):
            out[i].extend(b[i] if b else [])
    return out


def relation_matrix(ring, orders: Sequence[int]) -> Matrix:
    """Columns p^e * e_i for the generators whose order is below p^n."""
    cols = [i for i, e in enumerate(orders) if e < ring.n]
    m = zeros(ring, len(orders), len(cols))
    for c, i in enumerate(cols):
        m[i][c] = ring.from_int(ring.p ** orders[i])
    return m


@dataclass
class Smith:
    """U A V = D with D diagonal; ``vals`` are the valuations of the nonzero pivots."""

    U: Matrix
    Uinv: Matrix
    V: Matrix
    vals: list
    rows: int
    cols: int


def smith(ring, A: Matrix, rows: int, cols: int) -> Smith:
    """Deterministic Smith reduction: minimal valuation first, then lowest (row, col)."""
    S = [list(r) for r in A]
    U, Uinv, V = identity(ring, rows), identity(ring, rows), identity(ring, cols)
    vals = []
    n = ring.n
    for k in range(min(rows, cols)):
        best = None
        for i in range(k, rows):
            Si = S[i]
            for j in range(k, cols):
                v = ring.val(Si[j])
                if v < n and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        if i != k:
            S[k], S[i] = S[i], S[k]
            U[k], U[i] = U[i], U[k]
            for r in Uinv:
                r[k], r[i] = r[i], r[k]
        if j != k:
            for r in S:
                r[k], r[j] = r[j], r[k]
            for r in V:
                r[k], r[j] = r[j], r[k]
        unit = ring.div_pk(S[k][k], v)
        uinv = ring.unit_inv(unit)
        S[k] = [ring.mul(uinv, x) for x in S[k]]
        U[k] = [ring.mul(uinv, x) for x in U[k]]
        for r in Uinv:
            r[k] = ring.mul(r[k], unit)
        # clear the pivot column
        for i2 in range(k + 1, rows):
            x = S[i2][k]
            if ring.is_zero(x):
                continue
            c = ring.div_pk(x, v)
            S[i2] = [ring.sub(a, ring.mul(c, b)) for a, b in zip(S[i2], S[k])]
            U[i2] = [ring.sub(a, ring.mul(c, b)) for a, b in zip(U[i2], U[k])]
            for r in Uinv:
                r[k] = ring.add(r[k], ring.mul(r[i2], c))
        # clear the pivot row
        for j2 in range(k + 1, cols):
            x = S[k][j2]
            if ring.is_zero(x):
                continue
            c = ring.div_pk(x, v)
            S[k][j2] = ring.zero
            for r in V:
                r[j2] = ring.sub(r[j2], ring.mul(c, r[k]))
        vals.append(v)
    return Smith(U, Uinv, V, vals, rows, cols)


def kernel(ring, A: Matrix, rows: int, cols: int) -> list:
    """Generators of {x in R^cols : A x = 0}."""
    sm = smith(ring, A, rows, cols)
    gens = []
    p, n = ring.p, ring.n
    for i in range(cols):
        col = [sm.V[r][i] for r in range(cols)]
        if i < len(sm.vals):
            v = sm.vals[i]
            if v == 0:
                continue
            col = [ring.mul(ring.from_int(p ** (n - v)), x) for x in col]
        gens.append(col)
    return gens


def solve(ring, A: Matrix, rows: int, cols: int, b: Sequence, sm: Smith | None = None):
    """Some x with A x = b, or None if the system is inconsistent."""
    sm = sm or smith(ring, A, rows, cols)
    c = matvec(ring, sm.U, b)
    y = [ring.zero] * cols
    for i in range(rows):
        if i < len(sm.vals):
            v = sm.vals[i]
            if ring.val(c[i]) < v:
                return None
            y[i] = ring.div_pk(c[i], v)
        elif not ring.is_zero(c[i]):
            return None
    return matvec(ring, sm.V, y)


def cokernel_orders(ring, A: Matrix, rows: int, cols: int) -> list:
    """Exponents e of R^rows / im(A) = sum R/p^e (e >= 1)."""
    sm = smith(ring, A, rows, cols)
    out = [v for v in sm.vals if v > 0]
    out += [ring.n] * (rows - len(sm.vals))
    return sorted(out, reverse=True)


@dataclass
class Subquotient:
    """H = Z/W for submodules W <= Z of a presented module B.

    ``basis`` are vectors in the generator coordinates of B whose classes
    generate H freely as sum R/p^e with e = ``orders``.
    """

    ring: object
    basis: list
    orders: list
    _gens: Matrix
    _system: Matrix
    _sm: Smith
    _U: Matrix
    _index: list

    def coordinates(self, z: Sequence) -> list:
        """Coordinates of a cycle z with respect to ``basis``."""
        ring = self.ring
        g = len(self._U)
        rows = len(z)
        sol = solve(ring, self._system, rows, len(self._system[0]) if self._system else 0, z, self._sm)
        if sol is None:
            raise ValueError("vector is not a cycle")
        y = sol[:g]
        full = matvec(ring, self._U, y)
        out = []
        for idx, e in zip(self._index, self.orders):
            x = full[idx]
            out.append(ring.reduce(x, e))
        return out


def subquotient(ring, B_orders: Sequence[int], alpha: Matrix | None, alpha_cols: int,
                beta: Matrix | None, C_orders: Sequence[int]) -> Subquotient:
    """Homology of A --alpha--> B --beta--> C at B."""
    nb = len(B_orders)
    nc = len(C_orders)
    relC = relation_matrix(ring, C_orders)
    relB = relation_matrix(ring, B_orders)
    if beta is None:
        beta = zeros(ring, nc, nb)
    # Z~ = {b : beta b in span(relC)}
    if nc and nb:
        big = hstack(ring, nc, beta, relC)
        ker = kernel(ring, big, nc, nb + len(relC[0]) if relC else nb)
        gens = [k[:nb] for k in ker]
    else:
        gens = [[ring.one if r == c else ring.zero for r in range(nb)] for c in range(nb)]
    gens = [gv for gv in gens if any(not ring.is_zero(x) for x in gv)]
    G = [[gv[r] for gv in gens] for r in range(nb)]
    g = len(gens)
    # W = im(alpha) + relations of B
    W = hstack(ring, nb, alpha if alpha_cols else None, relB) if nb else []
    wcols = len(W[0]) if W and W[0] else 0
    # Y = {y : G y in W}
    if g:
        negW = [[ring.neg(x) for x in row] for row in W]
        system = hstack(ring, nb, G, negW) if wcols else G
        ker = kernel(ring, system, nb, g + wcols)
        Y = [k[:g] for k in ker]
    else:
        system, Y = [[] for _ in range(nb)], []
    Ymat = [[yv[r] for yv in Y] for r in range(g)]
    sm = smith(ring, Ymat, g, len(Y))
    basis, orders, index = [], [], []
    for i in range(g):
        e = sm.vals[i] if i < len(sm.vals) else ring.n
        if e == 0:
            continue
        vec = matvec(ring, G, [sm.Uinv[r][i] for r in range(g)])
        basis.append(vec)
        orders.append(e)
        index.append(i)
    sys_sm = smith(ring, system, nb, len(system[0]) if system and system[0] else 0)
    return Subquotient(ring, basis, orders, G, system, sys_sm, sm.U, index)
