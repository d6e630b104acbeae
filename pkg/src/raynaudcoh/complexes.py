"""Bounded complexes of graded R-modules, stored as bicomplexes.

Entry (i, j) has R-degree i and complex degree j.  The horizontal map
d: (i, j) -> (i+1, j) is the module differential of row j; the vertical
map (i, j) -> (i, j+1) is the complex differential and commutes with F, V
and d.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import PrecisionError
from .galois import galois_ring
from .linalg import subquotient
from .raynaud import (
    DSumModel, GradedRModule, SemilinearMap, block_diag, block_matrix, check_operators,
    make_unit, map_from_json, module_from_json,
)
from .witt import FieldDesc, make_field, witt_ring

Key = tuple  # (i, j)


@dataclass(frozen=True, eq=False)
class RComplex:
    field: FieldDesc
    n: int
    entries: Mapping[Key, tuple]
    dh: Mapping[Key, SemilinearMap]
    dv: Mapping[Key, SemilinearMap]
    F: Mapping[Key, SemilinearMap]
    V: Mapping[Key, SemilinearMap]
    dsum: DSumModel | None = None

    @classmethod
    def create(cls, field, n, entries, F, V, dh=None, dv=None, dsum=None) -> "RComplex":
        ent = {k: tuple(l) for k, l in entries.items() if l}
        keep_h = {k: m for k, m in (dh or {}).items()
                  if k in ent and (k[0] + 1, k[1]) in ent and not m.is_zero()}
        keep_v = {k: m for k, m in (dv or {}).items()
                  if k in ent and (k[0], k[1] + 1) in ent and not m.is_zero()}
        return cls(field, n, dict(sorted(ent.items())), dict(sorted(keep_h.items())),
                   dict(sorted(keep_v.items())), {k: F[k] for k in sorted(ent)},
                   {k: V[k] for k in sorted(ent)}, dsum)

    @classmethod
    def from_module(cls, M: GradedRModule, j: int = 0) -> "RComplex":
        return cls.create(M.field, M.n, {(i, j): l for i, l in M.components.items()},
                          {(i, j): m for i, m in M.F.items()}, {(i, j): m for i, m in M.V.items()},
                          dh={(i, j): m for i, m in M.d.items()})

    def entry(self, i: int, j: int) -> tuple:
        return self.entries.get((i, j), ())

    def dh_map(self, i: int, j: int) -> SemilinearMap:
        m = self.dh.get((i, j))
        return m if m is not None else SemilinearMap.zero(
            self.field, self.n, self.entry(i, j), self.entry(i + 1, j))

    def dv_map(self, i: int, j: int) -> SemilinearMap:
        m = self.dv.get((i, j))
        return m if m is not None else SemilinearMap.zero(
            self.field, self.n, self.entry(i, j), self.entry(i, j + 1))

    def F_map(self, i: int, j: int) -> SemilinearMap:
        m = self.F.get((i, j))
        return m if m is not None else SemilinearMap.zero(self.field, self.n, (), (), 1)

    def complex_degrees(self) -> list:
        return sorted({j for _, j in self.entries})

    def r_degrees(self) -> list:
        return sorted({i for i, _ in self.entries})

    def row(self, j: int) -> GradedRModule:
        comps = {i: l for (i, jj), l in self.entries.items() if jj == j}
        return GradedRModule.create(
            self.field, self.n, comps, {i: self.F[(i, j)] for i in comps},
            {i: self.V[(i, j)] for i in comps}, {i: self.dh_map(i, j) for i in comps})

    def validate(self) -> list:
        bad = []
        for j in self.complex_degrees():
            comps = {i: l for (i, jj), l in self.entries.items() if jj == j}
            F = {i: self.F[(i, j)] for i in comps}
            V = {i: self.V[(i, j)] for i in comps}
            bad += [f"row {j}: {msg}" for msg in
                    check_operators(self.field, self.n, comps, F, V, lambda i, j=j: self.dh_map(i, j))]
        for (i, j) in self.entries:
            dv = self.dv_map(i, j)
            if not dv.is_zero() and dv.twist != 0:
                bad.append(f"({i},{j}): vertical map is not W-linear")
            if not dv.respects_annihilators():
                bad.append(f"({i},{j}): vertical map does not respect annihilators")
            if not self.entry(i, j + 1):
                continue
            if self.entry(i, j + 2) and not (self.dv_map(i, j + 1) @ dv).is_zero():
                bad.append(f"({i},{j}): vertical d^2 != 0")
            if not (self.F[(i, j + 1)] @ dv).equals(dv @ self.F[(i, j)]):
                bad.append(f"({i},{j}): vertical map does not commute with F")
            if not (self.V[(i, j + 1)] @ dv).equals(dv @ self.V[(i, j)]):
                bad.append(f"({i},{j}): vertical map does not commute with V")
            if self.entry(i + 1, j) or self.entry(i + 1, j + 1):
                lhs = self.dh_map(i, j + 1) @ dv
                rhs = self.dv_map(i + 1, j) @ self.dh_map(i, j)
                if not lhs.equals(rhs):
                    bad.append(f"({i},{j}): vertical map does not commute with d")
        return bad

    def __eq__(self, other):
        if not isinstance(other, RComplex):
            return NotImplemented
        if (self.field, self.n, dict(self.entries)) != (other.field, other.n, dict(other.entries)):
            return False
        for (i, j) in self.entries:
            pairs = ((self.F[(i, j)], other.F[(i, j)]), (self.V[(i, j)], other.V[(i, j)]),
                     (self.dh_map(i, j), other.dh_map(i, j)), (self.dv_map(i, j), other.dv_map(i, j)))
            if not all(a.equals(b) for a, b in pairs):
                return False
        return True

    def to_json(self) -> dict:
        rows = {}
        for j in self.complex_degrees():
            rows[str(j)] = self.row(j).to_json()
        return {
            "field": self.field.to_json(), "n": self.n, "rows": rows,
            "vertical": {f"{i},{j}": m.to_json() for (i, j), m in self.dv.items()},
        }


def complex_from_json(data: dict) -> RComplex:
    fd = make_field(data["field"]["p"], data["field"]["f"])
    n = data["n"]
    entries, F, V, dh, dv = {}, {}, {}, {}, {}
    for j, row in data["rows"].items():
        M = module_from_json(row)
        j = int(j)
        for i, l in M.components.items():
            entries[(i, j)] = l
            F[(i, j)], V[(i, j)] = M.F[i], M.V[i]
            dh[(i, j)] = M.d_map(i)
    for key, js in data["vertical"].items():
        i, j = map(int, key.split(","))
        dv[(i, j)] = map_from_json(fd, n, js)
    return RComplex.create(fd, n, entries, F, V, dh, dv)


@dataclass(frozen=True)
class ColumnComplex:
    """The column C^{r,*}: terms by complex degree, vertical maps, and F."""

    field: FieldDesc
    n: int
    r: int
    terms: Mapping[int, tuple]
    d: Mapping[int, SemilinearMap]
    F: Mapping[int, SemilinearMap]

    def term(self, j: int) -> tuple:
        return self.terms.get(j, ())

    def d_map(self, j: int) -> SemilinearMap:
        m = self.d.get(j)
        return m if m is not None else SemilinearMap.zero(self.field, self.n, self.term(j), self.term(j + 1))

    def F_map(self, j: int) -> SemilinearMap:
        m = self.F.get(j)
        if m is None:
            return SemilinearMap.zero(self.field, self.n, self.term(j), self.term(j), 1)
        return m

    def degrees(self) -> list:
        return sorted(self.terms)

    def size(self, j: int) -> int:
        return self.field.q ** sum(self.term(j))


def column(C: RComplex, r: int) -> ColumnComplex:
    terms = {j: l for (i, j), l in C.entries.items() if i == r}
    return ColumnComplex(C.field, C.n, r, terms,
                         {j: C.dv_map(r, j) for j in terms},
                         {j: C.F[(r, j)] for j in terms})


# -- Galois-ring helpers ------------------------------------------------------


def gr_matrix(op: SemilinearMap) -> list:
    G = galois_ring(op.field, op.n)
    return [[G.from_witt(x) for x in row] for row in op.matrix]


def gr_apply(op: SemilinearMap, vec, mat=None) -> list:
    G = galois_ring(op.field, op.n)
    mat = mat or gr_matrix(op)
    tw = [G.sigma(x, op.twist) for x in vec]
    out = []
    for i, row in enumerate(mat):
        acc = G.zero
        for a, x in zip(row, tw):
            if any(a) and any(x):
                acc = G.add(acc, G.mul(a, x))
        out.append(G.reduce(acc, op.dst[i]))
    return out


def _induced(op: SemilinearMap, src_sq, dst_sq, field, n) -> SemilinearMap:
    """Matrix of op on subquotient bases (columns are coordinates of images)."""
    G = galois_ring(field, n)
    mat = gr_matrix(op)
    cols = [dst_sq.coordinates(gr_apply(op, h, mat)) for h in src_sq.basis]
    rows = [[G.to_witt(cols[c][r]) for c in range(len(cols))] for r in range(len(dst_sq.basis))]
    return SemilinearMap.build(field, n, tuple(src_sq.orders), tuple(dst_sq.orders), rows, op.twist)


def _vertical_sq(C_terms, d_of, j, field, n):
    G = galois_ring(field, n)
    B = C_terms(j)
    A = C_terms(j - 1)
    Cn = C_terms(j + 1)
    alpha = gr_matrix(d_of(j - 1)) if A and B else None
    beta = gr_matrix(d_of(j)) if B and Cn else None
    return subquotient(G, list(B), alpha, len(A) if alpha else 0, beta, list(Cn))


def column_cohomology(col: ColumnComplex, j: int) -> tuple[tuple, SemilinearMap]:
    """H^j of a column as summand lengths together with the induced F."""
    sq = _vertical_sq(col.term, col.d_map, j, col.field, col.n)
    F = _induced(col.F_map(j), sq, sq, col.field, col.n) if sq.basis else \
        SemilinearMap.zero(col.field, col.n, (), (), 1)
    return tuple(sq.orders), F


def cohomology_Hj(C: RComplex, j: int) -> GradedRModule:
    """H^j of the bicomplex as a graded R-module with induced F, V, d."""
    sqs = {}
    for i in C.r_degrees():
        if C.entry(i, j):
            sq = _vertical_sq(lambda jj, i=i: C.entry(i, jj), lambda jj, i=i: C.dv_map(i, jj),
                              j, C.field, C.n)
            if sq.basis:
                sqs[i] = sq
    comps = {i: tuple(sq.orders) for i, sq in sqs.items()}
    F = {i: _induced(C.F[(i, j)], sq, sq, C.field, C.n) for i, sq in sqs.items()}
    V = {i: _induced(C.V[(i, j)], sq, sq, C.field, C.n) for i, sq in sqs.items()}
    d = {i: _induced(C.dh_map(i, j), sqs[i], sqs[i + 1], C.field, C.n)
         for i in sqs if i + 1 in sqs}
    return GradedRModule.create(C.field, C.n, comps, F, V, d)


# -- functors -------------------------------------------------------------------


def _remap(C: RComplex, di: int, dj: int, sign_h: int, sign_v: int) -> RComplex:
    def move(d, sign=1):
        return {(i + di, j + dj): (m if sign > 0 else -m) for (i, j), m in d.items()}

    dsum = None
    if C.dsum is not None:
        dsum = DSumModel.of((a + di, b + dj) for a, b in C.dsum.summands)
    return RComplex.create(C.field, C.n, move(C.entries), move(C.F), move(C.V),
                           move(C.dh, sign_h), move(C.dv, sign_v), dsum)


def shift(C: RComplex, k: int) -> RComplex:
    """C[k]: complex degree j moves to j - k, vertical maps times (-1)^k."""
    return _remap(C, 0, -k, 1, -1 if k % 2 else 1)


def twist_T_cx(C: RComplex, k: int = 1) -> RComplex:
    """Row-wise T^k: R-degree i moves to i - k, horizontal d times (-1)^k."""
    return _remap(C, -k, 0, -1 if k % 2 else 1, 1)


def tate_twist_cx(C: RComplex, r: int) -> RComplex:
    """C(r) = T^r(C)[-r]."""
    return shift(twist_T_cx(C, r), -r)


def _restrict(op: SemilinearMap, src_idx, dst_idx, src_len, dst_len) -> SemilinearMap:
    rows = [[op.matrix[a][b] for b in src_idx] for a in dst_idx]
    return SemilinearMap.build(op.field, op.n, src_len, dst_len, rows, op.twist)


def cone_mult(C: RComplex, m: int) -> RComplex:
    """Mapping cone of p^m from C/p^(n-m) into C.

    Entry (i, j) is C'^{i,j+1} + C^{i,j} with C' the summands shortened by m;
    the vertical map is (x, y) -> (-d'x, p^m x + d y).  For C a reduction of
    a torsion-free complex this is quasi-isomorphic to C/p^m.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    if m >= C.n:
        raise PrecisionError(f"p^{m} vanishes at Witt precision {C.n}")
    field, n = C.field, C.n
    pm = witt_ring(field, n).from_int(field.p**m)

    kept = {k: [a for a, x in enumerate(l) if x > m] for k, l in C.entries.items()}
    short = {k: tuple(C.entries[k][a] - m for a in kept[k]) for k in C.entries}

    def short_len(i, j):
        return short.get((i, j), ())

    def short_op(op, src_key, dst_key):
        return _restrict(op, kept.get(src_key, []), kept.get(dst_key, []),
                         short_len(*src_key), short_len(*dst_key))

    def inclusion(key):
        # p^m : C'(key) -> C(key) on the kept summands
        zero = witt_ring(field, n).zero
        idx = kept[key]
        mat = [[pm if r == idx[c] else zero for c in range(len(idx))]
               for r in range(len(C.entries[key]))]
        return SemilinearMap.build(field, n, short_len(*key), C.entry(*key), mat, 0)

    keys = set()
    for (i, j) in C.entries:
        keys.add((i, j))
        keys.add((i, j - 1))
    entries, F, V, dh, dv = {}, {}, {}, {}, {}
    for (i, j) in sorted(keys):
        up, here = (i, j + 1), (i, j)
        top = short_len(*up)
        bot = C.entry(*here)
        if not top and not bot:
            continue
        entries[here] = top + bot
        Fs = short_op(C.F_map(*up), up, up) if up in C.entries else SemilinearMap.zero(field, n, (), (), 1)
        Vs = short_op(C.V[up], up, up) if up in C.entries else SemilinearMap.zero(field, n, (), (), -1)
        Fb = C.F[here] if here in C.entries else SemilinearMap.zero(field, n, (), (), 1)
        Vb = C.V[here] if here in C.entries else SemilinearMap.zero(field, n, (), (), -1)
        F[here] = block_diag([Fs, Fb], field, n)
        V[here] = block_diag([Vs, Vb], field, n)
    for (i, j) in entries:
        up, here = (i, j + 1), (i, j)
        # horizontal (i,j) -> (i+1,j)
        if (i + 1, j) in entries:
            hs = short_op(C.dh_map(*up), up, (i + 1, j + 1))
            hb = C.dh_map(*here)
            zero_tb = SemilinearMap.zero(field, n, C.entry(*here), short_len(i + 1, j + 1))
            zero_bt = SemilinearMap.zero(field, n, short_len(*up), C.entry(i + 1, j))
            dh[here] = block_matrix([[hs, zero_tb], [zero_bt, hb]], field, n)
        # vertical (i,j) -> (i,j+1)
        if (i, j + 1) in entries:
            vs = -short_op(C.dv_map(*up), up, (i, j + 2))
            zero_tb = SemilinearMap.zero(field, n, C.entry(*here), short_len(i, j + 2))
            inc = inclusion(up) if up in C.entries else SemilinearMap.zero(field, n, (), C.entry(*up))
            vb = C.dv_map(*here)
            dv[here] = block_matrix([[vs, zero_tb], [inc, vb]], field, n)
    return RComplex.create(field, n, entries, F, V, dh, dv)


def unit_complex(field: FieldDesc, n: int) -> RComplex:
    C = RComplex.from_module(make_unit(field, n))
    return RComplex.create(C.field, C.n, C.entries, C.F, C.V, C.dh, C.dv, DSumModel.of([(0, 0)]))


def realize_dsum(D: DSumModel, field: FieldDesc, n: int) -> RComplex:
    """Complex with W_n at each summand position, F = sigma, V = p sigma^-1, zero maps."""
    unit = make_unit(field, n)
    entries, F, V = {}, {}, {}
    for j, s in D.summands:
        key = (j, s)
        if key in entries:
            entries[key] = entries[key] + (n,)
            F[key] = block_diag([F[key], unit.F[0]], field, n)
            V[key] = block_diag([V[key], unit.V[0]], field, n)
        else:
            entries[key] = (n,)
            F[key], V[key] = unit.F[0], unit.V[0]
    return RComplex.create(field, n, entries, F, V, dsum=D)
