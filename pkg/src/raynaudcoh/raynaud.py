"""Graded modules over the Raynaud ring and the truncated ring itself.

A graded R-module is stored as components M^i = sum_j W_{n_j}(F_q) with
semilinear operators F (twist +1), V (twist -1) and a W-linear differential
d: M^i -> M^{i+1}.  Operators are matrices over W_n together with a Frobenius
twist; a map (A, s) sends x to A * sigma^s(x).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import PrecisionError, ShapeError
from .witt import FieldDesc, WittVec, make_field, witt_ring, witt_sigma, witt_from_json

Lengths = tuple  # summand lengths (n_1, ..., n_k)


def _canon(x: WittVec, m: int) -> WittVec:
    return x.reduce_mod(m)


@dataclass(frozen=True)
class SemilinearMap:
    """x -> matrix * sigma^twist(x) from sum W_{src[j]} to sum W_{dst[i]}."""

    field: FieldDesc
    n: int
    src: Lengths
    dst: Lengths
    matrix: tuple  # tuple of rows of WittVec (length n), reduced mod p^dst[i]
    twist: int = 0

    def __post_init__(self):
        if len(self.matrix) != len(self.dst) or any(len(r) != len(self.src) for r in self.matrix):
            raise ShapeError("matrix shape does not match source/target")

    # -- constructors -----------------------------------------------------

    @classmethod
    def build(cls, field, n, src, dst, rows, twist=0) -> "SemilinearMap":
        """Build from rows of WittVec or integers, reducing entries canonically."""
        R = witt_ring(field, n)
        mat = []
        for i, row in enumerate(rows):
            out = []
            for x in row:
                if isinstance(x, int):
                    x = R.from_int(x)
                if x.n != n or x.field != field:
                    raise ShapeError("matrix entry has the wrong ring")
                out.append(_canon(x, dst[i]))
            mat.append(tuple(out))
        return cls(field, n, tuple(src), tuple(dst), tuple(mat), twist)

    @classmethod
    def zero(cls, field, n, src, dst, twist=0) -> "SemilinearMap":
        z = witt_ring(field, n).zero
        return cls(field, n, tuple(src), tuple(dst), tuple(tuple(z for _ in src) for _ in dst), twist)

    @classmethod
    def scalar(cls, field, n, lengths, c, twist=0) -> "SemilinearMap":
        R = witt_ring(field, n)
        c = R.from_int(c) if isinstance(c, int) else c
        rows = [[c if i == j else R.zero for j in range(len(lengths))] for i in range(len(lengths))]
        return cls.build(field, n, lengths, lengths, rows, twist)

    @classmethod
    def identity(cls, field, n, lengths) -> "SemilinearMap":
        return cls.scalar(field, n, lengths, 1, 0)

    # -- algebra -------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.matrix for x in row)

    def compose(self, other: "SemilinearMap") -> "SemilinearMap":
        """self o other = (A sigma^s(B), s + t)."""
        if other.dst != self.src:
            raise ShapeError(f"cannot compose: {other.dst} != {self.src}")
        R = witt_ring(self.field, self.n)
        rows = []
        for i, arow in enumerate(self.matrix):
            out = []
            for j in range(len(other.src)):
                acc = R.zero
                for k, a in enumerate(arow):
                    b = other.matrix[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * witt_sigma(b, self.twist)
                out.append(acc)
            rows.append(out)
        return SemilinearMap.build(self.field, self.n, other.src, self.dst, rows,
                                   self.twist + other.twist)

    def __matmul__(self, other: "SemilinearMap") -> "SemilinearMap":
        return self.compose(other)

    def _same_shape(self, other):
        if (self.src, self.dst, self.field, self.n) != (other.src, other.dst, other.field, other.n):
            raise ShapeError("semilinear maps of different shapes")

    def __add__(self, other: "SemilinearMap") -> "SemilinearMap":
        self._same_shape(other)
        if self.twist != other.twist and not (self.is_zero() or other.is_zero()):
            raise ShapeError("cannot add maps with different twists")
        twist = other.twist if self.is_zero() else self.twist
        rows = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.matrix, other.matrix)]
        return SemilinearMap.build(self.field, self.n, self.src, self.dst, rows, twist)

    def __neg__(self) -> "SemilinearMap":
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c) -> "SemilinearMap":
        R = witt_ring(self.field, self.n)
        c = R.from_int(c) if isinstance(c, int) else c
        rows = [[c * a for a in row] for row in self.matrix]
        return SemilinearMap.build(self.field, self.n, self.src, self.dst, rows, self.twist)

    def equals(self, other: "SemilinearMap") -> bool:
        """Equality as maps: zero maps are equal regardless of twist."""
        if (self.src, self.dst) != (other.src, other.dst):
            return False
        if self.is_zero() and other.is_zero():
            return True
        if (self.twist - other.twist) % self.field.f:
            return False
        return self.matrix == other.matrix

    def respects_annihilators(self) -> bool:
        for i, row in enumerate(self.matrix):
            for j, a in enumerate(row):
                if not a.is_zero() and a.valuation() < self.dst[i] - self.src[j]:
                    return False
        return True

    def apply(self, x: Sequence[WittVec]) -> tuple:
        """Apply to a vector of Witt vectors of lengths ``src``."""
        out = []
        for i, row in enumerate(self.matrix):
            m = self.dst[i]
            acc = witt_ring(self.field, self.n).zero
            for a, xj in zip(row, x):
                if not a.is_zero() and not xj.is_zero():
                    acc = acc + a * witt_sigma(xj.lift(self.n), self.twist)
            out.append(acc.truncate(m))
        return tuple(out)

    def block(self, rows_idx, cols_idx) -> "SemilinearMap":
        rows = [[self.matrix[i][j] for j in cols_idx] for i in rows_idx]
        return SemilinearMap(self.field, self.n, tuple(self.src[j] for j in cols_idx),
                             tuple(self.dst[i] for i in rows_idx),
                             tuple(tuple(r) for r in rows), self.twist)

    def to_json(self) -> dict:
        return {"src": list(self.src), "dst": list(self.dst), "twist": self.twist,
                "matrix": [[x.to_json()["coords"] for x in row] for row in self.matrix]}


def block_diag(maps: Sequence[SemilinearMap], field, n) -> SemilinearMap:
    src = tuple(x for m in maps for x in m.src)
    dst = tuple(x for m in maps for x in m.dst)
    nonzero = [m.twist for m in maps if not m.is_zero()]
    twist = nonzero[0] if nonzero else (maps[0].twist if maps else 0)
    if any(t != twist for t in nonzero):
        raise ShapeError("block diagonal of maps with different twists")
    z = witt_ring(field, n).zero
    rows = []
    c0 = 0
    for m in maps:
        for r in m.matrix:
            rows.append(tuple([z] * c0 + list(r) + [z] * (len(src) - c0 - len(m.src))))
        c0 += len(m.src)
    return SemilinearMap(field, n, src, dst, tuple(rows), twist)


def block_matrix(blocks: Sequence[Sequence[SemilinearMap]], field, n) -> SemilinearMap:
    """Assemble a 2D block matrix; all nonzero blocks must share a twist."""
    nonzero = [b.twist for row in blocks for b in row if not b.is_zero()]
    twist = nonzero[0] if nonzero else 0
    if any(t != twist for t in nonzero):
        raise ShapeError("block matrix with mixed twists")
    src = tuple(x for b in blocks[0] for x in b.src)
    dst = tuple(x for row in blocks for x in row[0].dst)
    rows = []
    for brow in blocks:
        for k in range(len(brow[0].dst)):
            rows.append(tuple(x for b in brow for x in b.matrix[k]))
    return SemilinearMap(field, n, src, dst, tuple(rows), twist)


# -- graded R-modules -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GradedRModule:
    """Finite-length graded module over the Raynaud ring.

    ``components`` maps an R-degree i to the summand lengths of M^i;
    ``F`` and ``V`` map i to operators on M^i, ``d`` maps i to M^i -> M^{i+1}.
    """

    field: FieldDesc
    n: int
    components: Mapping[int, Lengths]
    F: Mapping[int, SemilinearMap]
    V: Mapping[int, SemilinearMap]
    d: Mapping[int, SemilinearMap]

    @classmethod
    def create(cls, field, n, components, F, V, d=None) -> "GradedRModule":
        comps = {i: tuple(l) for i, l in components.items() if l}
        dd = {}
        for i, m in (d or {}).items():
            if i in comps and i + 1 in comps and not m.is_zero():
                dd[i] = m
        return cls(field, n, dict(sorted(comps.items())),
                   {i: F[i] for i in comps}, {i: V[i] for i in comps}, dict(sorted(dd.items())))

    def component(self, i: int) -> Lengths:
        return self.components.get(i, ())

    def d_map(self, i: int) -> SemilinearMap:
        m = self.d.get(i)
        if m is None:
            return SemilinearMap.zero(self.field, self.n, self.component(i), self.component(i + 1))
        return m

    def degrees(self) -> list:
        return sorted(self.components)

    def __eq__(self, other):
        if not isinstance(other, GradedRModule):
            return NotImplemented
        if (self.field, self.n, dict(self.components)) != (other.field, other.n, dict(other.components)):
            return False
        for i in self.components:
            if not (self.F[i].equals(other.F[i]) and self.V[i].equals(other.V[i])
                    and self.d_map(i).equals(other.d_map(i))):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "n": self.n,
            "components": {str(i): list(l) for i, l in self.components.items()},
            "ops": {str(i): {"F": self.F[i].to_json(), "V": self.V[i].to_json(),
                             "d": self.d_map(i).to_json()} for i in self.components},
        }


def map_from_json(fd: FieldDesc, n: int, js: dict) -> SemilinearMap:
    rows = [[witt_from_json({"p": fd.p, "f": fd.f, "n": n, "coords": c}) for c in r]
            for r in js["matrix"]]
    return SemilinearMap.build(fd, n, js["src"], js["dst"], rows, js["twist"])


def module_from_json(data: dict) -> GradedRModule:
    fd = make_field(data["field"]["p"], data["field"]["f"])
    n = data["n"]
    comps = {int(i): tuple(l) for i, l in data["components"].items()}

    def op(js):
        return map_from_json(fd, n, js)

    ops = data["ops"]
    F = {int(i): op(o["F"]) for i, o in ops.items()}
    V = {int(i): op(o["V"]) for i, o in ops.items()}
    d = {int(i): op(o["d"]) for i, o in ops.items()}
    return GradedRModule.create(fd, n, comps, F, V, d)


def make_unit(field: FieldDesc, n: int) -> GradedRModule:
    """The unit object: W_n in degree 0 with F = sigma, V = p sigma^-1, d = 0."""
    lengths = (n,)
    F = SemilinearMap.scalar(field, n, lengths, 1, twist=1)
    V = SemilinearMap.scalar(field, n, lengths, field.p, twist=-1)
    return GradedRModule.create(field, n, {0: lengths}, {0: F}, {0: V})


def zero_module(field: FieldDesc, n: int) -> GradedRModule:
    return GradedRModule.create(field, n, {}, {}, {})


def check_operators(field, n, lengths_of, F, V, d) -> list:
    """Relation check shared by modules and complex rows."""
    bad = []
    p = field.p
    for i, lengths in lengths_of.items():
        Fi, Vi = F[i], V[i]
        for name, op, tw in (("F", Fi, 1), ("V", Vi, -1)):
            if op.src != lengths or op.dst != lengths:
                bad.append(f"degree {i}: {name} has the wrong shape")
            elif not op.is_zero() and op.twist != tw:
                bad.append(f"degree {i}: {name} has twist {op.twist}, expected {tw}")
            elif not op.respects_annihilators():
                bad.append(f"degree {i}: {name} does not respect annihilators")
        pid = SemilinearMap.scalar(field, n, lengths, p)
        if not (Fi @ Vi).equals(pid):
            bad.append(f"degree {i}: FV != p")
        if not (Vi @ Fi).equals(pid):
            bad.append(f"degree {i}: VF != p")
        di = d(i)
        if not di.is_zero() and di.twist != 0:
            bad.append(f"degree {i}: d is not W-linear")
        if not di.respects_annihilators():
            bad.append(f"degree {i}: d does not respect annihilators")
        if i + 1 in lengths_of:
            if not (F[i + 1] @ di @ Vi).equals(di):
                bad.append(f"degree {i}: FdV != d")
            if i + 2 in lengths_of and not (d(i + 1) @ di).is_zero():
                bad.append(f"degree {i}: d^2 != 0")
    return bad


def validate_module(M: GradedRModule) -> list:
    """List of violated Raynaud relations (empty when M is valid)."""
    return check_operators(M.field, M.n, dict(M.components), M.F, M.V, M.d_map)


def _reindex(M: GradedRModule, shift: int, sign: int) -> GradedRModule:
    comps = {i - shift: l for i, l in M.components.items()}
    F = {i - shift: m for i, m in M.F.items()}
    V = {i - shift: m for i, m in M.V.items()}
    d = {i - shift: (m if sign > 0 else -m) for i, m in M.d.items()}
    return GradedRModule.create(M.field, M.n, comps, F, V, d)


def twist_T(M: GradedRModule) -> GradedRModule:
    """(TM)^i = M^{i+1}, with d negated."""
    return _reindex(M, 1, -1)


def twist_T_inv(M: GradedRModule) -> GradedRModule:
    return _reindex(M, -1, -1)


def twist_T_power(M: GradedRModule, k: int) -> GradedRModule:
    for _ in range(abs(k)):
        M = twist_T(M) if k > 0 else twist_T_inv(M)
    return M


def direct_sum(Ms: Sequence[GradedRModule]) -> GradedRModule:
    if not Ms:
        raise ShapeError("direct sum of an empty list")
    field, n = Ms[0].field, Ms[0].n
    if any((M.field, M.n) != (field, n) for M in Ms):
        raise ShapeError("direct sum of modules over different scalars")
    degrees = sorted({i for M in Ms for i in M.components})
    comps, F, V, d = {}, {}, {}, {}
    for i in degrees:
        parts = [M for M in Ms if M.component(i)]
        comps[i] = tuple(x for M in parts for x in M.component(i))
        F[i] = block_diag([M.F[i] for M in parts], field, n)
        V[i] = block_diag([M.V[i] for M in parts], field, n)
    for i in degrees:
        if i + 1 in comps:
            parts = [M for M in Ms if M.component(i) or M.component(i + 1)]
            d[i] = block_diag([M.d_map(i) for M in parts], field, n)
    return GradedRModule.create(field, n, comps, F, V, d)


# -- the truncated Raynaud ring ----------------------------------------------
#
# Monomials are indexed by a signed exponent e: in degree 0, e >= 0 is F^e and
# e < 0 is V^-e; in degree 1, e >= 0 is F^e d and e < 0 is d V^-e.  Elements
# are sums a_e * m(e) with left coefficients in W_n.  Products are exact in
# R/p^n R; monomial products reduce to p^c m(e1 + e2).


def _monomial_product(deg1: int, e1: int, deg2: int, e2: int) -> tuple[int, int, int]:
    """(degree, exponent, power of p) for m_deg1(e1) * m_deg2(e2)."""
    if deg1 == 1 and deg2 == 1:
        raise ShapeError("product of two degree-1 elements lands in degree 2")
    if deg1 == 0 and deg2 == 0:
        c = min(abs(e1), abs(e2)) if e1 * e2 < 0 else 0
        return 0, e1 + e2, c
    if deg1 == 0:
        return 1, e1 + e2, max(0, -e1)
    return 1, e1 + e2, max(0, e2)


@dataclass(frozen=True)
class TruncRaynaudElem:
    """Element of R at precision (n, K): W_n coefficients, V-degree < n, F-degree <= K."""

    field: FieldDesc
    n: int
    K: int
    degree: int
    terms: tuple  # sorted (e, WittVec) pairs with nonzero coefficients

    @classmethod
    def create(cls, field, n, K, degree, coeffs: Mapping[int, WittVec | int]) -> "TruncRaynaudElem":
        if degree not in (0, 1):
            raise ShapeError("degree must be 0 or 1")
        R = witt_ring(field, n)
        terms = {}
        for e, a in coeffs.items():
            a = R.from_int(a) if isinstance(a, int) else a
            if a.is_zero():
                continue
            if e > K or e < -(n - 1):
                raise PrecisionError(f"monomial exponent {e} outside precision (n={n}, K={K})")
            terms[e] = a
        return cls(field, n, K, degree, tuple(sorted(terms.items())))

    @property
    def coeffs(self) -> dict:
        return dict(self.terms)

    def coefficient(self, e: int) -> WittVec:
        return self.coeffs.get(e, witt_ring(self.field, self.n).zero)

    # named accessors matching the usual presentation
    @property
    def a0(self) -> WittVec:
        return self.coefficient(0)

    def f_degree(self) -> int:
        return max((e for e, _ in self.terms if e >= 0), default=0)

    def _check(self, other):
        if (self.field, self.n, self.K) != (other.field, other.n, other.K):
            raise ShapeError("Raynaud elements at different precisions")

    def __add__(self, other: "TruncRaynaudElem") -> "TruncRaynaudElem":
        self._check(other)
        if self.degree != other.degree and self.terms and other.terms:
            raise ShapeError("sum of elements of different degrees")
        deg = self.degree if self.terms else other.degree
        out = self.coeffs
        for e, b in other.terms:
            out[e] = out[e] + b if e in out else b
        return TruncRaynaudElem.create(self.field, self.n, self.K, deg, out)

    def __neg__(self):
        return TruncRaynaudElem.create(self.field, self.n, self.K, self.degree,
                                       {e: -a for e, a in self.terms})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TruncRaynaudElem") -> "TruncRaynaudElem":
        return ring_mul(self, other)

    def is_zero(self) -> bool:
        return not self.terms


def raynaud_monomial(field, n, K, degree, e, coeff=1) -> TruncRaynaudElem:
    return TruncRaynaudElem.create(field, n, K, degree, {e: coeff})


def ring_mul(x: TruncRaynaudElem, y: TruncRaynaudElem) -> TruncRaynaudElem:
    """Product in R/p^n R, using a m(e) = m(e) sigma^-e(a) rewritten as m(e) b = sigma^e(b) m(e)."""
    x._check(y)
    if x.degree == 1 and y.degree == 1:
        raise ShapeError("product of two degree-1 elements lands in degree 2")
    field, n, K = x.field, x.n, x.K
    R = witt_ring(field, n)
    p = field.p
    deg = 1 if (x.degree or y.degree) else 0
    out: dict[int, WittVec] = {}
    for e1, a in x.terms:
        for e2, b in y.terms:
            d, e, c = _monomial_product(x.degree, e1, y.degree, e2)
            if c >= n:
                continue
            coeff = a * witt_sigma(b, e1) * R.from_int(p**c)
            if coeff.is_zero():
                continue
            out[e] = out[e] + coeff if e in out else coeff
    out = {e: a for e, a in out.items() if not a.is_zero()}
    for e in out:
        if e > K:
            raise PrecisionError(f"F-degree {e} exceeds K={K}")
        if e < -(n - 1):
            raise PrecisionError(f"V-degree {-e} exceeds n-1={n - 1}")
    return TruncRaynaudElem.create(field, n, K, deg, out)


def augmentation(x: TruncRaynaudElem) -> WittVec:
    """Action of a degree-0 element on 1 in the unit object."""
    if x.degree != 0:
        raise ShapeError("augmentation is defined on degree 0")
    unit = make_unit(x.field, x.n)
    F, V = unit.F[0], unit.V[0]
    R = witt_ring(x.field, x.n)
    total = R.zero
    for e, a in x.terms:
        v = (R.one,)
        op = F if e > 0 else V
        for _ in range(abs(e)):
            v = op.apply(v)
        total = total + a * v[0]
    return total


def spanning_monomials(n: int, K: int, degree: int, max_f: int | None = None) -> list:
    """Exponents of the spanning set in the given degree."""
    top = K if max_f is None else max_f
    return list(range(-(n - 1), top + 1))


# -- formal direct sums of twists of the unit --------------------------------


@dataclass(frozen=True)
class DSumModel:
    """Formal sum of T^{-j}(1)[-s]; the summand sits in R-degree j, complex degree s."""

    summands: tuple  # (j, s) pairs

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> "DSumModel":
        return cls(tuple(tuple(p) for p in pairs))


def is_diagonal(D: DSumModel) -> bool:
    """True iff module degree + complex degree = 0 for every summand."""
    return all(j + s == 0 for j, s in D.summands)
