"""Finite fields F_q and truncated Witt vectors W_n(F_q).

Elements of F_q are encoded as integers ``code = c_0 + c_1 p + ... + c_{f-1} p^{f-1}``
where ``c_0 + c_1 t + ...`` is the residue modulo the defining polynomial.
Witt vectors store these codes coordinate-wise; ring operations evaluate the
universal sum and product polynomials over F_p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import PrecisionError, ShapeError

#: Largest Witt length for which universal polynomials are generated.
WITT_LENGTH_CAP = 8

Poly = dict  # exponent tuple -> integer coefficient


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


# -- polynomials over F_p, as coefficient lists c_0..c_d -------------------


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial b over F_p."""
    a = [x % p for x in a]
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            for t in range(db + 1):
                a[k - db + t] = (a[k - db + t] - c * b[t]) % p
    return _trim(a[:db] if len(a) > db else a)


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1..deg/2."""
    f = len(modulus) - 1
    for d in range(1, f // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(modulus, list(low) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Monic irreducible polynomial of degree f with least code sum c_k p^k."""
    for code in range(p**f):
        low = [(code // p**k) % p for k in range(f)]
        cand = tuple(low) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class FieldDesc:
    """The finite field F_q = F_p[t]/(modulus), q = p^f.

    ``modulus`` lists coefficients c_0..c_f of a monic polynomial.
    """

    p: int
    f: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ShapeError(f"p={self.p} is not prime")
        if self.f < 1 or len(self.modulus) != self.f + 1 or self.modulus[-1] != 1:
            raise ShapeError("modulus must be monic of degree f")
        if not _is_irreducible(self.modulus, self.p):
            raise ShapeError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p**self.f

    @property
    def tables(self) -> "_FieldTables":
        return _tables(self)

    def __repr__(self):
        return f"F_{self.q}"

    def to_json(self) -> dict:
        return {"p": self.p, "f": self.f, "modulus": list(self.modulus)}


@lru_cache(maxsize=None)
def make_field(p: int, f: int = 1) -> FieldDesc:
    if not is_prime(p):
        raise ShapeError(f"p={p} is not prime")
    if f < 1:
        raise ShapeError("f must be positive")
    return FieldDesc(p, f, least_irreducible(p, f))


class _FieldTables:
    """Addition table plus discrete log/exp tables for F_q."""

    def __init__(self, fd: FieldDesc):
        p, f, q = fd.p, fd.f, fd.q
        self.p, self.q = p, q

        def digits(a):
            return [(a // p**k) % p for k in range(f)]

        def code(c):
            return sum((x % p) * p**k for k, x in enumerate(c))

        self.add = [[code([x + y for x, y in zip(digits(a), digits(b))]) for b in range(q)]
                    for a in range(q)]
        self.neg = [code([-x for x in digits(a)]) for a in range(q)]

        def mul(a, b):
            da, db = digits(a), digits(b)
            prod = [0] * (2 * f)
            for i, x in enumerate(da):
                for j, y in enumerate(db):
                    prod[i + j] += x * y
            return code(_poly_mod(prod, fd.modulus, p) + [0] * f)

        # smallest primitive element by code
        order = q - 1
        for g in range(1, q):
            powers, x = [], 1
            for _ in range(order):
                powers.append(x)
                x = mul(x, g)
            if len(set(powers)) == order:
                break
        self.exp = powers + powers  # doubled to skip a modulo in products
        self.log = [0] * q
        for k, x in enumerate(powers):
            self.log[x] = k
        self.order = order

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self.exp[(self.log[a] * e) % self.order]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self.exp[(-self.log[a]) % self.order]


@lru_cache(maxsize=None)
def _tables(fd: FieldDesc) -> _FieldTables:
    return _FieldTables(fd)


@dataclass(frozen=True)
class FqElem:
    field: FieldDesc
    code: int

    @classmethod
    def from_coeffs(cls, fd: FieldDesc, coeffs: Sequence[int]) -> "FqElem":
        if len(coeffs) > fd.f:
            raise ShapeError("too many coefficients")
        return cls(fd, sum((c % fd.p) * fd.p**k for k, c in enumerate(coeffs)))

    @property
    def coeffs(self) -> list[int]:
        p = self.field.p
        return [(self.code // p**k) % p for k in range(self.field.f)]

    def __add__(self, other: "FqElem") -> "FqElem":
        return FqElem(self.field, self.field.tables.add[self.code][other.code])

    def __neg__(self) -> "FqElem":
        return FqElem(self.field, self.field.tables.neg[self.code])

    def __sub__(self, other: "FqElem") -> "FqElem":
        return self + (-other)

    def __mul__(self, other: "FqElem") -> "FqElem":
        return FqElem(self.field, self.field.tables.mul(self.code, other.code))

    def __pow__(self, e: int) -> "FqElem":
        t = self.field.tables
        if e < 0:
            return FqElem(self.field, t.pow(t.inv(self.code), -e))
        return FqElem(self.field, t.pow(self.code, e))

    def __repr__(self):
        return f"FqElem({self.coeffs})"


# -- universal Witt polynomials ---------------------------------------------


def _padd(a: Poly, b: Poly, mod: int, scale: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = (out.get(e, 0) + scale * c) % mod
    return {e: c for e, c in out.items() if c}


def _pmul(a: Poly, b: Poly, mod: int) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % mod
    return {e: c for e, c in out.items() if c}


def _ppow(a: Poly, k: int, mod: int, nvars: int) -> Poly:
    result: Poly = {(0,) * nvars: 1 % mod}
    base = a
    while k:
        if k & 1:
            result = _pmul(result, base, mod)
        k >>= 1
        if k:
            base = _pmul(base, base, mod)
    return result


def _var(i: int, nvars: int, power: int = 1) -> Poly:
    e = [0] * nvars
    e[i] = power
    return {tuple(e): 1}


def ghost_poly(p: int, m: int, offset: int, nvars: int, mod: int) -> Poly:
    """w_m = sum_{i<=m} p^i z_i^{p^(m-i)} on variables z_i = offset + i."""
    out: Poly = {}
    for i in range(m + 1):
        out = _padd(out, _var(offset + i, nvars, p ** (m - i)), mod, p**i)
    return out


@lru_cache(maxsize=None)
def _universal(p: int, n: int) -> tuple[tuple[Poly, ...], tuple[Poly, ...]]:
    # Variables x_0..x_{n-1}, y_0..y_{n-1}.  Step m works modulo p^(m+1):
    # S_i == S_i mod p implies p^i S_i^(p^(m-i)) is correct mod p^(m+1).
    nv = 2 * n
    sums: list[Poly] = []
    prods: list[Poly] = []
    for m in range(n):
        mod = p ** (m + 1)
        gx = ghost_poly(p, m, 0, nv, mod)
        gy = ghost_poly(p, m, n, nv, mod)
        for target, polys in ((_padd(gx, gy, mod), sums), (_pmul(gx, gy, mod), prods)):
            rhs = target
            for i, prev in enumerate(polys):
                power = _ppow(prev, p ** (m - i), p ** (m + 1 - i), nv)
                rhs = _padd(rhs, power, mod, -(p**i))
            if any(c % p**m for c in rhs.values()):
                raise AssertionError("ghost recursion produced a non-integral polynomial")
            polys.append({e: (c // p**m) % p for e, c in rhs.items() if (c // p**m) % p})
    return tuple(sums), tuple(prods)


def universal_witt_polys(p: int, n: int, cap: int | None = None):
    """Universal sum and product polynomials S_0..S_{n-1}, P_0..P_{n-1} over F_p.

    Each polynomial is a dict mapping exponent tuples over the variables
    (x_0..x_{n-1}, y_0..y_{n-1}) to coefficients in 0..p-1.
    """
    cap = WITT_LENGTH_CAP if cap is None else cap
    if n > cap:
        raise PrecisionError(f"Witt length {n} exceeds cap {cap}")
    if n < 1:
        raise ShapeError("Witt length must be positive")
    sums, prods = _universal(p, n)
    return [dict(s) for s in sums], [dict(t) for t in prods]


def eval_int_poly(poly: Poly, values: Sequence[int]) -> int:
    total = 0
    for e, c in poly.items():
        term = c
        for v, k in zip(values, e):
            if k:
                term *= v**k
        total += term
    return total


def ghost_components(p: int, coords: Sequence[int]) -> list[int]:
    return [sum(p**i * coords[i] ** (p ** (m - i)) for i in range(m + 1)) for m in range(len(coords))]


# -- Witt vectors -----------------------------------------------------------


class _Compiled:
    """A polynomial compiled into log-domain terms for evaluation over F_q."""

    def __init__(self, poly: Poly, tables: _FieldTables):
        self.t = tables
        self.terms = []
        for e, c in sorted(poly.items()):
            factors = tuple((v, k) for v, k in enumerate(e) if k)
            self.terms.append((tables.log[c], factors))

    def __call__(self, coords: Sequence[int]) -> int:
        t = self.t
        log, exp, add, order = t.log, t.exp, t.add, t.order
        val = 0
        for lc, factors in self.terms:
            s = lc
            for v, k in factors:
                a = coords[v]
                if a == 0:
                    break
                s += log[a] * k
            else:
                val = add[val][exp[s % order]]
        return val


class WittRing:
    """Arithmetic context for W_n(F_q); obtain via :func:`witt_ring`."""

    def __init__(self, fd: FieldDesc, n: int):
        sums, prods = universal_witt_polys(fd.p, n)
        t = fd.tables
        self.field, self.n = fd, n
        self._sum = [_Compiled(s, t) for s in sums]
        self._prod = [_Compiled(s, t) for s in prods]
        self._add_cache: dict = {}
        self._mul_cache: dict = {}
        self.zero = WittVec(fd, n, (0,) * n)
        self.one = WittVec(fd, n, (1,) + (0,) * (n - 1))

    def add(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        key = (a, b)
        r = self._add_cache.get(key)
        if r is None:
            if not any(b):
                r = a
            elif not any(a):
                r = b
            else:
                c = a + b
                r = tuple(s(c) for s in self._sum)
            self._add_cache[key] = r
        return r

    def mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        key = (a, b)
        r = self._mul_cache.get(key)
        if r is None:
            if not any(a) or not any(b):
                r = (0,) * self.n
            else:
                c = a + b
                r = tuple(s(c) for s in self._prod)
            self._mul_cache[key] = r
        return r

    def from_int(self, k: int) -> "WittVec":
        """Image of the integer k under Z -> W_n(F_q)."""
        k %= self.field.p**self.n
        result, base = self.zero, self.one
        while k:
            if k & 1:
                result = result + base
            base = base + base
            k >>= 1
        return result

    @property
    def minus_one(self) -> "WittVec":
        return self.from_int(-1)

    def elements(self) -> Iterator["WittVec"]:
        for coords in itertools.product(range(self.field.q), repeat=self.n):
            yield WittVec(self.field, self.n, coords)


@lru_cache(maxsize=None)
def witt_ring(fd: FieldDesc, n: int) -> WittRing:
    return WittRing(fd, n)


@dataclass(frozen=True)
class WittVec:
    """An element of W_n(F_q): ``coords`` holds the n coordinate codes."""

    field: FieldDesc
    n: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.n:
            raise ShapeError(f"expected {self.n} coordinates, got {len(self.coords)}")

    @property
    def ring(self) -> WittRing:
        return witt_ring(self.field, self.n)

    @property
    def elements(self) -> list[FqElem]:
        return [FqElem(self.field, c) for c in self.coords]

    def _check(self, other: "WittVec"):
        if not isinstance(other, WittVec) or other.field != self.field or other.n != self.n:
            raise ShapeError("Witt vectors over different fields or lengths")

    def __add__(self, other: "WittVec") -> "WittVec":
        self._check(other)
        return WittVec(self.field, self.n, self.ring.add(self.coords, other.coords))

    def __mul__(self, other: "WittVec") -> "WittVec":
        self._check(other)
        return WittVec(self.field, self.n, self.ring.mul(self.coords, other.coords))

    def __neg__(self) -> "WittVec":
        return self.ring.minus_one * self

    def __sub__(self, other: "WittVec") -> "WittVec":
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def valuation(self) -> int:
        """p-adic valuation; n for the zero vector."""
        for k, c in enumerate(self.coords):
            if c:
                return k
        return self.n

    def truncate(self, m: int) -> "WittVec":
        return WittVec(self.field, m, self.coords[:m])

    def lift(self, n: int) -> "WittVec":
        """Zero-padded representative at length n >= self.n."""
        return WittVec(self.field, n, self.coords + (0,) * (n - self.n))

    def reduce_mod(self, m: int) -> "WittVec":
        """Canonical representative of the class modulo p^m, kept at length n."""
        if m >= self.n:
            return self
        return WittVec(self.field, self.n, self.coords[:m] + (0,) * (self.n - m))

    def to_json(self) -> dict:
        fd = self.field
        return {"p": fd.p, "f": fd.f, "n": self.n,
                "coords": [FqElem(fd, c).coeffs for c in self.coords]}

    def __repr__(self):
        return f"W{self.n}{tuple(FqElem(self.field, c).coeffs if self.field.f > 1 else c for c in self.coords)}"


def witt_from_json(data: dict) -> WittVec:
    fd = make_field(data["p"], data["f"])
    coords = tuple(FqElem.from_coeffs(fd, c).code for c in data["coords"])
    return WittVec(fd, data["n"], coords)


def witt_add(x: WittVec, y: WittVec) -> WittVec:
    return x + y


def witt_mul(x: WittVec, y: WittVec) -> WittVec:
    return x * y


def witt_neg(x: WittVec) -> WittVec:
    return -x


def witt_sigma(x: WittVec, s: int = 1) -> WittVec:
    """Witt Frobenius to the power s (negative s gives the inverse)."""
    fd = x.field
    s %= fd.f
    if s == 0:
        return x
    t = fd.tables
    e = fd.p**s
    return WittVec(fd, x.n, tuple(t.pow(c, e) for c in x.coords))


def witt_verschiebung(x: WittVec) -> WittVec:
    return WittVec(x.field, x.n, (0,) + x.coords[:-1])


def teichmuller(a: FqElem, n: int) -> WittVec:
    return WittVec(a.field, n, (a.code,) + (0,) * (n - 1))


def witt_p_mult(x: WittVec) -> WittVec:
    # p = V F over a perfect field of characteristic p
    return witt_verschiebung(witt_sigma(x))


def witt_p_power(x: WittVec, k: int) -> WittVec:
    for _ in range(k):
        x = witt_p_mult(x)
    return x


def witt_scalar(fd: FieldDesc, n: int, k: int) -> WittVec:
    return witt_ring(fd, n).from_int(k)
