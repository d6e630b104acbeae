"""Coordinates of W_n(F_q) over Z/p^n.

W_n(F_q) is the Galois ring (Z/p^n)[t]/(g) where g is the lift of the
defining polynomial whose roots are Teichmueller representatives.  In these
coordinates the Teichmueller basis [1], [t], ..., [t^(f-1)] is the power
basis, and sigma acts by t -> t^p.  Elements are tuples of f integers.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .witt import FieldDesc, FqElem, WittVec

Elem = tuple  # f integers modulo p^n


def _polymul_mod(a: Sequence[int], b: Sequence[int], g: Sequence[int], mod: int) -> list[int]:
    f = len(g) - 1
    prod = [0] * (2 * f - 1 if f else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k] % mod
        if c:
            for t in range(f + 1):
                prod[k - f + t] -= c * g[t]
    return [x % mod for x in prod[:f]]


class GaloisRing:
    """The chain ring W_n(F_q) in Teichmueller power-basis coordinates."""

    def __init__(self, fd: FieldDesc, n: int):
        self.field, self.n, self.p, self.f = fd, n, fd.p, fd.f
        self.mod = fd.p**n
        self.modulus = self._teichmuller_modulus()
        self.zero = (0,) * self.f
        self.one = (1,) + (0,) * (self.f - 1)
        self._sigma_basis: dict[int, list[Elem]] = {}
        self._unit_order = (fd.q - 1) * fd.q ** (n - 1)

    # The defining polynomial g = prod_i (X - tau^(p^i)) where tau is the
    # Teichmueller lift of t computed in (Z/p^n)[T]/(h) for the integer lift h.
    def _teichmuller_modulus(self) -> tuple[int, ...]:
        fd, mod, f = self.field, self.mod, self.f
        h = list(fd.modulus)
        if self.n == 1 or f == 1:
            return tuple(h)
        T = [0, 1] + [0] * (f - 2)
        tau = self._pow_in(h, T, fd.q ** (self.n - 1), mod)
        # polynomial in X with coefficients in A = (Z/p^n)[T]/(h), constant term first
        poly = [[1] + [0] * (f - 1)]
        conj = tau
        for _ in range(f):
            neg = [(-c) % mod for c in conj]
            new = [[0] * f for _ in range(len(poly) + 1)]
            for k, c in enumerate(poly):
                new[k + 1] = [(x + y) % mod for x, y in zip(new[k + 1], c)]
                prod = _polymul_mod(c, neg, h, mod)
                new[k] = [(x + y) % mod for x, y in zip(new[k], prod)]
            poly = new
            conj = self._pow_in(h, conj, self.p, mod)
        if any(any(c[1:]) for c in poly):
            raise AssertionError("Teichmueller modulus has non-scalar coefficients")
        return tuple(c[0] for c in poly)

    @staticmethod
    def _pow_in(g, a, e, mod):
        f = len(g) - 1
        result = [1] + [0] * (f - 1)
        base = list(a) + [0] * (f - len(a))
        while e:
            if e & 1:
                result = _polymul_mod(result, base, g, mod)
            e >>= 1
            if e:
                base = _polymul_mod(base, base, g, mod)
        return result

    # -- chain-ring interface ------------------------------------------------

    def add(self, a: Elem, b: Elem) -> Elem:
        m = self.mod
        return tuple((x + y) % m for x, y in zip(a, b))

    def sub(self, a: Elem, b: Elem) -> Elem:
        m = self.mod
        return tuple((x - y) % m for x, y in zip(a, b))

    def neg(self, a: Elem) -> Elem:
        m = self.mod
        return tuple((-x) % m for x in a)

    def mul(self, a: Elem, b: Elem) -> Elem:
        if not any(a) or not any(b):
            return self.zero
        if self.f == 1:
            return ((a[0] * b[0]) % self.mod,)
        return tuple(_polymul_mod(a, b, self.modulus, self.mod))

    def scale(self, k: int, a: Elem) -> Elem:
        m = self.mod
        return tuple((k * x) % m for x in a)

    def from_int(self, k: int) -> Elem:
        return ((k % self.mod),) + (0,) * (self.f - 1)

    def is_zero(self, a: Elem) -> bool:
        return not any(a)

    def val(self, a: Elem) -> int:
        v = self.n
        p = self.p
        for x in a:
            if x:
                k = 0
                while x % p == 0:
                    x //= p
                    k += 1
                v = min(v, k)
        return v

    def reduce(self, a: Elem, m: int) -> Elem:
        pm = self.p**m
        return tuple(x % pm for x in a)

    def div_pk(self, a: Elem, k: int) -> Elem:
        pk = self.p**k
        return tuple(x // pk for x in a)

    def pow(self, a: Elem, e: int) -> Elem:
        result, base = self.one, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def unit_inv(self, a: Elem) -> Elem:
        if self.val(a) != 0:
            raise ZeroDivisionError("not a unit")
        return self.pow(a, self._unit_order - 1)

    # -- Frobenius and Witt coordinates --------------------------------------

    def sigma(self, a: Elem, s: int = 1) -> Elem:
        s %= self.f
        if s == 0 or not any(a):
            return a
        basis = self._sigma_basis.get(s)
        if basis is None:
            t = (0, 1) + (0,) * (self.f - 2)
            tp = self.pow(t, self.p**s)
            basis = [self.pow(tp, k) for k in range(self.f)]
            self._sigma_basis[s] = basis
        out = self.zero
        for c, b in zip(a, basis):
            if c:
                out = self.add(out, self.scale(c, b))
        return out

    def teichmuller(self, code: int) -> Elem:
        if code == 0:
            return self.zero
        digits = FqElem(self.field, code).coeffs
        return self.pow(tuple(digits), self.field.q ** (self.n - 1))

    def from_witt(self, x: WittVec) -> Elem:
        """x = sum_i p^i [x_i^(p^-i)], reduced modulo p^len(x)."""
        t = self.field.tables
        f = self.f
        out = self.zero
        for i, c in enumerate(x.coords[: self.n]):
            if c:
                root = t.pow(c, self.p ** ((-i) % f)) if f > 1 else c
                out = self.add(out, self.scale(self.p**i, self.teichmuller(root)))
        return self.reduce(out, min(x.n, self.n))

    def to_witt(self, a: Elem, m: int | None = None) -> WittVec:
        """Inverse of :meth:`from_witt`, returning a Witt vector of length m."""
        m = self.n if m is None else m
        t = self.field.tables
        p, f = self.p, self.f
        FqElem_from = FqElem.from_coeffs
        rest = self.reduce(a, m)
        coords = []
        for i in range(m):
            digit = FqElem_from(self.field, [c % p for c in rest]).code
            coords.append(t.pow(digit, p**i) if f > 1 and digit else digit)
            rest = self.sub(rest, self.teichmuller(digit))
            rest = self.div_pk(rest, 1)
        return WittVec(self.field, m, tuple(coords))


@lru_cache(maxsize=None)
def galois_ring(fd: FieldDesc, n: int) -> GaloisRing:
    return GaloisRing(fd, n)


class IntegersModPn:
    """Z/p^n with the same chain-ring interface as :class:`GaloisRing`."""

    def __init__(self, p: int, n: int):
        self.p, self.n, self.mod = p, n, p**n
        self.zero, self.one = 0, 1 % self.mod

    def add(self, a, b):
        return (a + b) % self.mod

    def sub(self, a, b):
        return (a - b) % self.mod

    def neg(self, a):
        return (-a) % self.mod

    def mul(self, a, b):
        return (a * b) % self.mod

    def from_int(self, k):
        return k % self.mod

    def is_zero(self, a):
        return a % self.mod == 0

    def val(self, a):
        a %= self.mod
        if a == 0:
            return self.n
        k = 0
        while a % self.p == 0:
            a //= self.p
            k += 1
        return k

    def div_pk(self, a, k):
        return (a % self.mod) // self.p**k

    def reduce(self, a, m):
        return a % self.p**m

    def unit_inv(self, a):
        return pow(a, -1, self.mod)


@lru_cache(maxsize=None)
def integers_mod(p: int, n: int) -> IntegersModPn:
    return IntegersModPn(p, n)
