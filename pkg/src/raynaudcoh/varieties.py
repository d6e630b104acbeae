"""Catalog varieties whose de Rham-Witt cohomology splits into twists of the unit."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .complexes import RComplex, cohomology_Hj, realize_dsum
from .errors import UnsupportedVariety
from .raynaud import DSumModel, GradedRModule
from .witt import FieldDesc, make_field


@dataclass(frozen=True)
class VarietyDesc:
    kind: str  # "point" or "projective_space"
    N: int = 0
    p: int = 2
    f: int = 1

    def __post_init__(self):
        if self.kind not in ("point", "projective_space"):
            raise UnsupportedVariety(f"unknown variety kind {self.kind!r}")
        if self.N < 0:
            raise UnsupportedVariety("dimension must be non-negative")
        if self.kind == "point" and self.N != 0:
            raise UnsupportedVariety("a point has dimension 0")

    @property
    def field(self) -> FieldDesc:
        return make_field(self.p, self.f)

    @property
    def dimension(self) -> int:
        return self.N

    @property
    def label(self) -> str:
        if self.kind == "point":
            return "point"
        return "p1" if self.N == 1 else f"pN:{self.N}"


_PN = re.compile(r"pN:(\d+)$")


def parse_variety(text: str, p: int = 2, f: int = 1) -> VarietyDesc:
    """Parse "point", "p1" or "pN:<N>"."""
    s = text.strip()
    if s == "point":
        return VarietyDesc("point", 0, p, f)
    if s == "p1":
        return VarietyDesc("projective_space", 1, p, f)
    m = _PN.match(s)
    if m:
        return VarietyDesc("projective_space", int(m.group(1)), p, f)
    raise UnsupportedVariety(f"unknown variety {text!r}")


def dsum_model(v: VarietyDesc) -> DSumModel:
    # P^N is the sum over j of T^-j(1)[-j]: W at (R-degree j, complex degree j)
    if v.kind == "point":
        return DSumModel.of([(0, 0)])
    return DSumModel.of([(j, j) for j in range(v.N + 1)])


def model_rgamma(v: VarietyDesc, n: int) -> RComplex:
    if n < 1:
        raise ValueError("precision must be at least 1")
    return realize_dsum(dsum_model(v), v.field, n)


def hodge_witt_table(v: VarietyDesc, n: int) -> dict[tuple[int, int], GradedRModule]:
    """(i, j) -> H^j(X, W_n Omega^i) as a one-component module with F, V."""
    C = model_rgamma(v, n)
    out = {}
    for j in C.complex_degrees():
        H = cohomology_Hj(C, j)
        for i in H.degrees():
            out[(i, j)] = GradedRModule.create(
                H.field, H.n, {i: H.component(i)}, {i: H.F[i]}, {i: H.V[i]})
    return dict(sorted(out.items()))


def euler_characteristic(v: VarietyDesc, n: int) -> int:
    """sum (-1)^(i+j) of the W_n-ranks of the Hodge-Witt groups."""
    total = 0
    for (i, j), M in hodge_witt_table(v, n).items():
        rank = sum(1 for e in M.component(i) if e == n)
        total += (-1) ** (i + j) * rank
    return total
