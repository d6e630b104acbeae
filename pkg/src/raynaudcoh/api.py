"""Cohomology tables H^i(X, Z_p(r)) and H^i(X, Z/p^m(r)) for catalog varieties."""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from functools import lru_cache

from .complexes import RComplex, column, cone_mult
from .errors import InvariantViolation, OracleRefused
from .hom_solver import FinAbPGroup, brute_force_fiber, fiber_cohomology
from .varieties import VarietyDesc, model_rgamma, parse_variety

log = logging.getLogger(__name__)

FORMATS = ("text", "json", "csv")


@dataclass(frozen=True)
class CohomologyCell:
    variety: str
    i: int
    r: int
    n: int
    group: FinAbPGroup
    limit_label: str | None = None
    oracle: str | None = None

    def to_json(self) -> dict:
        return {"i": self.i, "r": self.r, "factors": list(self.group.factors),
                "limit": self.limit_label, "oracle": self.oracle}


@dataclass(frozen=True)
class TableRequest:
    variety: str = "p1"
    p: int = 2
    f: int = 1
    n: int = 3
    i_range: tuple = (0, 5)
    r_range: tuple = (0, 2)
    mod_pm: int | None = None
    format: str = "text"
    oracle: bool = False
    desc: VarietyDesc = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.mod_pm is not None and not 0 <= self.mod_pm:
            raise ValueError("mod-pm must be non-negative")
        # validates the prime, the degree and the variety string
        object.__setattr__(self, "desc", parse_variety(self.variety, self.p, self.f))
        _ = self.desc.field

    def cells(self) -> list:
        return [(i, r) for i in range(self.i_range[0], self.i_range[1] + 1)
                for r in range(self.r_range[0], self.r_range[1] + 1)]

    def to_json(self) -> dict:
        return {"variety": self.variety, "p": self.p, "f": self.f, "n": self.n,
                "i_min": self.i_range[0], "i_max": self.i_range[1],
                "r_min": self.r_range[0], "r_max": self.r_range[1],
                "mod_pm": self.mod_pm, "oracle": self.oracle}


def hom_unit_derived(C: RComplex, i: int, r: int) -> FinAbPGroup:
    """Hom(1, C(r)[i]) computed as H^(i-r) of the fiber of 1 - F on column r."""
    return fiber_cohomology(column(C, r), i - r)


@lru_cache(maxsize=None)
def _model(v: VarietyDesc, n: int) -> RComplex:
    return model_rgamma(v, n)


@lru_cache(maxsize=None)
def _cone(v: VarietyDesc, n: int, m: int) -> RComplex:
    return cone_mult(_model(v, n), m)


@lru_cache(maxsize=None)
def _zp_group(v: VarietyDesc, i: int, r: int, n: int) -> FinAbPGroup:
    return hom_unit_derived(_model(v, n), i, r)


def limit_label(current: FinAbPGroup, previous: FinAbPGroup, n: int) -> str:
    """Guess the projective limit from levels n and n - 1.

    Factors equal to the precision are read as copies of Z_p; the rest must
    agree exactly between the two levels to be called finite.
    """
    free = sum(1 for e in current.factors if e == n)
    free_prev = sum(1 for e in previous.factors if e == n - 1)
    finite = [e for e in current.factors if e < n]
    finite_prev = [e for e in previous.factors if e < n - 1]
    if free != free_prev or finite != finite_prev:
        return "unstable"
    zp = "Z_p" if free == 1 else f"Z_p^{free}"
    if free and finite:
        return f"{zp} + finite"
    return zp if free else "finite"


def zp_cohomology(v: VarietyDesc, i: int, r: int, n: int) -> CohomologyCell:
    g = _zp_group(v, i, r, n)
    label = limit_label(g, _zp_group(v, i, r, n - 1), n) if n > 1 else None
    return CohomologyCell(v.label, i, r, n, g, label)


def modpn_cohomology(v: VarietyDesc, i: int, r: int, m: int, n: int) -> FinAbPGroup:
    """H^i(X, Z/p^m(r)) through the cone of p^m on the level-n model."""
    return hom_unit_derived(_cone(v, n, m), i, r)


def modpn_order_prediction(v: VarietyDesc, i: int, r: int, m: int, n: int) -> int:
    """log_p of |H^i / p^m| * |H^(i+1)[p^m]| with torsion read from the finite part."""
    here = _zp_group(v, i, r, n)
    nxt = _zp_group(v, i + 1, r, n)
    finite_next = FinAbPGroup(nxt.p, tuple(e for e in nxt.factors if e < n))
    return here.quotient_by_p_power(m).log_order + finite_next.p_power_torsion(m).log_order


def _oracle_check(C: RComplex, i: int, r: int, group: FinAbPGroup) -> str:
    try:
        brute = brute_force_fiber(column(C, r), i - r)
    except OracleRefused:
        log.warning("oracle skipped for cell (i=%d, r=%d): too large to enumerate", i, r)
        return "skipped"
    if brute != group:
        raise InvariantViolation(f"oracle disagrees at (i={i}, r={r}): {brute} vs {group}")
    return "agree"


def run_table(req: TableRequest) -> list:
    v = req.desc
    out = []
    for i, r in req.cells():
        if req.mod_pm is None:
            cell = zp_cohomology(v, i, r, req.n)
            C = _model(v, req.n)
        else:
            C = _cone(v, req.n, req.mod_pm)
            cell = CohomologyCell(v.label, i, r, req.n, hom_unit_derived(C, i, r))
        if req.oracle:
            cell = CohomologyCell(cell.variety, i, r, cell.n, cell.group, cell.limit_label,
                                  _oracle_check(C, i, r, cell.group))
        out.append(cell)
    return sorted(out, key=lambda c: (c.i, c.r))


def format_table(req: TableRequest, cells: list, fmt: str | None = None) -> str:
    fmt = fmt or req.format
    if fmt == "json":
        doc = {"request": req.to_json(), "cells": [c.to_json() for c in cells]}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "r", "group", "factors", "limit", "oracle"])
        for c in cells:
            w.writerow([c.i, c.r, str(c.group), " ".join(map(str, c.group.factors)),
                        c.limit_label or "", c.oracle or ""])
        return buf.getvalue()
    coeff = "Z_p" if req.mod_pm is None else f"Z/{req.p}^{req.mod_pm}"
    lines = [f"# {req.variety} over F_{req.p ** req.f}, n={req.n}, coefficients {coeff}(r)"]
    header = ["i", "r", "H^i", "limit"] + (["oracle"] if req.oracle else [])
    rows = [header] + [[str(c.i), str(c.r), str(c.group), c.limit_label or "-"]
                       + ([c.oracle or "-"] if req.oracle else []) for c in cells]
    widths = [max(len(row[k]) for row in rows) for k in range(len(header))]
    for row in rows:
        lines.append("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"
