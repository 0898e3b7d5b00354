"""The diamond algorithm: fundamental set, map f, and the 40-cell partition.

Cells are described modulo the dihedral symmetry of the diamond. A point
``w`` lies in cell ``(g, k)`` when ``g^-1 w`` lies in the standard set
``W[k]`` inside the wedge ``0 <= arg < pi/4``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import (DIH4, ETA, ID, IOTA, RHO, S, T, T_INV, U, U_INV, DihedralElement,
                    MoebiusMap, RationalComplex, fold_to_wedge, moebius_apply, real_imag)
from .cf import _f_empty_step, f_empty, in_phi_diamond
from .compare import EqualityOptions, Verdict, region_equal
from .errors import OriginError, PoleError
from .regions import DEFAULT_EPS, Region, disk, disk_exterior, halfplane, im_ge

__all__ = ["PHI", "C_STAR", "W", "PartitionCell", "phi_contains", "f_diamond", "branch",
           "BRANCH_BY_CELL", "classify_cell", "cell_region", "PARTITION_ROWS",
           "verify_partition_lemma", "PartitionReport"]

_H = Fraction(1, 2)

PHI = Region.of(halfplane(1, 1, -1), halfplane(1, -1, -1), halfplane(-1, 1, -1),
                halfplane(-1, -1, -1), name="Phi")

_WEDGE = (im_ge(0), halfplane(-1, 1, 0))
C_STAR = Region.of(*_WEDGE, name="C*")

_UPPER = RationalComplex(_H, _H)    # centre of the circle through 0, 1, i, 1+i
_LOWER = RationalComplex(_H, -_H)   # centre of the circle through 0, 1, -i, 1-i

W = {
    1: Region.of(*_WEDGE, halfplane(-1, 1, 1), name="W1"),
    2: Region.of(*_WEDGE, halfplane(1, -1, -1), disk_exterior(_UPPER, _H), name="W2"),
    3: Region.of(*_WEDGE, halfplane(-1, -1, 1), disk(_UPPER, _H), name="W3"),
    4: Region.of(*_WEDGE, halfplane(1, 1, -1), disk_exterior(_LOWER, _H), name="W4"),
    5: Region.of(*_WEDGE, disk(_LOWER, _H), name="W5"),
}

# generator applied by f on each standard cell
BRANCH_BY_CELL: dict[int, MoebiusMap] = {1: T_INV, 2: T_INV, 3: T_INV, 4: S, 5: S}

# f(W_k) as a union of partition cells
PARTITION_ROWS: dict[int, tuple[tuple[DihedralElement, int], ...]] = {
    1: ((ID, 1), (ID, 2), (ID, 3), (ID, 4), (ID, 5)),
    2: ((RHO, 2), (RHO, 3), (RHO, 4)),
    3: ((RHO, 5), (IOTA, 5), (IOTA, 4)),
    4: ((ETA, 2),),
    5: ((ETA, 1),),
}


@dataclass(frozen=True)
class PartitionCell:
    g: DihedralElement
    k: int

    def to_json(self) -> dict:
        return {"dih": self.g.name, "k": self.k}

    def __str__(self):
        return f"{self.g.name} W{self.k}"


def cell_region(g: DihedralElement, k: int) -> Region:
    return W[k].transform(g).named(f"{g.name} W{k}")


def phi_contains(z, eps: float = 1e-12) -> bool:
    return in_phi_diamond(z, eps)


def branch(z) -> MoebiusMap:
    """Generator applied by f at ``z``: S on the diamond, otherwise a unit translation."""
    if phi_contains(z):
        return S
    step = _f_empty_step(z)
    return {(1, 0): T_INV, (0, 1): U_INV, (-1, 0): T, (0, -1): U}[(step.re, step.im)]


def f_diamond(z):
    if phi_contains(z):
        x, y = real_imag(z)
        if x == 0 and y == 0:
            raise PoleError("f is undefined at 0 (pole of S)")
        return moebius_apply(S, z)
    return f_empty(z)


def _in_standard(z, k: int, eps: float) -> bool:
    return W[k].contains(z, eps=eps)


def classify_cell(w, eps: float = DEFAULT_EPS) -> PartitionCell:
    """Cell of ``w``: fold into the wedge, then test W5, W4, W3, W2, W1 (first match wins)."""
    x, y = real_imag(w)
    if x == 0 and y == 0:
        raise OriginError("0 is not classified")
    g, rep = fold_to_wedge(w)
    for k in (5, 4, 3, 2, 1):
        if _in_standard(rep, k, eps):
            return PartitionCell(g, k)
    raise AssertionError(f"{w!r} fell through the partition")  # the W_k cover the wedge


def classify_cells(w: np.ndarray, eps: float = DEFAULT_EPS) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``classify_cell`` for float points: (dihedral index, k) arrays."""
    w = np.asarray(w, dtype=complex).ravel()
    gi = np.full(w.shape, -1, dtype=np.int8)
    rep = np.empty_like(w)
    for g in DIH4:
        inv = g.inverse()
        r = _dih_array(inv, w)
        hit = (gi < 0) & (r.imag >= 0) & (r.imag < r.real)
        gi[hit] = g.index
        rep[hit] = r[hit]
    for g in DIH4[4:]:
        r = _dih_array(g.inverse(), w)
        hit = (gi < 0) & (r.imag >= 0) & (r.imag <= r.real) & (r.real > 0)
        gi[hit] = g.index
        rep[hit] = r[hit]
    k = np.zeros(w.shape, dtype=np.int8)
    for kk in (5, 4, 3, 2, 1):
        hit = (k == 0) & (gi >= 0) & W[kk].contains_float(rep, eps)
        k[hit] = kk
    return gi, k


def _dih_array(g: DihedralElement, z: np.ndarray) -> np.ndarray:
    if g.conj:
        z = np.conj(z)
    return z * (1j ** g.e)


# ---------------------------------------------------------------------------
# the partition lemma


@dataclass
class PartitionReport:
    rows: dict[str, Verdict]
    elapsed_ms: float

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.rows.values())


def partition_row_regions(k: int) -> tuple[Region, Region]:
    """(f(W_k) computed by transforming W_k, the union of cells listed for row k)."""
    lhs = W[k].transform(BRANCH_BY_CELL[k])
    rhs = Region(())
    for g, j in PARTITION_ROWS[k]:
        rhs = rhs | cell_region(g, j)
    return lhs, rhs


def phi_from_cells() -> Region:
    out = Region(())
    for g in DIH4:
        out = out | cell_region(g, 4) | cell_region(g, 5)
    return out


def verify_partition_lemma(opts: EqualityOptions = EqualityOptions()) -> PartitionReport:
    t0 = time.perf_counter()
    rows = {}
    for k in range(1, 6):
        lhs, rhs = partition_row_regions(k)
        rows[f"f(W{k})"] = region_equal(lhs, rhs, opts)
    rows["Phi"] = region_equal(PHI, phi_from_cells(), opts)
    return PartitionReport(rows, (time.perf_counter() - t0) * 1e3)

