"""Exact region algebra over circlines with Gaussian-rational coefficients.

A circline is the zero set of the real form

    Q(z) = A |z|^2 + 2 Re(conj(B) z) + C,     A, C rational, B in Q(i),

stored in a normal form with coprime integer coefficients whose first
nonzero entry of (A, Re B, Im B, C) is positive, so equal circlines compare
equal syntactically. A half-space is one side (Q <= 0 or Q >= 0) of a
circline, a cell is an intersection of half-spaces and a region a finite
union of cells. All sets are treated as closed.

Images under Moebius maps use the Hermitian matrix H = [[A, B], [conj B, C]]:
if w = M z then Q(z) = |cz + d|^2 Q'(w) with H' = adj(M)^* H adj(M), so the
pushforward keeps the sign of the form and no side bookkeeping beyond the
normalization sign is required.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .arith import (DihedralElement, GaussianInt, MoebiusMap, RationalComplex, is_exact,
                    real_imag)
from .errors import BoundaryAmbiguous, EmptyRegionInBox

__all__ = [
    "Circline", "HalfSpace", "Cell", "Region", "ExactPoints", "EMPTY", "PLANE",
    "disk", "disk_exterior", "halfplane", "re_le", "re_ge", "im_le", "im_ge",
    "halfspace_contains", "circline_moebius_image", "halfspace_moebius_image",
    "region_transform", "region_union", "region_intersect", "region_sample",
    "DEFAULT_EPS",
]

DEFAULT_EPS = 1e-9


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass(frozen=True, order=True)
class Circline:
    A: int
    Bre: int
    Bim: int
    C: int

    @staticmethod
    def from_form(A, B, C) -> tuple["Circline", int]:
        """Normalize A|z|^2 + 2Re(conj(B) z) + C; also return the sign of the rescaling.

        The normalized form equals ``sign * k * original`` for some k > 0.
        """
        bre, bim = real_imag(B)
        coeffs = [Fraction(A), Fraction(bre), Fraction(bim), Fraction(C)]
        if all(c == 0 for c in coeffs):
            raise ValueError("degenerate circline: all coefficients vanish")
        den = 1
        for c in coeffs:
            den = _lcm(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        ints = [v // g for v in ints]
        lead = next(v for v in ints if v != 0)
        sign = 1 if lead > 0 else -1
        if sign < 0:
            ints = [-v for v in ints]
        return Circline(*ints), sign

    @property
    def B(self) -> RationalComplex:
        return RationalComplex(self.Bre, self.Bim)

    def is_line(self) -> bool:
        return self.A == 0

    def center(self) -> RationalComplex:
        if self.A == 0:
            raise ValueError("a line has no center")
        return RationalComplex(Fraction(-self.Bre, self.A), Fraction(-self.Bim, self.A))

    def radius_squared(self) -> Fraction:
        if self.A == 0:
            raise ValueError("a line has no radius")
        return Fraction(self.Bre ** 2 + self.Bim ** 2 - self.A * self.C, self.A ** 2)

    def value(self, z):
        """Q(z): exact for exact input, float otherwise."""
        x, y = real_imag(z)
        if is_exact(z):
            x, y = Fraction(x), Fraction(y)
        else:
            x, y = float(x), float(y)
        return self.A * (x * x + y * y) + 2 * (self.Bre * x + self.Bim * y) + self.C

    def signed_distance(self, z: complex) -> float:
        """Euclidean signed distance to the curve, with the sign of Q."""
        x, y = real_imag(z)
        x, y = float(x), float(y)
        if self.A == 0:
            return (2 * (self.Bre * x + self.Bim * y) + self.C) / (2 * math.hypot(self.Bre, self.Bim))
        cx, cy = -self.Bre / self.A, -self.Bim / self.A
        r2 = float(self.radius_squared())
        d = math.hypot(x - cx, y - cy)
        s = 1.0 if self.A > 0 else -1.0
        if r2 <= 0:
            return s * d
        return s * (d - math.sqrt(r2))

    def signed_distance_array(self, z: np.ndarray) -> np.ndarray:
        x, y = z.real, z.imag
        if self.A == 0:
            return (2 * (self.Bre * x + self.Bim * y) + self.C) / (2 * math.hypot(self.Bre, self.Bim))
        cx, cy = -self.Bre / self.A, -self.Bim / self.A
        r2 = float(self.radius_squared())
        d = np.hypot(x - cx, y - cy)
        s = 1.0 if self.A > 0 else -1.0
        return s * (d - math.sqrt(max(r2, 0.0)))

    def moebius_image(self, m: MoebiusMap) -> tuple["Circline", int]:
        """Normalized image under ``m`` and the sign relating old and new forms."""
        n11, n12, n21, n22 = m.d, -m.b, -m.c, m.a   # adj(M)
        B = GaussianInt(self.Bre, self.Bim)
        A, C = self.A, self.C

        def hre(u: GaussianInt, v: GaussianInt) -> int:
            # 2 Re(B v conj(u))
            return 2 * (B * v * u.conjugate()).re

        a_new = A * n11.norm() + hre(n11, n21) + C * n21.norm()
        c_new = A * n12.norm() + hre(n12, n22) + C * n22.norm()
        b_new = (n11.conjugate() * (n12 * A + B * n22)
                 + n21.conjugate() * (B.conjugate() * n12 + n22 * C))
        return Circline.from_form(a_new, b_new, c_new)

    def dih_image(self, g: DihedralElement) -> tuple["Circline", int]:
        B = GaussianInt(self.Bre, self.Bim)
        if g.conj:
            B = B.conjugate()
        B = B * GaussianInt(*((1, 0), (0, 1), (-1, 0), (0, -1))[g.e])
        return Circline.from_form(self.A, B, self.C)

    def describe(self) -> str:
        if self.A == 0:
            parts = []
            for coef, name in ((2 * self.Bre, "x"), (2 * self.Bim, "y")):
                if coef:
                    parts.append(f"{coef}{name}" if coef not in (1, -1) else ("-" if coef < 0 else "") + name)
            lhs = " + ".join(parts).replace("+ -", "- ")
            return f"{lhs} = {-self.C}"
        c = self.center()
        return f"|z - ({c})|^2 = {self.radius_squared()}"

    def to_json(self) -> dict:
        return {"A": str(self.A), "B_re": str(self.Bre), "B_im": str(self.Bim), "C": str(self.C)}


@dataclass(frozen=True, order=True)
class HalfSpace:
    """One closed side of a circline: ``side = -1`` is Q <= 0, ``side = +1`` is Q >= 0."""

    boundary: Circline
    side: int

    @staticmethod
    def from_form(A, B, C, side: int) -> "HalfSpace":
        c, sign = Circline.from_form(A, B, C)
        return HalfSpace(c, side * sign)

    def contains(self, z, eps: float = DEFAULT_EPS, strict: bool = False) -> bool:
        return halfspace_contains(self, z, eps=eps, strict=strict)

    def moebius_image(self, m: MoebiusMap) -> "HalfSpace":
        c, sign = self.boundary.moebius_image(m)
        return HalfSpace(c, self.side * sign)

    def dih_image(self, g: DihedralElement) -> "HalfSpace":
        c, sign = self.boundary.dih_image(g)
        return HalfSpace(c, self.side * sign)

    def transform(self, m) -> "HalfSpace":
        if isinstance(m, DihedralElement):
            return self.dih_image(m)
        return self.moebius_image(m)

    def complement(self) -> "HalfSpace":
        return HalfSpace(self.boundary, -self.side)

    # shape queries used by the trapping-region construction
    def is_disk(self) -> bool:
        b = self.boundary
        return b.A != 0 and b.radius_squared() > 0 and self.side * b.A < 0

    def is_disk_exterior(self) -> bool:
        b = self.boundary
        return b.A != 0 and b.radius_squared() > 0 and self.side * b.A > 0

    def is_halfplane(self) -> bool:
        return self.boundary.A == 0

    def describe(self) -> str:
        b = self.boundary
        if b.A == 0:
            le = self.side < 0
            if b.Bim == 0 or b.Bre == 0:
                coef, var = (b.Bre, "Re z") if b.Bim == 0 else (b.Bim, "Im z")
                if coef < 0:
                    le = not le
                return f"{var} {'<=' if le else '>='} {Fraction(-b.C, 2 * coef)}"
            return b.describe().replace(" = ", f" {'<=' if le else '>='} ")
        c, r2 = b.center(), b.radius_squared()
        inside = self.is_disk()
        return f"|z - ({c})|^2 {'<=' if inside else '>='} {r2}"

    def __str__(self):
        return self.describe()

    def to_json(self) -> dict:
        d = self.boundary.to_json()
        d["side"] = "<=" if self.side < 0 else ">="
        return d

    @staticmethod
    def from_json(d: dict) -> "HalfSpace":
        side = -1 if d["side"] == "<=" else 1
        B = RationalComplex(Fraction(d["B_re"]), Fraction(d["B_im"]))
        return HalfSpace.from_form(Fraction(d["A"]), B, Fraction(d["C"]), side)


@dataclass(frozen=True)
class Cell:
    constraints: tuple[HalfSpace, ...] = ()

    def __post_init__(self):
        # canonical: sorted, deduplicated
        object.__setattr__(self, "constraints", tuple(sorted(set(self.constraints))))

    def contains(self, z, eps: float = DEFAULT_EPS) -> bool:
        return all(halfspace_contains(h, z, eps=eps) for h in self.constraints)

    def transform(self, m) -> "Cell":
        return Cell(tuple(h.transform(m) for h in self.constraints))

    def is_degenerate(self) -> bool:
        """True when two constraints are opposite sides of one circline (interior empty)."""
        seen = {}
        for h in self.constraints:
            if seen.get(h.boundary, h.side) != h.side:
                return True
            seen[h.boundary] = h.side
        return False

    def __str__(self):
        return " and ".join(map(str, self.constraints)) or "C"


@dataclass(frozen=True)
class Region:
    """Finite union of cells. ``Region(())`` is empty; ``Region((Cell(),))`` is the plane."""

    cells: tuple[Cell, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        cells = []
        for c in self.cells:
            if not isinstance(c, Cell):
                c = Cell(tuple(c))
            if not c.is_degenerate() and c not in cells:
                cells.append(c)
        object.__setattr__(self, "cells", tuple(cells))

    @staticmethod
    def of(*constraints: HalfSpace, name: str = "") -> "Region":
        return Region((Cell(tuple(constraints)),), name=name)

    def named(self, name: str) -> "Region":
        return Region(self.cells, name=name)

    def is_empty_syntactically(self) -> bool:
        return not self.cells

    def circlines(self) -> list[Circline]:
        out = {h.boundary for c in self.cells for h in c.constraints}
        return sorted(out)

    def halfspaces(self) -> list[HalfSpace]:
        return sorted({h for c in self.cells for h in c.constraints})

    def contains(self, z, eps: float = DEFAULT_EPS) -> bool:
        return any(c.contains(z, eps=eps) for c in self.cells)

    def __contains__(self, z):
        return self.contains(z)

    def union(self, other: "Region") -> "Region":
        return region_union(self, other)

    def intersect(self, other: "Region") -> "Region":
        return region_intersect(self, other)

    __or__ = union
    __and__ = intersect

    def transform(self, m) -> "Region":
        return region_transform(self, m)

    # -- batch membership ------------------------------------------------
    def sign_table(self, pts: "ExactPoints") -> dict:
        return {c: pts.signs(c) for c in self.circlines()}

    def contains_exact(self, pts: "ExactPoints", table: dict | None = None) -> np.ndarray:
        """Closed membership of exact points, vectorized."""
        if table is None:
            table = self.sign_table(pts)
        out = np.zeros(len(pts), dtype=bool)
        for cell in self.cells:
            m = np.ones(len(pts), dtype=bool)
            for h in cell.constraints:
                m &= (h.side * table[h.boundary]) >= 0
            out |= m
        return out

    def classify_float(self, z: np.ndarray, eps: float = DEFAULT_EPS,
                       table: dict | None = None) -> np.ndarray:
        """Tri-state membership of float points: +1 inside by more than eps, -1 outside, 0 ambiguous."""
        z = np.asarray(z, dtype=complex)
        if table is None:
            table = {c: c.signed_distance_array(z) for c in self.circlines()}
        out = np.full(z.shape, -1, dtype=np.int8)
        for cell in self.cells:
            m = np.ones(z.shape, dtype=np.int8)
            for h in cell.constraints:
                t = h.side * table[h.boundary]
                tri = np.where(t > eps, 1, np.where(t < -eps, -1, 0)).astype(np.int8)
                m = np.minimum(m, tri)
            out = np.maximum(out, m)
        return out

    def contains_float(self, z: np.ndarray, eps: float = DEFAULT_EPS) -> np.ndarray:
        return self.classify_float(z, eps) >= 0

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        d = {"cells": [[h.to_json() for h in c.constraints] for c in self.cells]}
        if self.name:
            d["name"] = self.name
        return d

    @staticmethod
    def from_json(d: dict) -> "Region":
        return Region(tuple(Cell(tuple(HalfSpace.from_json(h) for h in c)) for c in d["cells"]),
                      name=d.get("name", ""))

    def __str__(self):
        if not self.cells:
            return "{}"
        return " | ".join(f"({c})" for c in self.cells)


EMPTY = Region((), name="empty")
PLANE = Region((Cell(()),), name="plane")


# ---------------------------------------------------------------------------
# constructors


def disk(center, r2=1) -> HalfSpace:
    """Closed disk |z - center|^2 <= r2."""
    c = RationalComplex.from_complex(center) if not is_exact(center) else RationalComplex(*real_imag(center))
    return HalfSpace.from_form(1, -c, c.norm() - Fraction(r2), -1)


def disk_exterior(center, r2=1) -> HalfSpace:
    return disk(center, r2).complement()


def halfplane(a, b, c) -> HalfSpace:
    """a x + b y + c <= 0."""
    return HalfSpace.from_form(0, RationalComplex(Fraction(a) / 2, Fraction(b) / 2), c, -1)


def re_le(t) -> HalfSpace:
    return halfplane(1, 0, -Fraction(t))


def re_ge(t) -> HalfSpace:
    return halfplane(-1, 0, Fraction(t))


def im_le(t) -> HalfSpace:
    return halfplane(0, 1, -Fraction(t))


def im_ge(t) -> HalfSpace:
    return halfplane(0, -1, Fraction(t))


# ---------------------------------------------------------------------------
# exact point batches


@dataclass
class ExactPoints:
    """Rational points (P + iQ) / D with integer arrays and D > 0."""

    P: np.ndarray
    Q: np.ndarray
    D: np.ndarray

    def __len__(self):
        return len(self.P)

    @staticmethod
    def from_rationals(points: Iterable) -> "ExactPoints":
        P, Q, D = [], [], []
        for z in points:
            x, y = real_imag(z)
            x, y = Fraction(x), Fraction(y)
            d = _lcm(x.denominator, y.denominator)
            P.append(x.numerator * (d // x.denominator))
            Q.append(y.numerator * (d // y.denominator))
            D.append(d)
        return ExactPoints(*(_int_array(v) for v in (P, Q, D)))

    @staticmethod
    def from_floats(z: np.ndarray) -> "ExactPoints":
        """Exact dyadic values of float points."""
        z = np.asarray(z, dtype=complex).ravel()
        return ExactPoints.from_rationals(RationalComplex(Fraction(float(v.real)), Fraction(float(v.imag)))
                                         for v in z)

    @staticmethod
    def grid(P: np.ndarray, Q: np.ndarray, D: int) -> "ExactPoints":
        P = np.asarray(P).ravel()
        Q = np.asarray(Q).ravel()
        return ExactPoints(P, Q, np.full(P.shape, D, dtype=P.dtype))

    def point(self, i: int) -> RationalComplex:
        d = int(self.D[i])
        return RationalComplex(Fraction(int(self.P[i]), d), Fraction(int(self.Q[i]), d))

    def to_complex(self) -> np.ndarray:
        return np.array([complex(self.point(i)) for i in range(len(self))]) if self.P.dtype == object \
            else (self.P / self.D + 1j * (self.Q / self.D))

    def take(self, mask) -> "ExactPoints":
        return ExactPoints(self.P[mask], self.Q[mask], self.D[mask])

    def concat(self, other: "ExactPoints") -> "ExactPoints":
        if self.P.dtype != other.P.dtype:
            a, b = self.as_object(), other.as_object()
        else:
            a, b = self, other
        return ExactPoints(np.concatenate([a.P, b.P]), np.concatenate([a.Q, b.Q]),
                           np.concatenate([a.D, b.D]))

    def as_object(self) -> "ExactPoints":
        if self.P.dtype == object:
            return self
        return ExactPoints(*(np.array([int(v) for v in a], dtype=object) for a in (self.P, self.Q, self.D)))

    def _bound(self) -> int:
        if len(self) == 0:
            return 0
        m = max(int(np.max(np.abs(self.P))), int(np.max(np.abs(self.Q))))
        d = int(np.max(self.D))
        return max(m, d)

    def signs(self, c: Circline) -> np.ndarray:
        """sign(Q(z)) for every point, computed exactly."""
        if len(self) == 0:
            return np.zeros(0, dtype=np.int8)
        P, Q, D = self.P, self.Q, self.D
        bound = self._bound()
        coef = max(abs(c.A), abs(c.Bre), abs(c.Bim), abs(c.C), 1)
        if self.P.dtype != object and 8 * coef * bound * bound >= 2 ** 62:
            P, Q, D = self.as_object().P, self.as_object().Q, self.as_object().D
        val = c.A * (P * P + Q * Q) + 2 * (c.Bre * P + c.Bim * Q) * D + c.C * D * D
        if val.dtype == object:
            return np.array([(v > 0) - (v < 0) for v in val], dtype=np.int8)
        return np.sign(val).astype(np.int8)

    def transform_dih(self, g: DihedralElement) -> "ExactPoints":
        P, Q = self.P, self.Q
        if g.conj:
            Q = -Q
        e = g.e
        if e == 1:
            P, Q = -Q, P
        elif e == 2:
            P, Q = -P, -Q
        elif e == 3:
            P, Q = Q, -P
        return ExactPoints(P, Q, self.D)


def _int_array(values) -> np.ndarray:
    big = any(abs(v) >= 2 ** 62 for v in values)
    if big:
        return np.array(values, dtype=object)
    return np.array(values, dtype=np.int64)


# ---------------------------------------------------------------------------
# operations


def halfspace_contains(h: HalfSpace, z, eps: float = DEFAULT_EPS, strict: bool = False) -> bool:
    """Closed membership; exact for exact points, eps-tolerant for floats.

    With ``strict=True`` a float point within ``eps`` of the boundary raises
    ``BoundaryAmbiguous`` instead of being counted as inside.
    """
    if is_exact(z):
        v = h.boundary.value(z)
        return h.side * v >= 0
    t = h.side * h.boundary.signed_distance(z)
    if strict and abs(t) <= eps:
        raise BoundaryAmbiguous(f"{z} is within {eps} of {h.boundary.describe()}")
    return t >= -eps


def circline_moebius_image(c: Circline, m: MoebiusMap) -> Circline:
    return c.moebius_image(m)[0]


def halfspace_moebius_image(h: HalfSpace, m: MoebiusMap) -> HalfSpace:
    return h.moebius_image(m)


def region_transform(r: Region, m) -> Region:
    """Image of ``r`` under a Moebius map or a Dih4 element, cell by cell."""
    name = f"{getattr(m, 'name', '')}({r.name})" if r.name else ""
    return Region(tuple(c.transform(m) for c in r.cells), name=name)


def region_union(r1: Region, r2: Region) -> Region:
    return Region(r1.cells + r2.cells)


def region_intersect(r1: Region, r2: Region) -> Region:
    return Region(tuple(Cell(c1.constraints + c2.constraints) for c1 in r1.cells for c2 in r2.cells))


def region_sample(r: Region, box: Sequence[float], n: int, seed: int,
                  eps: float = DEFAULT_EPS, max_batches: int = 200) -> np.ndarray:
    """``n`` deterministic quasi-uniform points of ``r`` inside ``box``.

    Candidates come from a scrambled Halton sequence seeded by ``seed``; a
    candidate is kept when it is inside ``r`` by more than ``eps`` from every
    boundary. At most ``max_batches`` batches of ``max(4n, 1024)`` candidates
    are drawn before ``EmptyRegionInBox`` is raised.
    """
    from scipy.stats import qmc

    if n < 1:
        raise ValueError("n must be >= 1")
    if not r.cells:
        raise EmptyRegionInBox(f"{r.name or 'region'} is empty")
    x0, x1, y0, y1 = (float(v) for v in box)
    sampler = qmc.Halton(d=2, scramble=True, seed=seed)
    batch = max(4 * n, 1024)
    found: list[np.ndarray] = []
    count = 0
    for _ in range(max_batches):
        u = sampler.random(batch)
        z = (x0 + (x1 - x0) * u[:, 0]) + 1j * (y0 + (y1 - y0) * u[:, 1])
        keep = z[r.classify_float(z, eps) == 1]
        found.append(keep)
        count += len(keep)
        if count >= n:
            break
    if count < n:
        raise EmptyRegionInBox(f"found {count} of {n} interior points of {r.name or 'region'} in {box}")
    return np.concatenate(found)[:n]
