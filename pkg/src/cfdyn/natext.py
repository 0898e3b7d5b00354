"""The natural extension F(z, w) of the diamond map and its invariant sets.

F moves both coordinates by the generator that the diamond map applies to
``w``. Sets with finite product structure are stored modulo the dihedral
symmetry: a ``ProductSet`` holds one z-region per standard cell ``W[k]`` and
stands for the union of ``g(part_k x W_k)`` over all eight symmetries ``g``.
Since every branch of F conjugates each symmetry to another symmetry, F maps
such symmetric unions to symmetric unions, and the image of
``part_k x W_k`` is the union of ``xi^-1 h_k part_k x W_j`` over the entries
``xi W_j`` of ``f(W_k)``.
"""
from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import (DIH4, ID, S, T, T_INV, U, U_INV, DihedralElement, GaussianInt, MoebiusMap,
                    RationalComplex, is_exact, moebius_apply, real_imag)
from .compare import (ARRANGEMENT_ONLY, EqualityOptions, Verdict, region_contains,
                      region_equal)
from .diamond import BRANCH_BY_CELL, PARTITION_ROWS, W, branch, phi_contains
from .errors import BudgetExhausted, DiagonalError, NoStabilization, PoleError
from .regions import (DEFAULT_EPS, EMPTY, Cell, ExactPoints, Region, disk, disk_exterior,
                      im_ge, im_le, re_le)

__all__ = [
    "Z", "A", "ProductSet", "D", "V", "F_diamond", "F_array", "D_contains", "V_contains",
    "hatZ_pieces", "hatZ_compute", "verify_bijectivity", "BijectivityReport", "orbit_until_V",
    "OrbitResult", "build_psi", "PsiBuild", "psi", "verify_psi", "PsiReport", "sample_product",
    "trap_experiment", "TrapReport", "BRANCHES",
]

_H = Fraction(1, 2)
_I = GaussianInt(0, 1)

Z = {
    1: Region.of(re_le(_H), im_le(_H), im_ge(-_H), disk_exterior(1), name="Z1"),
    2: Region.of(re_le(_H), im_le(_H), disk_exterior(1), name="Z2"),
    3: Region.of(re_le(_H), im_le(_H), disk_exterior(0), name="Z3"),
    4: Region.of(re_le(_H), disk_exterior(0), disk_exterior(_I), name="Z4"),
    5: Region.of(re_le(_H), disk_exterior(0), disk_exterior(_I), disk_exterior(-_I), name="Z5"),
}


def _union(*hs, name=""):
    return Region(tuple(Cell((h,)) for h in hs), name=name)


_G = GaussianInt
A = {
    1: _union(disk(0), disk(_G(-1, 1)), disk(_G(-1, -1)), re_le(-_H), name="A1"),
    2: _union(disk(0), disk(_G(-1, 1)), re_le(-_H), im_le(-_H), name="A2"),
    3: _union(disk(_G(-1)), disk(_G(0, -1)), disk(_G(1, -2)), re_le(-_H), im_le(-3 * _H), name="A3"),
    4: _union(disk(_G(0, 2)), disk(_G(-1, 1)), disk(_G(-1)), disk(_G(0, -1)), disk(_G(1, -2)),
              re_le(-_H), im_le(-3 * _H), im_ge(3 * _H), name="A4"),
    5: _union(disk(_G(0, 2)), disk(_G(0, -2)), disk(_G(-1, 1)), disk(_G(-1, -1)), disk(_G(-1)),
              re_le(-_H), im_le(-3 * _H), im_ge(3 * _H), name="A5"),
}

# branch codes used by the vectorized map
BRANCHES: tuple[MoebiusMap, ...] = (S, T_INV, U_INV, T, U)
_BRANCH_CODE = {m: i for i, m in enumerate(BRANCHES)}


# ---------------------------------------------------------------------------
# product sets


@dataclass(frozen=True)
class ProductSet:
    """Union over all symmetries g of g(parts[k] x W[k]), k = 1..5."""

    parts: tuple[Region, Region, Region, Region, Region]
    name: str = ""

    def part(self, k: int) -> Region:
        return self.parts[k - 1]

    @property
    def terms(self) -> list[tuple[DihedralElement, Region, int]]:
        return [(ID, self.part(k), k) for k in range(1, 6) if self.part(k).cells]

    def contains(self, z, w, eps: float = DEFAULT_EPS) -> bool:
        """Closed membership: some symmetry g and cell k with g^-1 w in W_k and g^-1 z in part_k."""
        for g in DIH4:
            gi = g.inverse()
            wr, zr = gi(w), gi(z)
            for k in range(1, 6):
                if W[k].contains(wr, eps) and self.part(k).contains(zr, eps):
                    return True
        return False

    def classify_float(self, z: np.ndarray, w: np.ndarray, eps: float = DEFAULT_EPS) -> np.ndarray:
        """Tri-state membership (+1 inside, -1 outside, 0 within eps of a boundary)."""
        z = np.asarray(z, dtype=complex).ravel()
        w = np.asarray(w, dtype=complex).ravel()
        out = np.full(z.shape, -1, dtype=np.int8)
        for g in DIH4:
            gi = g.inverse()
            wr, zr = _dih_array(gi, w), _dih_array(gi, z)
            for k in range(1, 6):
                if not self.part(k).cells:
                    continue
                tw = W[k].classify_float(wr, eps)
                live = tw >= 0
                if not live.any():
                    continue
                tz = np.full(z.shape, -1, dtype=np.int8)
                tz[live] = self.part(k).classify_float(zr[live], eps)
                out = np.maximum(out, np.minimum(tw, tz))
        return out

    def contains_exact(self, z: ExactPoints, w: ExactPoints) -> np.ndarray:
        out = np.zeros(len(z), dtype=bool)
        for g in DIH4:
            gi = g.inverse()
            wr, zr = w.transform_dih(gi), z.transform_dih(gi)
            for k in range(1, 6):
                if not self.part(k).cells:
                    continue
                mw = W[k].contains_exact(wr)
                if not mw.any():
                    continue
                mz = np.zeros(len(z), dtype=bool)
                mz[mw] = self.part(k).contains_exact(zr.take(mw))
                out |= mz
        return out

    def to_json(self) -> dict:
        return {"name": self.name, "parts": {str(k): self.part(k).to_json() for k in range(1, 6)}}


def _dih_array(g: DihedralElement, z: np.ndarray) -> np.ndarray:
    if g.conj:
        z = np.conj(z)
    return z * (1j ** g.e)


D = ProductSet(tuple(Z[k] for k in range(1, 6)), name="D")
_UNIT = Region.of(disk(0), name="closed unit disk")
V = ProductSet((_UNIT, _UNIT, EMPTY, EMPTY, EMPTY), name="V")


def D_contains(z, w, eps: float = DEFAULT_EPS) -> bool:
    return D.contains(z, w, eps)


def V_contains(z, w, eps: float = 1e-12) -> bool:
    """|z| <= 1 and S(w) in the diamond."""
    _check_diagonal(z, w)
    x, y = real_imag(w)
    if x == 0 and y == 0:
        return False
    if is_exact(z):
        zx, zy = (Fraction(v) for v in real_imag(z))
        inside = zx * zx + zy * zy <= 1
    else:
        inside = abs(complex(z)) <= 1 + eps
    return inside and phi_contains(moebius_apply(S, w), eps)


# ---------------------------------------------------------------------------
# the map


def _check_diagonal(z, w):
    if is_exact(z) and is_exact(w):
        same = real_imag(z) == real_imag(w) or (Fraction(real_imag(z)[0]) == Fraction(real_imag(w)[0])
                                                and Fraction(real_imag(z)[1]) == Fraction(real_imag(w)[1]))
    else:
        same = abs(complex(z) - complex(w)) <= 1e-12
    if same:
        raise DiagonalError(f"z = w = {w} lies on the diagonal")


def F_diamond(z, w):
    """One step of the natural extension; the branch is chosen by ``w``."""
    _check_diagonal(z, w)
    if not (is_exact(z) and is_exact(w)):
        z, w = complex(z), complex(w)
    h = branch(w)
    if h is S:
        for v, label in ((w, "w"), (z, "z")):
            x, y = real_imag(v)
            if x == 0 and y == 0:
                raise PoleError(f"{label} = 0 in the inversion branch")
    return moebius_apply(h, z), moebius_apply(h, w)


def branch_codes(w: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    """Vectorized branch index into ``BRANCHES`` for float points."""
    x, y = w.real, w.imag
    code = np.full(w.shape, 4, dtype=np.int8)  # U: -3pi/4 <= arg < -pi/4
    code[(x < 0) & (x < y) & (y <= -x)] = 3
    code[(y > 0) & (-y < x) & (x <= y)] = 2
    code[(x > 0) & (-x <= y) & (y < x)] = 1
    code[np.abs(x) + np.abs(y) <= 1 + eps] = 0
    return code


def F_array(z: np.ndarray, w: np.ndarray, eps: float = 1e-12) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """F applied to arrays of float points; returns (z', w', branch codes)."""
    code = branch_codes(w, eps)
    shift = np.array([0, -1, -1j, 1, 1j])[code]
    inv = code == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        z2 = np.where(inv, -1 / z, z + shift)
        w2 = np.where(inv, -1 / w, w + shift)
    return z2, w2, code


def _exact_branch_codes(w: ExactPoints) -> np.ndarray:
    P, Q, Dn = w.P, w.Q, w.D
    n = len(w)
    code = np.full(n, 4, dtype=np.int8)
    code[np.asarray((P < 0) & (P < Q) & (Q <= -P), dtype=bool)] = 3
    code[np.asarray((Q > 0) & (-Q < P) & (P <= Q), dtype=bool)] = 2
    code[np.asarray((P > 0) & (-P <= Q) & (Q < P), dtype=bool)] = 1
    code[np.asarray(np.abs(P) + np.abs(Q) <= Dn, dtype=bool)] = 0
    return code


def _reduce(P, Q, Dn) -> ExactPoints:
    P2, Q2, D2 = [], [], []
    for p, q, d in zip(P, Q, Dn):
        p, q, d = int(p), int(q), int(d)
        if d < 0:
            p, q, d = -p, -q, -d
        g = math.gcd(math.gcd(p, q), d)
        P2.append(p // g)
        Q2.append(q // g)
        D2.append(d // g)
    return ExactPoints(*(np.array(v, dtype=object) for v in (P2, Q2, D2)))


def _apply_exact(code: np.ndarray, pts: ExactPoints, inverse: bool = False) -> ExactPoints:
    """Apply BRANCHES[code] (or its inverse) pointwise to exact points."""
    p = pts.as_object()
    P, Q, Dn = p.P.copy(), p.Q.copy(), p.D.copy()
    sgn = -1 if inverse else 1
    for c, (dx, dy) in ((1, (-1, 0)), (2, (0, -1)), (3, (1, 0)), (4, (0, 1))):
        m = code == c
        P[m] = P[m] + sgn * dx * Dn[m]
        Q[m] = Q[m] + sgn * dy * Dn[m]
    m = code == 0
    if m.any():
        # -1/z = (-x + i y) / |z|^2
        p0, q0, d0 = p.P[m], p.Q[m], p.D[m]
        P[m] = -p0 * d0
        Q[m] = q0 * d0
        Dn[m] = p0 * p0 + q0 * q0
    return _reduce(P, Q, Dn)


def F_exact(z: ExactPoints, w: ExactPoints) -> tuple[ExactPoints, ExactPoints, np.ndarray]:
    """F applied to exact point batches. Points hitting a pole are flagged with code -1."""
    code = _exact_branch_codes(w)
    zo = z.as_object()
    pole = (code == 0) & np.array([int(a) == 0 and int(b) == 0 for a, b in zip(zo.P, zo.Q)], dtype=bool)
    code = code.copy()
    c2 = np.where(pole, 1, code)  # placeholder branch for poles, masked by the caller
    z2, w2 = _apply_exact(c2, z), _apply_exact(c2, w)
    code[pole] = -1
    return z2, w2, code


# ---------------------------------------------------------------------------
# bijectivity domain


def hatZ_pieces(k: int) -> list[tuple[str, Region]]:
    """Pieces xi^-1 (h_j Z_j) for every copy xi W_k listed in f(W_j)."""
    out = []
    for j in range(1, 6):
        h = BRANCH_BY_CELL[j]
        for xi, m in PARTITION_ROWS[j]:
            if m != k:
                continue
            xinv = xi.inverse()
            piece = Z[j].transform(h).transform(xinv)
            label = f"{'' if xinv == ID else xinv.name + ' '}{h.name} Z{j}"
            out.append((label, piece.named(label)))
    return out


def hatZ_compute(k: int) -> Region:
    r = EMPTY
    for _, piece in hatZ_pieces(k):
        r = r | piece
    return r.named(f"hatZ{k}")


@dataclass
class BijectivityReport:
    hatz: dict[int, Verdict]
    overlaps: dict[str, Verdict]
    invariance: dict
    injectivity: dict
    elapsed_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return (all(v.ok for v in self.hatz.values()) and all(v.ok for v in self.overlaps.values())
                and self.invariance["failures"] == 0 and self.injectivity["failures"] == 0
                and self.invariance["checked"] > 0 and self.injectivity["checked"] > 0)


def _cell_box(k: int) -> tuple:
    return (0, 4, 0, 4) if k in (1, 2) else (0, 1.25, 0, 0.75)


def _dyadic_uniform(rng, box, n: int, bits: int) -> ExactPoints:
    Dn = 2 ** bits
    x0, x1, y0, y1 = box
    P = rng.integers(int(x0 * Dn), int(x1 * Dn) + 1, size=n, dtype=np.int64)
    Q = rng.integers(int(y0 * Dn), int(y1 * Dn) + 1, size=n, dtype=np.int64)
    return ExactPoints.grid(P, Q, Dn)


def sample_product(ps: ProductSet, n: int, seed: int, zbox=(-4, 4, -4, 4), bits: int = 24,
                   eps: float = 1e-9) -> tuple[ExactPoints, ExactPoints]:
    """``n`` seeded dyadic points of ``ps`` that are inside by more than ``eps``.

    Each sample picks a cell k and a symmetry g uniformly, draws z and w
    uniformly from boxes around part_k and W_k, and keeps the pair when both
    coordinates are interior.
    """
    rng = np.random.default_rng(seed)
    cells = [k for k in range(1, 6) if ps.part(k).cells]
    zs, ws = [], []
    got = 0
    for _ in range(1000):
        if got >= n:
            break
        batch = max(2 * (n - got), 256)
        ks = rng.choice(cells, size=batch)
        gs = rng.integers(0, 8, size=batch)
        for k in cells:
            m = int((ks == k).sum())
            if not m:
                continue
            wp = _dyadic_uniform(rng, _cell_box(k), m * 4, bits)
            zp = _dyadic_uniform(rng, zbox, m * 4, bits)
            ok = (W[k].classify_float(wp.to_complex(), eps) == 1) & \
                 (ps.part(k).classify_float(zp.to_complex(), eps) == 1)
            idx = np.flatnonzero(ok)[:m]
            if not len(idx):
                continue
            wp, zp = wp.take(idx), zp.take(idx)
            g_sel = gs[ks == k][: len(idx)]
            for gi in np.unique(g_sel):
                sel = g_sel == gi
                g = DIH4[int(gi)]
                ws.append(wp.take(sel).transform_dih(g))
                zs.append(zp.take(sel).transform_dih(g))
            got += len(idx)
    if got < n:
        raise RuntimeError(f"sampled only {got} of {n} points of {ps.name}")
    zc, wc = zs[0], ws[0]
    for a, b in zip(zs[1:], ws[1:]):
        zc, wc = zc.concat(a), wc.concat(b)
    return zc.take(slice(0, n)), wc.take(slice(0, n))


def _invariance(ps: ProductSet, n: int, seed: int) -> dict:
    z, w = sample_product(ps, n, seed)
    z2, w2, code = F_exact(z, w)
    live = code >= 0
    inside = np.zeros(len(z), dtype=bool)
    inside[live] = ps.contains_exact(z2.take(live), w2.take(live))
    bad = np.flatnonzero(live & ~inside)
    return {"sampled": n, "checked": int(live.sum()), "poles": int((~live).sum()),
            "failures": int(len(bad)),
            "witnesses": [[str(z.point(i)), str(w.point(i))] for i in bad[:5]]}


def _injectivity(ps: ProductSet, n: int, seed: int, eps: float = 1e-9) -> dict:
    """Every sampled image point has exactly one branch preimage in ``ps``."""
    z, w = sample_product(ps, n, seed)
    z2, w2, code = F_exact(z, w)
    live = np.flatnonzero(code >= 0)
    z2, w2 = z2.take(live), w2.take(live)
    m = len(live)
    valid = np.zeros((len(BRANCHES), m), dtype=bool)
    ambiguous = np.zeros(m, dtype=bool)
    zf, wf = z2.to_complex(), w2.to_complex()
    for c in range(len(BRANCHES)):
        codes = np.full(m, c, dtype=np.int8)
        if c == 0:
            zero = np.array([int(a) == 0 and int(b) == 0 for a, b in zip(z2.P, z2.Q)], dtype=bool) | \
                   np.array([int(a) == 0 and int(b) == 0 for a, b in zip(w2.P, w2.Q)], dtype=bool)
        else:
            zero = np.zeros(m, dtype=bool)
        ok = ~zero
        zp, wp = _apply_exact(codes, z2.take(ok), inverse=True), _apply_exact(codes, w2.take(ok), inverse=True)
        same_branch = _exact_branch_codes(wp) == c
        member = ps.contains_exact(zp, wp)
        v = np.zeros(m, dtype=bool)
        v[ok] = same_branch & member
        valid[c] = v
        # eps-tube exclusion, from float images of the candidate preimages
        zq = _inverse_float(c, zf[ok])
        wq = _inverse_float(c, wf[ok])
        tri = ps.classify_float(zq, wq, eps)
        near_branch = _branch_ambiguous(wq, eps)
        amb = np.zeros(m, dtype=bool)
        amb[ok] = (tri == 0) | ((tri >= 0) & near_branch)
        ambiguous |= amb
    count = valid.sum(axis=0)
    usable = ~ambiguous
    bad = np.flatnonzero(usable & (count != 1))
    return {"sampled": n, "checked": int(usable.sum()), "excluded": int(ambiguous.sum()),
            "failures": int(len(bad)),
            "witnesses": [[str(z2.point(i)), str(w2.point(i)), int(count[i])] for i in bad[:5]]}


def _inverse_float(c: int, v: np.ndarray) -> np.ndarray:
    if c == 0:
        with np.errstate(divide="ignore", invalid="ignore"):
            return -1 / v
    return v - np.array([0, -1, -1j, 1, 1j])[c]


def _branch_ambiguous(w: np.ndarray, eps: float) -> np.ndarray:
    # near the diamond edge or one of the diagonal sector rays
    x, y = w.real, w.imag
    return (np.abs(np.abs(x) + np.abs(y) - 1) <= eps) | (np.abs(np.abs(x) - np.abs(y)) <= eps)


def verify_bijectivity(samples: int = 10_000, seed: int = 0,
                       opts: EqualityOptions = EqualityOptions(),
                       eps: float = 1e-9) -> BijectivityReport:
    t0 = time.perf_counter()
    hatz = {k: region_equal(hatZ_compute(k), Z[k], opts) for k in range(1, 6)}
    overlaps = {}
    quick = EqualityOptions(grid=200, random=2000, seed=seed, boundary_points=32)
    for k in range(1, 6):
        pieces = hatZ_pieces(k)
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                (la, a), (lb, b) = pieces[i], pieces[j]
                overlaps[f"hatZ{k}: {la} & {lb}"] = region_contains(a & b, EMPTY, quick)
    inv = _invariance(D, samples, seed)
    inj = _injectivity(D, samples, seed + 1, eps)
    return BijectivityReport(hatz, overlaps, inv, inj, (time.perf_counter() - t0) * 1e3)


# ---------------------------------------------------------------------------
# orbits


@dataclass
class OrbitResult:
    N: int
    state: tuple
    trace: list = field(default_factory=list)  # states right after each inversion step


def orbit_until_V(z, w, budget: int = 200) -> OrbitResult:
    """Iterate F until the state lies in V; N is the number of steps taken."""
    if is_exact(w):
        raise ValueError("rational w has a finite orbit; orbit experiments need a float w")
    z, w = complex(z), complex(w)
    trace = []
    for n in range(budget + 1):
        if V_contains(z, w):
            return OrbitResult(n, (z, w), trace)
        if n == budget:
            break
        was_inversion = branch(w) is S
        z, w = F_diamond(z, w)
        if was_inversion:
            trace.append((z, w))
    raise BudgetExhausted(f"orbit did not reach V within {budget} steps", (z, w))


def _V_float(z: np.ndarray, w: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        sw = -1 / w
    return (np.abs(z) <= 1 + eps) & (np.abs(sw.real) + np.abs(sw.imag) <= 1 + eps)


@dataclass
class TrapReport:
    pairs: int
    entered: int
    max_entry: int
    stayed: int
    escapes: list

    @property
    def ok(self) -> bool:
        return self.entered == self.pairs and self.stayed == self.pairs


def trap_experiment(pairs: int = 1000, seed: int = 0, enter_budget: int = 200, stay: int = 500,
                    eps: float = DEFAULT_EPS, box: float = 5.0) -> TrapReport:
    """Seeded pairs in [-box, box]^4 off the diagonal: steps to reach V, then stay in Psi."""
    rng = np.random.default_rng(seed)
    z = np.empty(0, dtype=complex)
    w = np.empty(0, dtype=complex)
    while len(z) < pairs:
        u = rng.uniform(-box, box, size=(pairs, 4))
        zz = u[:, 0] + 1j * u[:, 1]
        ww = u[:, 2] + 1j * u[:, 3]
        keep = np.abs(zz - ww) > 0.1
        z = np.concatenate([z, zz[keep]])
        w = np.concatenate([w, ww[keep]])
    z, w = z[:pairs], w[:pairs]
    P = psi().psi
    entry = np.full(pairs, -1)
    bad = np.zeros(pairs, dtype=bool)
    escapes = []
    for n in range(enter_budget + stay + 1):
        new = (entry < 0) & _V_float(z, w) if n <= enter_budget else np.zeros(pairs, dtype=bool)
        entry[new] = n
        watch = (entry >= 0) & (n <= entry + stay) & ~bad
        if watch.any():
            tri = np.full(pairs, 1, dtype=np.int8)
            tri[watch] = P.classify_float(z[watch], w[watch], eps)
            out = watch & (tri < 0)
            for i in np.flatnonzero(out)[: 5 - len(escapes)]:
                escapes.append({"pair": int(i), "step": n, "z": complex(z[i]), "w": complex(w[i])})
            bad |= out
        if n > enter_budget and not ((entry >= 0) & (n < entry + stay)).any():
            break
        z, w, _ = F_array(z, w)
    entered = int((entry >= 0).sum())
    return TrapReport(pairs, entered, int(entry.max()) if entered else -1,
                      int(((entry >= 0) & ~bad).sum()), escapes)


# ---------------------------------------------------------------------------
# trapping region


@dataclass
class PsiBuild:
    psi: ProductSet
    stabilized_at: int
    added: list[int]       # pieces kept at each iteration (index 0 is V itself)
    raw_pieces: dict[int, list[Cell]]


def _covered(piece: Cell, pieces: list[Cell]) -> bool:
    if piece in pieces:
        return True
    if not pieces:
        return False
    v = region_contains(Region((piece,)), Region(tuple(pieces)), ARRANGEMENT_ONLY)
    return v.ok


def _minimize(pieces: list[Cell]) -> list[Cell]:
    """Drop pieces covered by the union of the others (largest first kept)."""
    out = list(pieces)
    for p in sorted(pieces, key=_piece_order, reverse=True):
        rest = [q for q in out if q != p]
        if _covered(p, rest):
            out = rest
    return out


def _piece_order(c: Cell):
    # small bounded pieces are tried for removal first
    r = []
    for h in c.constraints:
        if h.boundary.A != 0 and h.side < 0:
            r.append(float(h.boundary.radius_squared()))
        else:
            r.append(math.inf)
    return -min(r) if r else -math.inf


def build_psi(max_iter: int = 10) -> PsiBuild:
    """Union of F^n(V) computed cell by cell until an iteration adds nothing.

    New pieces are propagated through the image rule; a piece already covered
    by the accumulated union of its cell is dropped. ``stabilized_at`` is the
    last n for which F^n(V) contributed anything new.
    """
    acc: dict[int, list[Cell]] = {k: list(V.part(k).cells) for k in range(1, 6)}
    frontier = {k: list(v) for k, v in acc.items()}
    added = [sum(len(v) for v in acc.values())]
    for n in range(1, max_iter + 1):
        new: dict[int, list[Cell]] = {k: [] for k in range(1, 6)}
        for k, pieces in frontier.items():
            h = BRANCH_BY_CELL[k]
            for p in pieces:
                hp = p.transform(h)
                for xi, j in PARTITION_ROWS[k]:
                    q = hp.transform(xi.inverse())
                    if q.is_degenerate() or _covered(q, acc[j]):
                        continue
                    acc[j].append(q)
                    new[j].append(q)
        count = sum(len(v) for v in new.values())
        if count == 0:
            parts = tuple(Region(tuple(_minimize(acc[k])), name=f"Psi{k}") for k in range(1, 6))
            return PsiBuild(ProductSet(parts, name="Psi"), n - 1, added,
                            {k: list(v) for k, v in acc.items()})
        added.append(count)
        frontier = new
    raise NoStabilization(f"no fixed point after {max_iter} iterations")


@functools.lru_cache(maxsize=1)
def psi() -> PsiBuild:
    return build_psi()


@dataclass
class PsiReport:
    stabilized_at: int
    closed_forms: dict[int, Verdict]
    z_in_a: dict[int, Verdict]
    v_in_psi: dict[int, Verdict]
    invariance: dict
    shapes_ok: bool
    elapsed_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return (self.stabilized_at == 4 and self.shapes_ok
                and all(v.ok for v in self.closed_forms.values())
                and all(v.ok for v in self.z_in_a.values())
                and all(v.ok for v in self.v_in_psi.values())
                and self.invariance["failures"] == 0 and self.invariance["checked"] > 0)


def _unit_disk_or_halfplane(c: Cell) -> bool:
    if len(c.constraints) != 1:
        return False
    h = c.constraints[0]
    return h.is_halfplane() or (h.is_disk() and h.boundary.radius_squared() == 1)


def verify_psi(samples: int = 10_000, seed: int = 0,
               opts: EqualityOptions = EqualityOptions()) -> PsiReport:
    t0 = time.perf_counter()
    build = psi()
    P = build.psi
    forms = {k: region_equal(P.part(k), A[k], opts) for k in range(1, 6)}
    z_in_a = {k: region_contains(Z[k], A[k], opts) for k in range(1, 6)}
    v_in = {k: region_contains(V.part(k), P.part(k), opts) for k in (1, 2)}
    inv = _invariance(P, samples, seed)
    shapes = all(_unit_disk_or_halfplane(c) for k in range(1, 6) for c in P.part(k).cells)
    return PsiReport(build.stabilized_at, forms, z_in_a, v_in, inv, shapes,
                     (time.perf_counter() - t0) * 1e3)
