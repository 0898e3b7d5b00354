"""Deterministic SVG figures of the regions, the partition and the invariant sets.

Regions are polygonized with shapely (circles as 256-gon approximations),
clipped to the viewport and written with fixed 6-decimal coordinates in a
y-up frame. Nothing time- or environment-dependent reaches the output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from html import escape

from shapely.geometry import GeometryCollection, LineString, MultiPolygon, Point, Polygon, box
from shapely.geometry.polygon import orient
from shapely.ops import unary_union

from .arith import DIH4
from .diamond import BRANCH_BY_CELL, C_STAR, PARTITION_ROWS, PHI, W, cell_region
from .natext import A, Z, psi
from .regions import Circline, HalfSpace, Region

__all__ = ["SvgScene", "compose", "region_geometry", "FIGURES", "render_figure"]

VIEWPORT = (-3.5, 3.5, -3.5, 3.5)
CIRCLE_SEGMENTS = 256
CELL_COLORS = {1: "#8e6cc0", 2: "#d9a441", 3: "#5aa469", 4: "#d1615d", 5: "#4a7fb5"}
_REACH = 1e3


def _num(v: float) -> str:
    v = round(float(v), 6) + 0.0
    return f"{v:.6f}"


def _line_frame(c: Circline):
    """A point on the line ``c`` and its unit direction (normal rotated by +90 degrees)."""
    bre, bim = float(c.Bre), float(c.Bim)
    nn = math.hypot(bre, bim)
    nx, ny = bre / nn, bim / nn
    return (-float(c.C) / (2 * nn) * nx, -float(c.C) / (2 * nn) * ny), (-ny, nx)


def _halfspace_geometry(h: HalfSpace, window: Polygon):
    c = h.boundary
    if c.A != 0:
        r2 = float(c.radius_squared())
        if r2 <= 0:
            return window if h.side > 0 else Polygon()
        ctr = complex(c.center())
        d = Point(ctr.real, ctr.imag).buffer(math.sqrt(r2), quad_segs=CIRCLE_SEGMENTS // 4)
        return d.intersection(window) if h.side < 0 else window.difference(d)
    p0, (tx, ty) = _line_frame(c)
    nx, ny = ty, -tx
    s = h.side  # the kept side is where Q has sign ``side``
    pts = [(p0[0] - _REACH * tx, p0[1] - _REACH * ty),
           (p0[0] + _REACH * tx, p0[1] + _REACH * ty),
           (p0[0] + _REACH * tx + s * _REACH * nx, p0[1] + _REACH * ty + s * _REACH * ny),
           (p0[0] - _REACH * tx + s * _REACH * nx, p0[1] - _REACH * ty + s * _REACH * ny)]
    return Polygon(pts).intersection(window)


def region_geometry(r: Region, viewport=VIEWPORT):
    """Shapely geometry of ``r`` clipped to ``viewport``."""
    window = box(viewport[0], viewport[2], viewport[1], viewport[3])
    parts = []
    for cell in r.cells:
        g = window
        for h in cell.constraints:
            g = g.intersection(_halfspace_geometry(h, window))
            if g.is_empty:
                break
        if not g.is_empty:
            parts.append(g)
    if not parts:
        return Polygon()
    return unary_union(parts)


def _polygons(g) -> list[Polygon]:
    if isinstance(g, Polygon):
        return [] if g.is_empty or g.area <= 0 else [orient(g, 1.0)]
    if isinstance(g, (MultiPolygon, GeometryCollection)):
        out = []
        for part in g.geoms:
            out += _polygons(part)
        return out
    return []


def _ring(coords) -> str:
    pts = list(coords)[:-1]
    head = f"M{_num(pts[0][0])},{_num(-pts[0][1])}"
    return head + "".join(f"L{_num(x)},{_num(-y)}" for x, y in pts[1:]) + "Z"


def _path_data(g) -> str:
    d = []
    for p in _polygons(g):
        d.append(_ring(p.exterior.coords))
        d += [_ring(i.coords) for i in p.interiors]
    return "".join(d)


def _attrs(d: dict) -> str:
    return "".join(f' {k}="{escape(str(v), quote=True)}"' for k, v in d.items())


@dataclass
class SvgScene:
    """One panel: a viewport and an ordered list of layers (drawn first to last)."""

    viewport: tuple = VIEWPORT
    size: int = 360
    title: str = ""
    layers: list = field(default_factory=list)

    # -- layers ----------------------------------------------------------
    def add_region(self, r: Region, fill: str, opacity: float = 1.0, **attrs) -> bool:
        """Add a filled region; returns False (and adds nothing) when it misses the viewport."""
        d = _path_data(region_geometry(r, self.viewport))
        if not d:
            return False
        a = {"d": d, "fill": fill, "fill-rule": "evenodd"}
        if opacity != 1.0:
            a["fill-opacity"] = _num(opacity)
        a.update(attrs)
        self.layers.append(f"<path{_attrs(a)}/>")
        return True

    def add_circline(self, c: Circline, stroke: str = "#000", width: float = 0.02, dash: bool = False):
        x0, x1, y0, y1 = self.viewport
        a = {"fill": "none", "stroke": stroke, "stroke-width": _num(width)}
        if dash:
            a["stroke-dasharray"] = f"{_num(4 * width)},{_num(3 * width)}"
        if c.A != 0:
            ctr = complex(c.center())
            a = {"cx": _num(ctr.real), "cy": _num(-ctr.imag), "r": _num(math.sqrt(float(c.radius_squared()))), **a}
            self.layers.append(f"<circle{_attrs(a)}/>")
            return
        p0, t = _line_frame(c)
        far = LineString([(p0[0] - _REACH * t[0], p0[1] - _REACH * t[1]),
                          (p0[0] + _REACH * t[0], p0[1] + _REACH * t[1])])
        seg = far.intersection(box(x0, y0, x1, y1))
        if not seg.is_empty and seg.length > 0:
            (ax, ay), (bx, by) = seg.coords[0], seg.coords[-1]
            self.add_segment(complex(ax, ay), complex(bx, by), stroke, width, dash)

    def add_segment(self, p: complex, q: complex, stroke: str = "#000", width: float = 0.02, dash: bool = False):
        a = {"x1": _num(p.real), "y1": _num(-p.imag), "x2": _num(q.real), "y2": _num(-q.imag),
             "stroke": stroke, "stroke-width": _num(width)}
        if dash:
            a["stroke-dasharray"] = f"{_num(4 * width)},{_num(3 * width)}"
        self.layers.append(f"<line{_attrs(a)}/>")

    def add_point(self, z: complex, r: float = 0.05, fill: str = "#000"):
        self.layers.append(f'<circle cx="{_num(z.real)}" cy="{_num(-z.imag)}" r="{_num(r)}" fill="{fill}"/>')

    def add_label(self, z: complex, text: str, size: float = 0.3, fill: str = "#000"):
        a = {"x": _num(z.real), "y": _num(-z.imag), "font-size": _num(size), "fill": fill,
             "text-anchor": "middle", "dominant-baseline": "middle", "font-family": "serif"}
        self.layers.append(f"<text{_attrs(a)}>{escape(text)}</text>")

    def add_grid(self, axes: bool = True):
        x0, x1, y0, y1 = self.viewport
        for k in range(math.ceil(x0), math.floor(x1) + 1):
            self.add_segment(complex(k, y0), complex(k, y1), "#bbb", 0.01)
        for k in range(math.ceil(y0), math.floor(y1) + 1):
            self.add_segment(complex(x0, k), complex(x1, k), "#bbb", 0.01)
        if axes:
            self.add_segment(complex(x0, 0), complex(x1, 0), "#000", 0.03)
            self.add_segment(complex(0, y0), complex(0, y1), "#000", 0.03)

    # -- output ----------------------------------------------------------
    def body(self, x: float = 0, y: float = 0) -> str:
        x0, x1, y0, y1 = self.viewport
        vb = f"{_num(x0)} {_num(-y1)} {_num(x1 - x0)} {_num(y1 - y0)}"
        h = self.size * (y1 - y0) / (x1 - x0)
        out = [f'<svg x="{_num(x)}" y="{_num(y)}" width="{_num(self.size)}" height="{_num(h)}" viewBox="{vb}">']
        if self.title:
            out.append(f"<title>{escape(self.title)}</title>")
        out.append(f'<rect x="{_num(x0)}" y="{_num(-y1)}" width="{_num(x1 - x0)}" height="{_num(y1 - y0)}" fill="#fff"/>')
        out += self.layers
        out.append(f'<rect x="{_num(x0)}" y="{_num(-y1)}" width="{_num(x1 - x0)}" height="{_num(y1 - y0)}" '
                   f'fill="none" stroke="#000" stroke-width="0.020000"/>')
        out.append("</svg>")
        return "\n".join(out)

    def to_svg(self) -> str:
        return compose([self], cols=1)


def compose(scenes: list[SvgScene], cols: int, gap: int = 12, captions: list[str] | None = None) -> str:
    """Lay panels out on a grid and return a standalone SVG document."""
    rows = math.ceil(len(scenes) / cols)
    cell_w = max(s.size for s in scenes)
    cell_h = max(s.size * (s.viewport[3] - s.viewport[2]) / (s.viewport[1] - s.viewport[0]) for s in scenes)
    cap = 22 if captions else 0
    width = cols * cell_w + (cols + 1) * gap
    height = rows * (cell_h + cap) + (rows + 1) * gap
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" height="{_num(height)}" '
           f'viewBox="0 0 {_num(width)} {_num(height)}">']
    for i, s in enumerate(scenes):
        r, c = divmod(i, cols)
        x = gap + c * (cell_w + gap)
        y = gap + r * (cell_h + cap + gap)
        out.append(s.body(x, y))
        if captions and captions[i]:
            out.append(f'<text x="{_num(x + cell_w / 2)}" y="{_num(y + cell_h + 16)}" font-size="14" '
                       f'text-anchor="middle" font-family="serif">{escape(captions[i])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# figures


def _partition_lines(s: SvgScene, dash: bool = False):
    seen = set()
    for k in range(1, 6):
        for g in DIH4:
            for c in cell_region(g, k).circlines():
                if c not in seen:
                    seen.add(c)
    for c in sorted(seen):
        s.add_circline(c, "#555", 0.015, dash)


def figure_regions() -> str:
    """Where f acts by S and by each unit translation."""
    s = SvgScene()
    s.add_region(PHI, "#cccccc")
    s.add_grid()
    for sx, sy in ((1, 1), (-1, 1), (-1, -1), (1, -1)):
        s.add_segment(complex(sx / 2, sy / 2), complex(3.5 * sx, 3.5 * sy))
    for p, q in ((1, 1j), (1j, -1), (-1, -1j), (-1j, 1)):
        s.add_segment(complex(p), complex(q))
    for z, t in ((0.25 + 0.125j, "S"), (1.8 + 0.9j, "T⁻¹"), (0.75 + 1.6j, "U⁻¹"),
                 (-1.5 + 0.6j, "T"), (-0.6 - 1.5j, "U")):
        s.add_label(z, t)
    s.add_point(1 + 0j)
    s.add_point(1j)
    return s.to_svg()


def partition_scene(viewport=VIEWPORT) -> SvgScene:
    s = SvgScene(viewport=viewport, size=480)
    for g in DIH4:
        for k in range(1, 6):
            s.add_region(cell_region(g, k), CELL_COLORS[k], 0.55, **{"class": "cell", "data-cell": f"{g.name} W{k}"})
    s.add_region(C_STAR, "#000", 0.15, **{"class": "wedge"})
    _partition_lines(s)
    s.add_grid()
    for k, z in ((1, 1.75 + 0.3j), (2, 1.5 + 1j), (3, 0.9 + 0.5j), (4, 0.5 + 0.32j), (5, 0.5 + 0.1j)):
        s.add_label(z, f"W{k}", 0.18 if k < 4 else 0.1)
    s.add_point(1 + 1j)
    return s


def figure_partition() -> str:
    return partition_scene().to_svg()


def _plane(title: str = "", size: int = 220) -> SvgScene:
    s = SvgScene(size=size, title=title)
    s.add_grid()
    return s


def _w_panel(r: Region, k: int, title: str = "") -> SvgScene:
    s = _plane(title)
    s.add_region(r, CELL_COLORS[k], 0.8)
    _partition_lines(s, dash=True)
    return s


def figure_dne() -> str:
    """Each product Z_k x W_k next to its image under F."""
    scenes, caps = [], []
    for k in range(1, 6):
        h = BRANCH_BY_CELL[k]
        zs = _plane()
        zs.add_region(Z[k], "#7b4fa6", 0.8)
        image_w = Region(())
        for xi, j in PARTITION_ROWS[k]:
            image_w = image_w | cell_region(xi, j)
        zi = _plane()
        zi.add_region(Z[k].transform(h), "#7b4fa6", 0.8)
        scenes += [zs, _w_panel(W[k], k), zi, _w_panel(image_w, k)]
        caps += [f"Z{k}", f"W{k}", f"{h.name} Z{k}", f"f(W{k})"]
    return compose(scenes, cols=4, captions=caps)


def figure_z1hat() -> str:
    """The two pieces of the image over W1 and their union."""
    from .natext import hatZ_compute, hatZ_pieces

    scenes, caps = [], []
    for (label, piece), color in zip(hatZ_pieces(1), ("#5b4fc9", "#c94f7c")):
        s = _plane()
        s.add_region(piece, color, 0.8)
        scenes.append(s)
        caps.append(label)
    u = _plane()
    u.add_region(hatZ_compute(1), "#7b4fa6", 0.8)
    scenes.append(u)
    caps.append("union = Z1")
    return compose(scenes, cols=3, captions=caps)


def figure_psi() -> str:
    """Psi parts (light) over the D parts (dark), cell by cell."""
    P = psi().psi
    scenes, caps = [], []
    for k in range(1, 6):
        s = _plane()
        s.add_region(P.part(k), "#c9b3e6", 1.0)
        s.add_region(Z[k], "#5a2d8c", 1.0)
        for c in P.part(k).circlines():
            s.add_circline(c, "#5a2d8c", 0.015)
        scenes += [s, _w_panel(W[k], k)]
        caps += [f"A{k} (light), Z{k} (dark)", f"W{k}"]
    return compose(scenes, cols=2, captions=caps)


FIGURES = {
    "regions": figure_regions,
    "partition": figure_partition,
    "dne": figure_dne,
    "z1hat": figure_z1hat,
    "psi": figure_psi,
}


def render_figure(name: str) -> str:
    return FIGURES[name]()
