"""Exact Gaussian arithmetic, Moebius maps and the symmetry group of the diamond.

Two carriers are used throughout the package:

* exact values: ``GaussianInt`` (elements of Z[i]) and ``RationalComplex``
  (elements of Q(i)); plain ``int`` and ``Fraction`` are accepted as real
  exact values;
* float values: Python ``complex`` (and ``float``).

Every function below keeps exact inputs exact.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import OriginError, ParseError, PoleError

__all__ = [
    "GaussianInt", "RationalComplex", "MoebiusMap", "DihedralElement",
    "T", "U", "S", "T_INV", "U_INV", "IDENTITY", "DIH4", "ID", "IOTA", "ETA", "RHO",
    "is_exact", "to_exact", "to_float", "real_imag", "arg", "sector", "moebius_apply",
    "moebius_compose", "dih_apply", "fold_to_wedge", "parse_complex", "format_complex",
]


@dataclass(frozen=True, slots=True)
class GaussianInt:
    re: int = 0
    im: int = 0

    def __post_init__(self):
        if type(self.re) is not int or type(self.im) is not int:
            object.__setattr__(self, "re", _as_int(self.re))
            object.__setattr__(self, "im", _as_int(self.im))

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussianInt):
            return GaussianInt(self.re + other.re, self.im + other.im)
        if isinstance(other, int):
            return GaussianInt(self.re + other, self.im)
        return _promote(self) + other

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussianInt):
            return GaussianInt(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        return _promote(self) * other

    __rmul__ = __mul__

    def __truediv__(self, other):
        return _promote(self) / other

    def __rtruediv__(self, other):
        return other / _promote(self)

    def __eq__(self, other):
        if isinstance(other, GaussianInt):
            return self.re == other.re and self.im == other.im
        if isinstance(other, RationalComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(self.re, self.im)

    def __abs__(self):
        return math.hypot(self.re, self.im)

    def __str__(self):
        return format_complex(self)


@dataclass(frozen=True, slots=True)
class RationalComplex:
    """Element of Q(i); division by zero raises ``ZeroDivisionError``."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        if type(self.re) is not Fraction:
            object.__setattr__(self, "re", Fraction(self.re))
        if type(self.im) is not Fraction:
            object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def from_complex(cls, z) -> "RationalComplex":
        """Exact value of a float or exact complex (floats are dyadic rationals)."""
        x, y = real_imag(z)
        return cls(Fraction(x), Fraction(y))

    def is_gaussian_integer(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def to_gaussian(self) -> GaussianInt:
        if not self.is_gaussian_integer():
            raise ValueError(f"{self} is not a Gaussian integer")
        return GaussianInt(self.re.numerator, self.im.numerator)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return RationalComplex(self.re, -self.im)

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return complex(self) + other
        return RationalComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return complex(self) - other
        return RationalComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return complex(self) * other
        return RationalComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return complex(self) / other
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return RationalComplex((self.re * o.re + self.im * o.im) / n,
                               (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return other / complex(self)
        return o / self

    def __eq__(self, other):
        if isinstance(other, (RationalComplex, GaussianInt)):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __str__(self):
        return format_complex(self)


def _as_int(v) -> int:
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v.numerator)
    if isinstance(v, float) and v.is_integer():
        return int(v)
    if isinstance(v, int):
        return int(v)
    raise TypeError(f"GaussianInt part must be an integer, got {v!r}")


def _promote(g: GaussianInt) -> RationalComplex:
    return RationalComplex(Fraction(g.re), Fraction(g.im))


def _coerce(v):
    if isinstance(v, RationalComplex):
        return v
    if isinstance(v, GaussianInt):
        return _promote(v)
    if isinstance(v, (int, Fraction)):
        return RationalComplex(Fraction(v), Fraction(0))
    return None


Exact = Union[GaussianInt, RationalComplex, int, Fraction]


def is_exact(z) -> bool:
    return isinstance(z, (GaussianInt, RationalComplex, int, Fraction)) and not isinstance(z, bool)


def to_exact(z) -> RationalComplex:
    """Exact Q(i) value of ``z``; floats convert to their exact dyadic value."""
    c = _coerce(z)
    if c is not None:
        return c
    return RationalComplex.from_complex(z)


def to_float(z) -> complex:
    return complex(z)


def real_imag(z):
    """(re, im) of any supported complex carrier, keeping exactness."""
    if isinstance(z, (GaussianInt, RationalComplex)):
        return z.re, z.im
    if isinstance(z, (int, Fraction, float)):
        return z, 0
    z = complex(z)
    return z.real, z.imag


def arg(z) -> float:
    """Argument in (-pi, pi]; a negative zero imaginary part counts as zero."""
    x, y = real_imag(z)
    return math.atan2(float(y) + 0.0, float(x))


def sector(z) -> str:
    """Which translation branch of the arg table ``z`` falls in.

    Returns ``"E"`` for -pi/4 <= arg < pi/4, ``"N"`` for pi/4 <= arg < 3pi/4,
    ``"W"`` for 3pi/4 <= arg or arg < -3pi/4 and ``"S"`` for
    -3pi/4 <= arg < -pi/4. Decided by exact comparisons of the coordinates,
    so no trigonometry is involved.
    """
    x, y = real_imag(z)
    if x == 0 and y == 0:
        raise OriginError("arg is undefined at 0")
    if x > 0 and -x <= y < x:
        return "E"
    if y > 0 and -y < x <= y:
        return "N"
    if x < 0 and x < y <= -x:
        return "W"
    return "S"


# ---------------------------------------------------------------------------
# Moebius maps


@dataclass(frozen=True, slots=True)
class MoebiusMap:
    """z -> (a z + b) / (c z + d) with Gaussian integer entries and unit determinant."""

    a: GaussianInt
    b: GaussianInt
    c: GaussianInt
    d: GaussianInt
    name: str = ""

    def __post_init__(self):
        for f in ("a", "b", "c", "d"):
            v = getattr(self, f)
            if not isinstance(v, GaussianInt):
                object.__setattr__(self, f, GaussianInt(*real_imag(v)) if not isinstance(v, int)
                                   else GaussianInt(v, 0))
        if self.det().norm() != 1:
            raise ValueError(f"determinant {self.det()} is not a unit")

    def det(self) -> GaussianInt:
        return self.a * self.d - self.b * self.c

    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def __call__(self, z):
        return moebius_apply(self, z)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return moebius_compose(self, other)

    def inverse(self) -> "MoebiusMap":
        # adj / det, and 1/det = conj(det) for a unit
        u = self.det().conjugate()
        name = f"({self.name})^-1" if self.name else ""
        return MoebiusMap(self.d * u, -self.b * u, -self.c * u, self.a * u, name)

    def same_map(self, other: "MoebiusMap") -> bool:
        """Equality of the maps, i.e. of the matrices up to a unit scalar."""
        m1 = (self.a, self.b, self.c, self.d)
        m2 = (other.a, other.b, other.c, other.d)
        for u in _UNITS:
            if all(x * u == y for x, y in zip(m1, m2)):
                return True
        return False

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        return hash((self.a, self.b, self.c, self.d))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"MoebiusMap{label}[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


_UNITS = (GaussianInt(1, 0), GaussianInt(0, 1), GaussianInt(-1, 0), GaussianInt(0, -1))


def moebius_apply(m: MoebiusMap, z):
    """(a z + b)/(c z + d); exact for exact input, ``PoleError`` when c z + d = 0."""
    if is_exact(z):
        num = m.a * z + m.b
        den = m.c * z + m.d
        if den == 0:
            raise PoleError(f"{m!r} has its pole at {format_complex(z)}")
        return to_exact(num) / den
    z = complex(z)
    den = complex(m.c) * z + complex(m.d)
    if den == 0:
        raise PoleError(f"{m!r} has its pole at {z}")
    return (complex(m.a) * z + complex(m.b)) / den


def moebius_compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    """Matrix product: the map z -> m1(m2(z))."""
    name = f"{m1.name}{m2.name}" if m1.name and m2.name else ""
    return MoebiusMap(m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
                      m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d, name)


_G = GaussianInt
IDENTITY = MoebiusMap(_G(1), _G(0), _G(0), _G(1), "I")
T = MoebiusMap(_G(1), _G(1), _G(0), _G(1), "T")
U = MoebiusMap(_G(1), _G(0, 1), _G(0), _G(1), "U")
S = MoebiusMap(_G(0), _G(-1), _G(1), _G(0), "S")
T_INV = MoebiusMap(_G(1), _G(-1), _G(0), _G(1), "T^-1")
U_INV = MoebiusMap(_G(1), _G(0, -1), _G(0), _G(1), "U^-1")


# ---------------------------------------------------------------------------
# Dih4

_I_POW = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True, slots=True)
class DihedralElement:
    """Symmetry w -> i^e * w (``conj`` False) or w -> i^e * conj(w) (``conj`` True).

    The eight canonical names are ``iota^j`` (rotation by j quarter turns) and
    ``eta*iota^j`` where eta is w -> -conj(w); ``eta*iota`` is the reflection
    rho: w -> i conj(w).
    """

    e: int
    conj: bool = False

    def __post_init__(self):
        object.__setattr__(self, "e", self.e % 4)

    @property
    def index(self) -> int:
        """Position in the canonical ordering iota^0..iota^3, eta*iota^0..eta*iota^3."""
        if not self.conj:
            return self.e
        return 4 + (2 - self.e) % 4

    @property
    def name(self) -> str:
        return _DIH_NAMES[self.index]

    def __call__(self, z):
        return dih_apply(self, z)

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        """Composition: (g * h)(z) = g(h(z))."""
        e = self.e + (-other.e if self.conj else other.e)
        return DihedralElement(e, self.conj ^ other.conj)

    def inverse(self) -> "DihedralElement":
        if self.conj:
            return self
        return DihedralElement(-self.e, False)

    def is_reflection(self) -> bool:
        return self.conj

    def __repr__(self):
        return f"DihedralElement({self.name})"

    def __str__(self):
        return self.name


_DIH_NAMES = ("id", "iota", "iota^2", "iota^3", "eta", "eta*iota", "eta*iota^2", "eta*iota^3")


def _canonical(index: int) -> DihedralElement:
    if index < 4:
        return DihedralElement(index, False)
    j = index - 4
    return DihedralElement(2 - j, True)


DIH4 = tuple(_canonical(k) for k in range(8))
ID, IOTA = DIH4[0], DIH4[1]
ETA, RHO = DIH4[4], DIH4[5]
DIH_BY_NAME = {g.name: g for g in DIH4}


def dih_apply(g: DihedralElement, z):
    x, y = real_imag(z)
    if g.conj:
        y = -y
    # multiply by i^e
    e = g.e
    if e == 1:
        x, y = -y, x
    elif e == 2:
        x, y = -x, -y
    elif e == 3:
        x, y = y, -x
    if is_exact(z):
        if isinstance(z, GaussianInt):
            return GaussianInt(x, y)
        return RationalComplex(x, y)
    return complex(x, y)


def _in_wedge(z, closed: bool) -> bool:
    x, y = real_imag(z)
    if closed:
        return y >= 0 and y <= x and x > 0
    return y >= 0 and y < x


def fold_to_wedge(z):
    """Return (g, rep) with rep in the wedge 0 <= arg < pi/4 and g(rep) = z.

    Elements are tried in canonical order and the first match wins. The
    four diagonal rays (arg = pi/4 + k pi/2) lie in no half-open wedge image;
    for them the reflections are tried against the closed wedge, which sends
    the ray arg = pi/4 to ``eta*iota`` with rep = z.
    """
    x, y = real_imag(z)
    if x == 0 and y == 0:
        raise OriginError("cannot fold 0 into the wedge")
    for g in DIH4:
        rep = dih_apply(g.inverse(), z)
        if _in_wedge(rep, closed=False):
            return g, rep
    for g in DIH4[4:]:
        rep = dih_apply(g.inverse(), z)
        if _in_wedge(rep, closed=True):
            return g, rep
    raise AssertionError(f"no wedge representative for {z!r}")  # unreachable


# ---------------------------------------------------------------------------
# literals

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_REAL_ONLY = re.compile(rf"^([+-]?{_NUM})$")
_FULL = re.compile(rf"^([+-]?{_NUM})?([+-])({_NUM})?[ij]$")
_IMAG_ONLY = re.compile(rf"^({_NUM})?[ij]$")


def _parse_real(tok: str, text: str):
    """Exact value (int/Fraction) and whether it was written as a decimal."""
    try:
        if "/" in tok:
            num, den = tok.split("/")
            is_float = any(c in num for c in ".eE")
            value = Fraction(num) / Fraction(int(den))
            return value, is_float
        is_float = any(c in tok for c in ".eE")
        return Fraction(tok), is_float
    except (ValueError, ZeroDivisionError):
        raise ParseError(text, tok) from None


def parse_complex(text: str, exact: bool | None = None):
    """Parse ``a+bi`` with decimal or ``p/q`` parts, e.g. ``-1/2+3/4i`` or ``1.5-2i``.

    Literals without decimal points or exponents are exact (``RationalComplex``);
    otherwise a float ``complex`` is returned. ``exact`` forces either carrier.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError(text, "")
    re_tok = im_tok = None
    sign = "+"
    m = _REAL_ONLY.match(s)
    if m:
        re_tok = m.group(1)
    else:
        m = _FULL.match(s)
        if m:
            re_tok, sign, im_tok = m.group(1), m.group(2), m.group(3) or "1"
        else:
            m = _IMAG_ONLY.match(s)
            if m:
                im_tok = m.group(1) or "1"
            else:
                raise ParseError(text, _offending_token(s))
    re_val, f1 = _parse_real(re_tok, text) if re_tok else (Fraction(0), False)
    im_val, f2 = _parse_real(im_tok, text) if im_tok else (Fraction(0), False)
    if sign == "-":
        im_val = -im_val
    use_exact = not (f1 or f2) if exact is None else exact
    if use_exact:
        return RationalComplex(re_val, im_val)
    return complex(float(re_val), float(im_val))


def _offending_token(s: str) -> str:
    # longest prefix that still looks like a literal; the rest is the culprit
    ok = re.match(rf"^[+-]?(?:{_NUM})?(?:[+-](?:{_NUM})?[ij])?", s)
    end = ok.end() if ok else 0
    if end >= len(s):
        return s
    rest = s[end:]
    tok = re.match(r"[^+-]*", rest[1:] if rest[0] in "+-" else rest).group(0)
    return (rest[0] + tok) if rest[0] in "+-" else (tok or rest[0])


def _fmt_real(v) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return str(v)
    return repr(float(v))


def format_complex(z) -> str:
    """Serialize in the literal syntax accepted by ``parse_complex``."""
    x, y = real_imag(z)
    if is_exact(z):
        x, y = Fraction(x), Fraction(y)
        neg = y < 0
    else:
        x, y = float(x) + 0.0, float(y) + 0.0
        neg = math.copysign(1.0, y) < 0
    ys = _fmt_real(-y if neg else y)
    return f"{_fmt_real(x)}{'-' if neg else '+'}{ys}i"
