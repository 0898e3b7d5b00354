"""Minus continued fractions over the Gaussian integers.

Given a choice function ``c`` (a map to Z[i] with ``c(0) = 0`` and
``|z - c(z)| <= 1``) the expansion of ``z`` is

    z_0 = z,   a_n = c(z_n),   z_{n+1} = -1 / (z_n - a_n)

and the convergents ``p_n / q_n`` follow

    p_n = a_n p_{n-1} - p_{n-2},   q_n = a_n q_{n-1} - q_{n-2}

from ``p_{-2} = 0, p_{-1} = 1, q_{-2} = -1, q_{-1} = 0``.

Exact inputs (``GaussianInt``, ``RationalComplex``, ``int``, ``Fraction``)
are expanded in exact arithmetic; float inputs are expanded in binary64.
An expansion stops when a remainder ``z_n`` is itself a Gaussian integer,
which then becomes the last digit (so ``z_n = a_n``). The choice function is
not consulted for that digit: with the closed diamond, c(5) = 4 and the
remainders of 5 would cycle through -1, 1, -1, ... forever.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import (GaussianInt, RationalComplex, format_complex, is_exact, real_imag,
                    sector, to_exact)
from .errors import CFDivisionByZero, NonTermination, OriginError
from .regions import Region

__all__ = [
    "ChoiceFunction", "HURWITZ", "DIAMOND", "choice_hurwitz", "choice_diamond", "choice_from_region",
    "f_empty", "in_phi_diamond", "Expansion", "ConvergentPair", "expand", "convergents",
    "cross_determinants", "evaluate_cf", "exact_remainders", "check_identity_residual", "ConvergenceReport",
    "convergence_report", "remainder_log_products", "expansion_to_json", "diamond_descent",
    "f_empty_steps",
]

PHI_EPS = 1e-12


# ---------------------------------------------------------------------------
# choice functions


def _ceil_half_down(v) -> int:
    # nearest integer, ties go to the smaller one
    if isinstance(v, (int, Fraction)):
        return math.ceil(Fraction(v) - Fraction(1, 2))
    return math.ceil(float(v) - 0.5)


def choice_hurwitz(z) -> GaussianInt:
    """Nearest Gaussian integer; half-integer coordinates round toward -infinity."""
    x, y = real_imag(z)
    if is_exact(z):
        x, y = Fraction(x), Fraction(y)
    return GaussianInt(_ceil_half_down(x), _ceil_half_down(y))


def f_empty(z):
    """One unit step toward the origin, chosen by the sector of ``arg z``."""
    s = sector(z)  # raises OriginError at 0
    step = {"E": GaussianInt(1), "N": GaussianInt(0, 1), "W": GaussianInt(-1), "S": GaussianInt(0, -1)}[s]
    if is_exact(z):
        return to_exact(z) - step
    return complex(z) - complex(step)


def _f_empty_step(z) -> GaussianInt:
    s = sector(z)
    return {"E": GaussianInt(1), "N": GaussianInt(0, 1), "W": GaussianInt(-1), "S": GaussianInt(0, -1)}[s]


def in_phi_diamond(z, eps: float = PHI_EPS) -> bool:
    """Closed diamond |Re z| + |Im z| <= 1 (float points get ``eps`` slack)."""
    x, y = real_imag(z)
    if is_exact(z):
        return abs(Fraction(x)) + abs(Fraction(y)) <= 1
    return abs(float(x)) + abs(float(y)) <= 1 + eps


def _budget(z) -> int:
    x, y = real_imag(z)
    return math.ceil(abs(x)) + math.ceil(abs(y)) + 2


def _descend(z, member, budget: int) -> tuple[GaussianInt, int]:
    exact = is_exact(z)
    w = to_exact(z) if exact else complex(z)
    shift = GaussianInt(0)
    steps = 0
    while not member(w):
        if steps >= budget:
            raise NonTermination(f"f_empty did not reach the fundamental set from {format_complex(z)} "
                                 f"within {budget} steps")
        s = _f_empty_step(w)
        w = w - s if exact else w - complex(s)
        shift = shift + s
        steps += 1
    return shift, steps


def _sector_frame(x: int, y: int) -> tuple[int, int, int, int]:
    """Unit step (dx, dy) of the sector of x + iy, and coordinates (u, v) in a
    frame rotated so that the step is (-1, 0) and the sector is -u <= v < u."""
    if x > 0 and -x <= y < x:
        return 1, 0, x, y
    if y > 0 and -y < x <= y:
        return 0, 1, y, -x
    if x < 0 and x < y <= -x:
        return -1, 0, -x, -y
    return 0, -1, -y, x


def _walk(P: int, Q: int, d: int, inside, budget: int, label) -> tuple[GaussianInt, int]:
    """Iterate f_empty on (P + iQ)/d until ``inside(P, Q)``; returns (total shift, steps).

    Long runs are taken in one move, each counted as the steps it replaces:
    a straight run inside one sector stops two steps short of leaving the
    sector or reaching the diamond, and a zigzag along a diagonal ray (two
    alternating perpendicular steps whose pair leaves the sector pattern
    unchanged) stops while both coordinates still exceed 1 in size. Inside
    an open quadrant the sector depends only on the quadrant and on the
    offset from the diagonal, which a zigzag pair preserves.
    """
    sx = sy = steps = 0
    prev = last = None   # sector steps two and one single steps back
    while not inside(P, Q):
        if steps >= budget:
            raise NonTermination(f"f_empty did not reach the diamond from {label} within {budget} steps")
        dx, dy, u, v = _sector_frame(P, Q)
        leave = min(-((v - u) // d), (u + v) // d + 1)
        arrive = -((d - u - abs(v)) // d)
        j = max(1, min(leave, arrive) - 2)
        if j == 1 and prev == (dx, dy) and last is not None and last[0] * dx + last[1] * dy == 0:
            k = min(abs(P), abs(Q)) // d - 2
            if k > 0:
                px, py = dx + last[0], dy + last[1]
                P, Q = P - k * px * d, Q - k * py * d
                sx, sy, steps = sx + k * px, sy + k * py, steps + 2 * k
                prev = last = None
                continue
        P, Q = P - j * dx * d, Q - j * dy * d
        sx, sy, steps = sx + j * dx, sy + j * dy, steps + j
        prev, last = (last if j == 1 else None), (dx, dy)
    return GaussianInt(sx, sy), steps


def _over_common_denominator(x: Fraction, y: Fraction) -> tuple[int, int, int]:
    d = x.denominator * y.denominator // math.gcd(x.denominator, y.denominator)
    return x.numerator * (d // x.denominator), y.numerator * (d // y.denominator), d


def diamond_descent(z, eps: float = PHI_EPS) -> tuple[GaussianInt, int]:
    """(c(z), number of f_empty steps) for the diamond fundamental set.

    Float input is walked on its exact binary value; below 2**52 every step
    of the float iteration is exact, so the two agree, and the float
    membership test (with ``eps`` slack) decides when to stop.
    """
    if is_exact(z):
        P, Q, d = _over_common_denominator(*(Fraction(v) for v in real_imag(to_exact(z))))
        return _walk(P, Q, d, lambda p, q: abs(p) + abs(q) <= d, _budget(z), format_complex(z))
    w = complex(z)
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise ValueError(f"non-finite input {w!r}")
    P, Q, d = _over_common_denominator(Fraction(w.real), Fraction(w.imag))
    bound = 1 + eps
    # int / int is correctly rounded, so abs(P) / d is the float coordinate itself
    return _walk(P, Q, d, lambda p, q: abs(p) / d + abs(q) / d <= bound, _budget(w), format_complex(w))


def choice_diamond(z, eps: float = PHI_EPS) -> GaussianInt:
    """c(z) = z - f_empty^N(z) for the least N with f_empty^N(z) in the diamond."""
    return diamond_descent(z, eps)[0]


def f_empty_steps(z, eps: float = PHI_EPS) -> int:
    """Number of f_empty steps needed to reach the diamond."""
    return diamond_descent(z, eps)[1]


def choice_from_region(z, phi: Region, eps: float = PHI_EPS, budget: int | None = None) -> GaussianInt:
    """Choice function induced by a fundamental set ``phi`` through f_empty descent.

    Termination is only checked at runtime (``NonTermination`` when the
    budget is exceeded).
    """
    b = _budget(z) if budget is None else budget
    return _descend(z, lambda w: phi.contains(w, eps=eps), b)[0]


@dataclass(frozen=True)
class ChoiceFunction:
    kind: str  # "hurwitz" | "diamond" | "custom"
    region: Region | None = None

    def __post_init__(self):
        if self.kind not in ("hurwitz", "diamond", "custom"):
            raise ValueError(f"unknown choice function {self.kind!r}")
        if (self.kind == "custom") != (self.region is not None):
            raise ValueError("a region is required exactly for custom choice functions")

    @staticmethod
    def custom(region: Region) -> "ChoiceFunction":
        return ChoiceFunction("custom", region)

    @staticmethod
    def by_name(name: str) -> "ChoiceFunction":
        return {"hurwitz": HURWITZ, "diamond": DIAMOND}[name.lower()]

    @property
    def name(self) -> str:
        return self.kind

    def __call__(self, z) -> GaussianInt:
        if self.kind == "hurwitz":
            return choice_hurwitz(z)
        if self.kind == "diamond":
            return choice_diamond(z)
        return choice_from_region(z, self.region)


HURWITZ = ChoiceFunction("hurwitz")
DIAMOND = ChoiceFunction("diamond")


# ---------------------------------------------------------------------------
# expansion and convergents


@dataclass
class Expansion:
    input: object
    algorithm: str
    digits: list = field(default_factory=list)
    remainders: list = field(default_factory=list)  # z_0 .. z_N (one past the last digit unless terminated)
    terminated: bool = False

    @property
    def exact(self) -> bool:
        return is_exact(self.input)

    def __len__(self):
        return len(self.digits)

    def min_tail_modulus(self) -> float:
        """min |z_n| over n >= 1, or inf when there is no such remainder."""
        tail = self.remainders[1:]
        return min((abs(complex(z)) for z in tail), default=math.inf)


@dataclass(frozen=True)
class ConvergentPair:
    p: GaussianInt
    q: GaussianInt
    index: int

    def value(self) -> RationalComplex:
        return RationalComplex(Fraction(self.p.re), Fraction(self.p.im)) / self.q


def expand(z, c: ChoiceFunction = None, max_steps: int = 40) -> Expansion:
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    c = DIAMOND if c is None else c
    exact = is_exact(z)
    zn = to_exact(z) if exact else complex(z)
    out = Expansion(input=z, algorithm=c.name, remainders=[zn])
    for _ in range(max_steps):
        a = _terminal_digit(zn)
        if a is not None:
            out.digits.append(a)
            out.terminated = True
            break
        a = c(zn)
        out.digits.append(a)
        d = zn - a if exact else zn - complex(a)
        if d == 0:
            out.terminated = True
            break
        zn = -1 / d
        if not exact and not (math.isfinite(zn.real) and math.isfinite(zn.imag)):
            break  # remainder overflowed; the digits so far stand
        out.remainders.append(zn)
    return out


def _terminal_digit(z) -> GaussianInt | None:
    x, y = real_imag(z)
    if isinstance(x, float):
        if x.is_integer() and y.is_integer():
            return GaussianInt(int(x), int(y))
        return None
    if Fraction(x).denominator == 1 and Fraction(y).denominator == 1:
        return GaussianInt(int(x), int(y))
    return None


def convergents(digits: Sequence[GaussianInt], include_seeds: bool = False) -> list[ConvergentPair]:
    """Exact convergents p_n, q_n for n = 0..len(digits)-1 (from n = -2 with seeds)."""
    p2, p1 = GaussianInt(0), GaussianInt(1)
    q2, q1 = GaussianInt(-1), GaussianInt(0)
    out = [ConvergentPair(p2, q2, -2), ConvergentPair(p1, q1, -1)] if include_seeds else []
    for n, a in enumerate(digits):
        a = a if isinstance(a, GaussianInt) else GaussianInt(*real_imag(a))
        p, q = a * p1 - p2, a * q1 - q2
        out.append(ConvergentPair(p, q, n))
        p2, p1, q2, q1 = p1, p, q1, q
    return out


def cross_determinants(digits: Sequence[GaussianInt]) -> list[GaussianInt]:
    """p_n q_{n-1} - p_{n-1} q_n for n = -1..len(digits)-1."""
    cs = convergents(digits, include_seeds=True)
    return [b.p * a.q - a.p * b.q for a, b in zip(cs, cs[1:])]


def evaluate_cf(digits: Sequence, tail=None):
    """Backward evaluation of a0 - 1/(a1 - 1/(... - 1/an)).

    With ``tail`` the last denominator is ``a_n - 1/tail``. The result is
    exact when every digit (and the tail) is exact, a complex otherwise.
    """
    if not digits:
        raise ValueError("empty digit list")
    exact = all(is_exact(a) for a in digits) and (tail is None or is_exact(tail))
    conv = to_exact if exact else complex
    vals = [conv(a) for a in digits]
    v = None if tail is None else conv(tail)
    for depth in range(len(vals) - 1, -1, -1):
        if v is None:
            v = vals[depth]
            continue
        if v == 0:
            raise CFDivisionByZero(depth + 1)
        v = vals[depth] - 1 / v
    return v


# ---------------------------------------------------------------------------
# numerical checks


def _exact_gap(pair: ConvergentPair, z) -> RationalComplex:
    # p_n - q_n z with z read as the exact rational it stores
    zz = to_exact(z)
    return RationalComplex(Fraction(pair.p.re), Fraction(pair.p.im)) - zz * pair.q


def exact_remainders(z, digits: Sequence[GaussianInt], count: int) -> list[RationalComplex]:
    """z_0 .. z_{count-1} recomputed in Q(i) from the stored value of ``z``."""
    zn = to_exact(z)
    out = [zn]
    for a in digits[: count - 1]:
        d = zn - a
        if d == 0:
            break
        zn = -1 / d
        out.append(zn)
    return out


def check_identity_residual(z, expansion: Expansion, n: int,
                            pairs: Sequence[ConvergentPair] | None = None,
                            exact_remainders_: bool = True) -> float:
    """|p_n - q_n z - 1/(z_1 ... z_{n+1})|.

    p_n - q_n z is computed exactly from the stored value of ``z``. By
    default the remainders are recomputed exactly as well, from the digits
    of the expansion: the identity holds for any digit sequence, while the
    binary64 remainders drift from the true ones by roughly
    eps * |z_1 ... z_n|^2. Pass ``exact_remainders_=False`` to measure
    against the stored float remainders instead.
    """
    if not 0 <= n < len(expansion.digits):
        raise IndexError(f"n={n} outside expansion of length {len(expansion.digits)}")
    pairs = convergents(expansion.digits[: n + 1]) if pairs is None else pairs
    gap = _exact_gap(pairs[n], z)
    if expansion.exact or exact_remainders_:
        rem = exact_remainders(z, expansion.digits, n + 2)
    else:
        rem = expansion.remainders[: n + 2]
    if len(rem) < n + 2:
        # terminated: z_{n+1} is infinite and the identity reads p_n - q_n z = 0
        return abs(complex(gap))
    if expansion.exact or exact_remainders_:
        prod = RationalComplex(Fraction(1), Fraction(0))
        for w in rem[1:]:
            prod = prod * w
        return abs(complex(gap - 1 / prod))
    prod = complex(1)
    for w in rem[1:]:
        prod *= w
    return abs(complex(gap) - 1 / prod)


@dataclass
class ConvergenceReport:
    errors: list[float]
    q_norms: list[float]
    digits: list[GaussianInt]
    q_nonzero: bool

    def first_index(self, err_tol: float = 1e-8, q_min: float = 1e6) -> int | None:
        """Least n with |p_n/q_n - z| < err_tol and |q_n| > q_min."""
        for n, (e, q) in enumerate(zip(self.errors, self.q_norms)):
            if e < err_tol and q > q_min:
                return n
        return None


def convergence_report(z, c: ChoiceFunction = None, steps: int = 60) -> ConvergenceReport:
    exp = expand(z, c, steps)
    pairs = convergents(exp.digits)
    errors, qn = [], []
    nonzero = True
    for pr in pairs:
        if pr.q == 0:
            nonzero = False
            errors.append(math.inf)
            qn.append(0.0)
            continue
        gap = _exact_gap(pr, z)
        qabs = abs(pr.q)
        errors.append(abs(complex(gap)) / qabs)
        qn.append(qabs)
    return ConvergenceReport(errors, qn, exp.digits, nonzero)


def remainder_log_products(expansion: Expansion) -> list[float]:
    """log|z_1 ... z_n| for n = 1, 2, ..."""
    out, acc = [], 0.0
    for w in expansion.remainders[1:]:
        acc += math.log(abs(complex(w)))
        out.append(acc)
    return out


def expansion_to_json(expansion: Expansion, with_convergents: bool = True,
                      with_residuals: bool = True) -> dict:
    d = {
        "input": format_complex(expansion.input),
        "algorithm": expansion.algorithm,
        "digits": [format_complex(a) for a in expansion.digits],
        "remainders": [format_complex(w) for w in expansion.remainders],
        "terminated": expansion.terminated,
    }
    pairs = convergents(expansion.digits)
    if with_convergents:
        d["convergents"] = [{"p": format_complex(pr.p), "q": format_complex(pr.q)} for pr in pairs]
    if with_residuals:
        d["residuals"] = [check_identity_residual(expansion.input, expansion, n, pairs)
                          for n in range(len(expansion.digits))]
    return d
