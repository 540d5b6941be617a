"""Exact arithmetic on quantized phase grids.

Angles are stored as exact rationals in units of *turns* (fractions of a full
2*pi rotation), so grid membership, lifting and modular addition are exact
statements rather than floating-point approximations.  Radians appear only at
the boundary to numerical code (:func:`RationalAngle.radians`,
:func:`snap_to_grid`, :func:`winding_decompose`).

The grid of order ``a`` is the cyclic set ``{n/a turns}``; a phase is
*grid-compliant* with ``a`` when its reduced denominator divides ``a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import GridOverflow, NotARefinement

TWO_PI = 2.0 * math.pi

# Default cap on grid orders produced by LCM refinement.  Exceeding the cap
# raises GridOverflow rather than silently truncating.
GRID_ORDER_CAP = 1 << 20


def check_grid_order(a: int) -> int:
    if not isinstance(a, int) or isinstance(a, bool) or a < 1:
        raise ValueError(f"grid order must be a positive integer, got {a!r}")
    return a


@dataclass(frozen=True)
class RationalAngle:
    """An exact fraction of a full turn (or an exact rational winding count).

    Always stored in reduced form with a positive denominator, so equality is
    structural: two equal angles compare equal as dataclasses.
    """

    num: int
    den: int = 1

    def __post_init__(self) -> None:
        num, den = self.num, self.den
        if den == 0:
            raise ZeroDivisionError("RationalAngle denominator must be nonzero")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_fraction(cls, f: Fraction) -> RationalAngle:
        return cls(f.numerator, f.denominator)

    @classmethod
    def from_float(cls, x: float) -> RationalAngle:
        """Exact (dyadic) rational value of the float ``x``."""
        return cls.from_fraction(Fraction(x))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def radians(self) -> float:
        return TWO_PI * self.num / self.den

    def is_grid_compliant(self, a: int) -> bool:
        return check_grid_order(a) % self.den == 0

    def index_on(self, a: int) -> int:
        """Integer index ``n`` with ``self == n/a`` turns.

        Raises NotARefinement when the angle does not lie on the grid.
        """
        check_grid_order(a)
        if a % self.den != 0:
            raise NotARefinement(f"{self} does not lie on the order-{a} grid")
        return self.num * (a // self.den)

    def mod1(self) -> RationalAngle:
        """Reduce into the fundamental domain [0, 1) turns."""
        f = self.fraction % 1
        return RationalAngle.from_fraction(f)

    def __add__(self, other: RationalAngle) -> RationalAngle:
        return RationalAngle.from_fraction(self.fraction + other.fraction)

    def __sub__(self, other: RationalAngle) -> RationalAngle:
        return RationalAngle.from_fraction(self.fraction - other.fraction)

    def __neg__(self) -> RationalAngle:
        return RationalAngle(-self.num, self.den)

    def __bool__(self) -> bool:
        return self.num != 0

    def to_json(self) -> dict:
        return {"num": self.num, "den": self.den}

    @classmethod
    def from_json(cls, obj: dict) -> RationalAngle:
        return cls(int(obj["num"]), int(obj["den"]))

    def __str__(self) -> str:
        return f"{self.num}/{self.den}" if self.den != 1 else str(self.num)


ZERO = RationalAngle(0)


@dataclass(frozen=True)
class SpiderLabel:
    """The (a, alpha, k) triple carried by a weighted spider.

    ``grid`` is the local grid order, ``alpha`` the base phase in turns and
    ``winding`` the winding index k (a pure count, not an angle; rational
    because fractional windings such as 1/2 occur at orbifold points).
    Grid compliance of alpha and winding is a checkable predicate, not a
    construction constraint, so off-grid labels (e.g. raw continuous phases)
    are representable.
    """

    grid: int
    alpha: RationalAngle = ZERO
    winding: RationalAngle = ZERO

    def __post_init__(self) -> None:
        check_grid_order(self.grid)

    def is_grid_compliant(self) -> bool:
        return (
            self.alpha.is_grid_compliant(self.grid)
            and self.winding.is_grid_compliant(self.grid)
        )

    def has_integer_winding(self) -> bool:
        return self.winding.den == 1

    def to_json(self) -> dict:
        return {"a": self.grid, "alpha": self.alpha.to_json(), "k": self.winding.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> SpiderLabel:
        return cls(
            int(obj["a"]),
            RationalAngle.from_json(obj["alpha"]),
            RationalAngle.from_json(obj["k"]),
        )


@dataclass(frozen=True)
class TotalAngle:
    """A phase reduced into [0, 1) turns; the part semantics can see."""

    turns: RationalAngle

    def __post_init__(self) -> None:
        if not (0 <= self.turns.fraction < 1):
            raise ValueError(f"TotalAngle must lie in [0, 1) turns, got {self.turns}")

    def radians(self) -> float:
        return self.turns.radians()

    def is_zero(self) -> bool:
        return self.turns.num == 0


def lcm_order(a: int, b: int, cap: int = GRID_ORDER_CAP) -> int:
    """LCM refinement of two grid orders; commutative, associative, idempotent."""
    check_grid_order(a)
    check_grid_order(b)
    out = math.lcm(a, b)
    if out > cap:
        raise GridOverflow(f"lcm({a}, {b}) = {out} exceeds grid-order cap {cap}")
    return out


def total_angle(label: SpiderLabel) -> TotalAngle:
    """alpha + k/a, reduced mod one turn, computed exactly."""
    k_turns = Fraction(label.winding.num, label.winding.den * label.grid)
    return TotalAngle(RationalAngle.from_fraction((label.alpha.fraction + k_turns) % 1))


def lift_to_grid(phase: RationalAngle, a: int, target: int) -> RationalAngle:
    """Embed a phase on the order-``a`` grid into the order-``target`` grid.

    The index is multiplied by target/a, which preserves the angle value
    exactly; in reduced form the returned rational equals the input.
    """
    check_grid_order(a)
    check_grid_order(target)
    if target % a != 0:
        raise NotARefinement(f"{a} does not divide {target}")
    n = phase.index_on(a)
    return RationalAngle(n * (target // a), target)


def add_on_lcm(
    alpha: RationalAngle, a: int, beta: RationalAngle, b: int, cap: int = GRID_ORDER_CAP
) -> RationalAngle:
    """Add two grid phases exactly; the result lies on the lcm(a, b) grid.

    Pure index arithmetic on the refined grid: i*(L/a) + j*(L/b) mod L.
    """
    target = lcm_order(a, b, cap=cap)
    i = alpha.index_on(a)
    j = beta.index_on(b)
    return RationalAngle((i * (target // a) + j * (target // b)) % target, target)


def snap_to_grid(theta: float, a: int) -> RationalAngle:
    """Nearest order-``a`` grid point to ``theta`` radians, as exact turns.

    Exact halfway ties round to the even grid index (banker's rounding).
    The residual |theta - snapped| never exceeds pi/a.
    """
    check_grid_order(a)
    if not math.isfinite(theta):
        raise ValueError("snap_to_grid requires a finite angle")
    n = round(a * theta / TWO_PI)
    return RationalAngle(n % a, a)


def winding_decompose(theta: float) -> tuple[float, int]:
    """Split an accumulated phase into (residual in [0, 2*pi), whole turns)."""
    if not math.isfinite(theta):
        raise ValueError("winding_decompose requires a finite angle")
    k = math.floor(theta / TWO_PI)
    return theta - TWO_PI * k, k


def monodromy_phase(w: RationalAngle, L: int) -> complex:
    """The holonomy e^{2*pi*i*w} of a winding class; an L-th root of unity."""
    check_grid_order(L)
    if not w.is_grid_compliant(L):
        raise NotARefinement(f"winding {w} is not a multiple of 1/{L}")
    # Reduce mod 1 first so the float argument stays small.
    r = w.mod1()
    return complex(math.cos(TWO_PI * r.num / r.den), math.sin(TWO_PI * r.num / r.den))
