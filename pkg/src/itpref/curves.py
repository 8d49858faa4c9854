"""Strictly increasing utility curves.

Every curve is total on the reals, normalized to pass through the origin, and
invertible: identity, linear, exponential and signed power curves invert in
closed form, piecewise-linear curves by segment arithmetic, and anything else
falls back to bracketed bisection with geometric bracket expansion.

Piecewise-linear curves may carry explicit jump points (distinct left/right
limits) so the discontinuity machinery downstream is non-vacuous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

Number = Union[int, float, Fraction]

INVERT_TOL = 1e-12      # default inversion tolerance, on the utility scale
MAX_BISECT = 200
NORM_TOL = 1e-12        # |u(0)| allowed


class RangeError(ValueError):
    """Inversion target outside the closure of the curve's range."""


class GapError(ValueError):
    """Inversion target falls in a jump gap of the curve."""


def fmt_number(x: Number) -> str:
    """Canonical text form: ints bare, Fractions as p/q, floats via repr."""
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


@dataclass(frozen=True)
class Jump:
    """A discontinuity point: left limit, attained value, right limit."""

    x: Number
    left: Number
    value: Number
    right: Number

    @property
    def has_gap(self) -> bool:
        return self.right > self.left


@dataclass(frozen=True)
class Inversion:
    x: Number
    in_gap: bool = False


class MonotoneCurve:
    """Base class; subclasses implement ``__call__`` and usually a closed-form
    ``invert_detailed``."""

    def __call__(self, x: Number) -> Number:
        raise NotImplementedError

    def invert(self, y: Number, tol: float = INVERT_TOL) -> Number:
        return self.invert_detailed(y, tol).x

    def invert_detailed(self, y: Number, tol: float = INVERT_TOL) -> Inversion:
        return self._bisect_invert(y, tol)

    def jumps(self) -> tuple[Jump, ...]:
        return ()

    # open range bounds; inversion targets must lie strictly inside
    def range_inf(self) -> float:
        return -math.inf

    def range_sup(self) -> float:
        return math.inf

    def check_in_range(self, y: Number) -> None:
        if not self.range_inf() < y < self.range_sup():
            raise RangeError(
                f"target {y!r} outside the range ({fmt_number(self.range_inf())}, "
                f"{fmt_number(self.range_sup())}) of {self.spec()}"
            )

    def spec(self) -> str:
        raise NotImplementedError

    def _bisect_invert(self, y: Number, tol: float) -> Inversion:
        """Bracketed bisection; bracket [-1, 1] doubled until it straddles y."""
        self.check_in_range(y)
        lo, hi = -1.0, 1.0
        for _ in range(MAX_BISECT):
            if self(lo) <= y:
                break
            lo *= 2
        for _ in range(MAX_BISECT):
            if self(hi) >= y:
                break
            hi *= 2
        if self(lo) > y or self(hi) < y:
            raise RangeError(f"no bracket found for target {y!r} under {self.spec()}")
        for _ in range(MAX_BISECT):
            mid = 0.5 * (lo + hi)
            v = self(mid)
            if abs(v - y) <= tol:
                return Inversion(mid)
            if v < y:
                lo = mid
            else:
                hi = mid
        mid = 0.5 * (lo + hi)
        # a persistent residual means y sits inside a jump gap at mid
        return Inversion(mid, in_gap=abs(self(mid) - y) > tol)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"{type(self).__name__}({self.spec()})"


@dataclass(frozen=True)
class IdentityCurve(MonotoneCurve):
    def __call__(self, x: Number) -> Number:
        return x

    def invert_detailed(self, y: Number, tol: float = INVERT_TOL) -> Inversion:
        return Inversion(y)

    def spec(self) -> str:
        return "identity"


@dataclass(frozen=True)
class LinearCurve(MonotoneCurve):
    slope: Number

    def __post_init__(self) -> None:
        if not self.slope > 0:
            raise ValueError("linear curve needs slope > 0")

    def __call__(self, x: Number) -> Number:
        return self.slope * x

    def invert_detailed(self, y: Number, tol: float = INVERT_TOL) -> Inversion:
        return Inversion(y / self.slope)

    def spec(self) -> str:
        return f"linear({fmt_number(self.slope)})"


@dataclass(frozen=True)
class ExponentialCurve(MonotoneCurve):
    """u(x) = (1 - e^{-a x}) / a, bounded above by 1/a."""

    a: float

    def __post_init__(self) -> None:
        if not self.a > 0:
            raise ValueError("exponential curve needs risk parameter a > 0")

    def __call__(self, x: Number) -> float:
        z = -self.a * float(x)
        if z > 700.0:  # saturate: exp would overflow; only comparisons see this
            return -math.inf
        return -math.expm1(z) / self.a

    def invert_detailed(self, y: Number, tol: float = INVERT_TOL) -> Inversion:
        self.check_in_range(y)
        return Inversion(-math.log1p(-self.a * float(y)) / self.a)

    def range_sup(self) -> float:
        return 1.0 / self.a

    def spec(self) -> str:
        return f"exp({fmt_number(self.a)})"


@dataclass(frozen=True)
class PowerCurve(MonotoneCurve):
    """Signed power u(x) = sign(x) |x|^p, through the origin."""

    p: float

    def __post_init__(self) -> None:
        if not self.p > 0:
            raise ValueError("power curve needs exponent p > 0")

    def __call__(self, x: Number) -> float:
        xf = float(x)
        return math.copysign(abs(xf) ** self.p, xf) if xf != 0 else 0.0

    def invert_detailed(self, y: Number, tol: float = INVERT_TOL) -> Inversion:
        yf = float(y)
        if yf == 0:
            return Inversion(0.0)
        return Inversion(math.copysign(abs(yf) ** (1.0 / self.p), yf))

    def spec(self) -> str:
        return f"power({fmt_number(self.p)})"


@dataclass(frozen=True)
class PiecewiseLinearCurve(MonotoneCurve):
    """Piecewise-linear curve given by anchors (x, left, value, right).

    Between anchors the curve interpolates linearly from one anchor's right
    limit to the next anchor's left limit; the first and last segment slopes
    extend to -inf and +inf.  Anchors with left < right are jump points.
    """

    anchors: tuple[tuple[Number, Number, Number, Number], ...]

    def __post_init__(self) -> None:
        if len(self.anchors) < 2:
            raise ValueError("piecewise-linear curve needs at least two anchors")
        xs = [a[0] for a in self.anchors]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("anchor abscissae must be strictly increasing")
        for x, l, v, r in self.anchors:
            if not l <= v <= r:
                raise ValueError(f"anchor at {x!r} needs left <= value <= right")

    @classmethod
    def from_points(
        cls, points: Sequence[Sequence[Number]], strict: bool = True
    ) -> "PiecewiseLinearCurve":
        """Build from (x, y) pairs and (x, left, value, right) jump quadruples."""
        anchors = []
        for pt in points:
            if len(pt) == 2:
                x, y = pt
                anchors.append((x, y, y, y))
            elif len(pt) == 4:
                anchors.append(tuple(pt))
            else:
                raise ValueError("points must be (x,y) or (x,left,value,right)")
        curve = cls(tuple(anchors))
        if abs(curve(0)) > NORM_TOL:
            raise ValueError(f"curve is not normalized: u(0) = {curve(0)!r}")
        if strict:
            for i, s in enumerate(curve._segment_slopes()):
                if not s > 0:
                    raise ValueError(f"segment {i} slope {s!r} is not positive")
        return curve

    @cached_property
    def _slopes(self) -> tuple[Number, ...]:
        return tuple(
            (l1 - r0) / (x1 - x0)
            for (x0, _, _, r0), (x1, l1, _, _) in zip(self.anchors, self.anchors[1:])
        )

    def _segment_slopes(self) -> tuple[Number, ...]:
        return self._slopes

    def __call__(self, x: Number) -> Number:
        first, last = self.anchors[0], self.anchors[-1]
        slopes = self._slopes
        if x < first[0]:
            return first[1] + slopes[0] * (x - first[0])
        if x > last[0]:
            return last[3] + slopes[-1] * (x - last[0])
        for i, a in enumerate(self.anchors):
            if x == a[0]:
                return a[2]
            if i + 1 < len(self.anchors) and x < self.anchors[i + 1][0]:
                return a[3] + slopes[i] * (x - a[0])
        raise AssertionError("unreachable")  # pragma: no cover

    def invert_detailed(self, y: Number, tol: float = INVERT_TOL) -> Inversion:
        slopes = self._slopes
        first = self.anchors[0]
        if y < first[1]:
            return Inversion(first[0] + (y - first[1]) / slopes[0])
        for i, (x, l, v, r) in enumerate(self.anchors):
            if y <= r:
                # inside this anchor's band [left, right]
                in_gap = r > l and abs(y - v) > tol
                return Inversion(x, in_gap)
            if i + 1 < len(self.anchors) and y < self.anchors[i + 1][1]:
                return Inversion(x + (y - r) / slopes[i])
        last = self.anchors[-1]
        return Inversion(last[0] + (y - last[3]) / slopes[-1])

    def jumps(self) -> tuple[Jump, ...]:
        return tuple(
            Jump(x, l, v, r) for x, l, v, r in self.anchors if r > l
        )

    def spec(self) -> str:
        parts = []
        for x, l, v, r in self.anchors:
            if l == v == r:
                parts.append(f"({fmt_number(x)},{fmt_number(v)})")
            else:
                parts.append(
                    f"({fmt_number(x)},{fmt_number(l)},{fmt_number(v)},{fmt_number(r)})"
                )
        return "pl(" + ",".join(parts) + ")"


@dataclass(frozen=True)
class ArgScaledCurve(MonotoneCurve):
    """x -> base(b x); the numeraire composition u*(x) = u(x B)."""

    base: MonotoneCurve
    b: Number

    def __post_init__(self) -> None:
        if not self.b > 0:
            raise ValueError("argument scale must be positive")

    def __call__(self, x: Number) -> Number:
        return self.base(x * self.b)

    def invert_detailed(self, y: Number, tol: float = INVERT_TOL) -> Inversion:
        inner = self.base.invert_detailed(y, tol)
        return Inversion(inner.x / self.b, inner.in_gap)

    def jumps(self) -> tuple[Jump, ...]:
        return tuple(Jump(j.x / self.b, j.left, j.value, j.right) for j in self.base.jumps())

    def range_inf(self) -> float:
        return self.base.range_inf()

    def range_sup(self) -> float:
        return self.base.range_sup()

    def spec(self) -> str:
        return f"ascaled({self.base.spec()},{fmt_number(self.b)})"


@dataclass(frozen=True)
class ValueScaledCurve(MonotoneCurve):
    """x -> k base(x); the density-rescaled utility delta * u."""

    base: MonotoneCurve
    k: Number

    def __post_init__(self) -> None:
        if not self.k > 0:
            raise ValueError("value scale must be positive")

    def __call__(self, x: Number) -> Number:
        return self.k * self.base(x)

    def invert_detailed(self, y: Number, tol: float = INVERT_TOL) -> Inversion:
        return self.base.invert_detailed(y / self.k, tol)

    def jumps(self) -> tuple[Jump, ...]:
        return tuple(
            Jump(j.x, self.k * j.left, self.k * j.value, self.k * j.right)
            for j in self.base.jumps()
        )

    def range_inf(self) -> float:
        lo = self.base.range_inf()
        return lo if math.isinf(lo) else float(self.k) * lo

    def range_sup(self) -> float:
        hi = self.base.range_sup()
        return hi if math.isinf(hi) else float(self.k) * hi

    def spec(self) -> str:
        return f"vscaled({self.base.spec()},{fmt_number(self.k)})"
