"""
(α, β) 平面上的 tilt 斜率与数值墙。

全部用 t = α² 参数化，墙的方程是 t 和 β 的多项式，判定都在平方上做，不开根号。
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Tuple

from stabwall.core_lattice import (
    ChernSurface,
    Rational,
    SurfaceData,
    delta_bar,
    format_rational,
    line_bundle,
    twist_surface,
)
from stabwall.errors import NonpositiveT, RankZero
from utils.log_manager import get_logger

logger = get_logger('tilt')


class SlopeKind(Enum):
    FINITE = "finite"
    POSITIVE_INFINITY = "positiveInfinity"


@total_ordering
@dataclass(frozen=True)
class SlopeValue:
    kind: SlopeKind
    value: Optional[Fraction] = None

    @classmethod
    def finite(cls, value: Rational) -> "SlopeValue":
        return cls(SlopeKind.FINITE, Fraction(value))

    @classmethod
    def infinity(cls) -> "SlopeValue":
        return cls(SlopeKind.POSITIVE_INFINITY)

    @property
    def is_infinite(self) -> bool:
        return self.kind is SlopeKind.POSITIVE_INFINITY

    def __lt__(self, other: "SlopeValue") -> bool:
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.value < other.value

    def to_json(self):
        return "+inf" if self.is_infinite else format_rational(self.value)


class Ordering(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class WallKind(Enum):
    CIRCLE = "circle"
    VERTICAL = "vertical"
    EMPTY = "empty"
    EVERYWHERE = "everywhere"


class WallRelation(Enum):
    EQUAL = "equal"
    NESTED = "nested"
    DISJOINT = "disjoint"
    INTERSECTING = "intersecting"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class Wall:
    """数值墙：半圆 (center, radius_sq)、竖直线 beta、空集或处处"""
    kind: WallKind
    center: Optional[Fraction] = None
    radius_sq: Optional[Fraction] = None
    beta: Optional[Fraction] = None

    @classmethod
    def circle(cls, center: Rational, radius_sq: Rational) -> "Wall":
        radius_sq = Fraction(radius_sq)
        if radius_sq <= 0:
            return cls.empty()
        return cls(WallKind.CIRCLE, center=Fraction(center), radius_sq=radius_sq)

    @classmethod
    def vertical(cls, beta: Rational) -> "Wall":
        return cls(WallKind.VERTICAL, beta=Fraction(beta))

    @classmethod
    def empty(cls) -> "Wall":
        return cls(WallKind.EMPTY)

    @classmethod
    def everywhere(cls) -> "Wall":
        return cls(WallKind.EVERYWHERE)

    @property
    def is_circle(self) -> bool:
        return self.kind is WallKind.CIRCLE

    def to_json(self) -> dict:
        payload = {"kind": self.kind.value}
        if self.is_circle:
            payload["center"] = format_rational(self.center)
            payload["radius_sq"] = format_rational(self.radius_sq)
        elif self.kind is WallKind.VERTICAL:
            payload["beta"] = format_rational(self.beta)
        return payload

    def __str__(self) -> str:
        if self.is_circle:
            return f"circle({format_rational(self.center)}, {format_rational(self.radius_sq)})"
        if self.kind is WallKind.VERTICAL:
            return f"vertical({format_rational(self.beta)})"
        return self.kind.value


def _check_t(t: Fraction):
    if t <= 0:
        raise NonpositiveT(f"t = α² 必须为正: {format_rational(t)}")


def tilt_charge(v: ChernSurface, t: Rational, beta: Rational, S: SurfaceData) -> Tuple[Fraction, Fraction]:
    """Z_{α,β}(v) = -ch₂^β + (tH²/2)ch₀ + i·H²c^β，虚部去掉正因子 α"""
    t = Fraction(t)
    tw = twist_surface(v, beta, S)
    re = -tw.d + t * S.h_squared * tw.r / 2
    im = S.h_squared * tw.c
    return re, im


def tilt_slope(v: ChernSurface, t: Rational, beta: Rational, S: SurfaceData) -> SlopeValue:
    t = Fraction(t)
    _check_t(t)
    re, im = tilt_charge(v, t, beta, S)
    if im == 0:
        return SlopeValue.infinity()
    return SlopeValue.finite(-re / im)


def compare_tilt_slopes(v: ChernSurface, w: ChernSurface, t: Rational, beta: Rational,
                        S: SurfaceData) -> Ordering:
    """交叉相乘比较 ν(v) 与 ν(w)，不做除法"""
    t = Fraction(t)
    _check_t(t)
    re_v, im_v = tilt_charge(v, t, beta, S)
    re_w, im_w = tilt_charge(w, t, beta, S)
    if im_v == 0 and im_w == 0:
        return Ordering.EQUAL
    if im_v == 0:
        return Ordering.GREATER
    if im_w == 0:
        return Ordering.LESS
    # ν = -re/im；ν_v - ν_w 与 (re_w·im_v - re_v·im_w)·im_v·im_w 同号
    diff = (re_w * im_v - re_v * im_w) * im_v * im_w
    if diff > 0:
        return Ordering.GREATER
    if diff < 0:
        return Ordering.LESS
    return Ordering.EQUAL


def numerical_wall(v: ChernSurface, w: ChernSurface, S: SurfaceData) -> Wall:
    """解 R - Qβ + (H²P/2)(t + β²) = 0"""
    h = S.h_squared
    P = v.c * w.r - w.c * v.r
    Q = v.d * w.r - w.d * v.r
    R = v.d * w.c - w.d * v.c
    if P != 0:
        center = Q / (h * P)
        radius_sq = center * center - 2 * R / (h * P)
        wall = Wall.circle(center, radius_sq)
        if wall.is_circle:
            _check_wall_identity(v, wall, S)
        return wall
    if Q != 0:
        return Wall.vertical(R / Q)
    if R == 0:
        return Wall.everywhere()
    return Wall.empty()


def _check_wall_identity(v: ChernSurface, wall: Wall, S: SurfaceData):
    # (H²ch₀)²ρ² + Δ̄ = (H²ch₀·s - H·ch₁)²
    h = S.h_squared
    lhs = (h * v.r) ** 2 * wall.radius_sq + delta_bar(v, S)
    rhs = (h * v.r * wall.center - h * v.c) ** 2
    assert lhs == rhs, f"墙的恒等式不成立: v={v}, wall={wall}"


def vertical_wall(v: ChernSurface, S: SurfaceData) -> Fraction:
    if v.r == 0:
        raise RankZero(f"秩零的类 {v} 没有竖直墙")
    return v.c / v.r


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sum_sq_vs(a_sq: Fraction, b_sq: Fraction, d_sq: Fraction, plus: bool) -> int:
    """d² 与 (a ± b)² 比较的符号，a, b ≥ 0 只给出平方"""
    # (a ± b)² = a² + b² ± 2ab
    k = d_sq - a_sq - b_sq
    cross_sq = 4 * a_sq * b_sq
    if plus:
        # d² - (a+b)² = k - 2ab
        if k <= 0:
            return -1 if (k < 0 or cross_sq > 0) else 0
        return _sign(k * k - cross_sq)
    # d² - (a-b)² = k + 2ab
    if k >= 0:
        return 1 if (k > 0 or cross_sq > 0) else 0
    return _sign(cross_sq - k * k)


def wall_relation(w1: Wall, w2: Wall) -> WallRelation:
    if w1 == w2:
        return WallRelation.EQUAL
    if not (w1.is_circle and w2.is_circle):
        return WallRelation.DEGENERATE
    d_sq = (w1.center - w2.center) ** 2
    # 外切和内切只在 β 轴上相交，上半平面里不算相交
    if _sum_sq_vs(w1.radius_sq, w2.radius_sq, d_sq, plus=True) >= 0:
        return WallRelation.DISJOINT
    if _sum_sq_vs(w1.radius_sq, w2.radius_sq, d_sq, plus=False) <= 0:
        return WallRelation.NESTED
    return WallRelation.INTERSECTING


def wall_t_at(wall: Wall, beta: Rational) -> Fraction:
    """半圆在 β 处的 t 坐标，非正表示 β 不在墙下"""
    beta = Fraction(beta)
    return wall.radius_sq - (beta - wall.center) ** 2


def hyperbola_t(v: ChernSurface, beta: Rational, S: SurfaceData) -> Fraction:
    """Re Z_{t,β}(v) = 0 的解 t = 2ch₂^β/(H²ch₀)，半圆墙的顶点都在这条双曲线上"""
    if v.r == 0:
        raise RankZero(f"秩零的类 {v} 没有双曲线 Re Z = 0")
    tw = twist_surface(v, beta, S)
    return 2 * tw.d / (S.h_squared * tw.r)


def linear_nonneg_on_span(c: Fraction, r: Fraction, wall: Wall) -> bool:
    """c - βr ≥ 0 对墙的整个 β 区间 [s-ρ, s+ρ] 成立"""
    if wall.kind is WallKind.VERTICAL:
        return c - wall.beta * r >= 0
    if r == 0:
        return c >= 0
    root = c / r
    if r > 0:
        gap = root - wall.center
    else:
        gap = wall.center - root
    return gap >= 0 and gap * gap >= wall.radius_sq


def heart_holds_along(x: ChernSurface, wall: Wall) -> bool:
    """x 沿整面墙都满足 H·ch₁^β ≥ 0"""
    return linear_nonneg_on_span(x.c, x.r, wall)


def kodaira_wall(S: SurfaceData) -> Wall:
    """O 与 O(-H)[1] 之间的墙"""
    return numerical_wall(ChernSurface(1, 0, 0), line_bundle(-1, S), S)


def disc_strictly_inside(inner: Wall, outer: Wall) -> bool:
    """inner 的闭半圆盘含在 outer 的开半圆盘里：|s₁-s₂| + ρ₁ < ρ₂"""
    if not (inner.is_circle and outer.is_circle):
        return False
    if inner.radius_sq >= outer.radius_sq:
        return False
    d_sq = (inner.center - outer.center) ** 2
    return _sum_sq_vs(inner.radius_sq, outer.radius_sq, d_sq, plus=False) < 0
