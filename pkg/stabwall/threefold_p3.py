"""
P³ 上的 tilt 稳定性：次数 3 截断的 Chern 环、Q_{α,β} 二次型、第二次 tilt 的中心荷、
二次域里的 β̄，以及 Castelnuovo 亏格界的排除流程。

H³ = 1，类记作 (ch₀, ch₁, ch₂, ch₃)；低三项直接复用曲面上的 tilt 平面（H² = 1）。
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import List, Optional, Tuple, Union

from stabwall.core_lattice import ChernSurface, Rational, SurfaceData, format_rational, parse_rational
from stabwall.errors import (
    DegenerateDelta,
    InvalidDegree,
    MixedRadicand,
    NonpositiveS,
    NonpositiveT,
    ParseError,
    UndefinedBetaBar,
    WrongShape,
)
from stabwall.tilt_plane import (
    SlopeValue,
    Wall,
    WallKind,
    disc_strictly_inside,
    heart_holds_along,
    numerical_wall,
    tilt_slope,
)
from stabwall.wall_enum import higher_rank_radius_bound
from utils.log_manager import get_logger

logger = get_logger('p3')

# P³ 的低三项看作 H² = 1 的“曲面”，只用于墙和斜率
P3_PLANE = SurfaceData(name="p3_plane", h_squared=1, h_dot_k=-4, chi_o=1, a=1)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@lru_cache(maxsize=256)
def _squarefree_split(n: int) -> Tuple[int, int]:
    """n = s²·d，d 无平方因子"""
    s, d, k = 1, n, 2
    while k * k <= d:
        while d % (k * k) == 0:
            d //= k * k
            s *= k
        k += 1
    return s, d


@total_ordering
class QuadraticNumber:
    """p + q√D，D 是无平方因子的非负整数；不同 √D 之间不做运算"""
    __slots__ = ('p', 'q', 'D')

    def __init__(self, p: Rational, q: Rational = 0, D: int = 0):
        if D < 0:
            raise ValueError(f"D 必须非负: {D}")
        p, q, D = Fraction(p), Fraction(q), int(D)
        if D and q:
            s, D = _squarefree_split(D)
            q *= s
            if D == 1:
                p, q = p + q, Fraction(0)
        if D == 0 or q == 0:
            q, D = Fraction(0), 0
        self.p = p
        self.q = q
        self.D = D

    @classmethod
    def sqrt_of(cls, value: Rational) -> "QuadraticNumber":
        """√(a/b) = √(ab)/b"""
        value = Fraction(value)
        if value < 0:
            raise ValueError(f"负数没有实平方根: {format_rational(value)}")
        return cls(0, Fraction(1, value.denominator), value.numerator * value.denominator)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def _coerce(self, other) -> Optional["QuadraticNumber"]:
        if isinstance(other, QuadraticNumber):
            other_qn = other
        elif isinstance(other, (int, Fraction)):
            other_qn = QuadraticNumber(other)
        else:
            return None
        if self.D and other_qn.D and self.D != other_qn.D:
            raise MixedRadicand(f"√{self.D} 与 √{other_qn.D} 不能混合运算")
        return other_qn

    def _common_d(self, other: "QuadraticNumber") -> int:
        return self.D or other.D

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadraticNumber(self.p + other.p, self.q + other.q, self._common_d(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.p, -self.q, self.D)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        D = self._common_d(other)
        return QuadraticNumber(
            self.p * other.p + self.q * other.q * D,
            self.p * other.q + self.q * other.p,
            D,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.p, -self.q, self.D)

    def norm(self) -> Fraction:
        """(p + q√D)(p - q√D)"""
        return self.p * self.p - self.q * self.q * self.D

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError(f"除数 {other} 为零")
        num = self * other.conjugate()
        return QuadraticNumber(num.p / n, num.q / n, num.D)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return QuadraticNumber(1) / self ** (-k)
        result = QuadraticNumber(1)
        for _ in range(k):
            result = result * self
        return result

    def sign(self) -> int:
        sp, sq = _sign(self.p), _sign(self.q)
        if sq == 0:
            return sp
        if sp == 0 or sp == sq:
            return sq
        # 符号相反，比较 p² 与 q²D
        return sp * _sign(self.p * self.p - self.q * self.q * self.D)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except MixedRadicand:
            return False
        if other is None:
            return NotImplemented
        return (self - other).sign() == 0

    def __lt__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    __hash__ = None

    def __float__(self) -> float:
        return float(self.p) + float(self.q) * math.sqrt(self.D)

    def to_json(self) -> dict:
        return {"p": format_rational(self.p), "q": format_rational(self.q), "D": self.D}

    def __repr__(self) -> str:
        return f"QuadraticNumber({format_rational(self.p)}, {format_rational(self.q)}, {self.D})"

    def __str__(self) -> str:
        if self.is_rational:
            return format_rational(self.p)
        return f"{format_rational(self.p)} + {format_rational(self.q)}√{self.D}"


Scalar = Union[Fraction, QuadraticNumber]


def _coerce_component(x):
    if isinstance(x, QuadraticNumber):
        return x
    return parse_rational(x) if isinstance(x, str) else Fraction(x)


@dataclass(frozen=True)
class ChernP3:
    """ch = (ch₀, ch₁H, ch₂H², ch₃H³)，分量可以是有理数或 QuadraticNumber"""
    ch0: Scalar
    ch1: Scalar
    ch2: Scalar
    ch3: Scalar

    def __init__(self, ch0, ch1, ch2, ch3):
        object.__setattr__(self, 'ch0', _coerce_component(ch0))
        object.__setattr__(self, 'ch1', _coerce_component(ch1))
        object.__setattr__(self, 'ch2', _coerce_component(ch2))
        object.__setattr__(self, 'ch3', _coerce_component(ch3))

    @classmethod
    def parse(cls, text: str) -> "ChernP3":
        parts = text.split(',')
        if len(parts) != 4:
            raise ParseError(f"需要 ch0,ch1,ch2,ch3 四个分量: {text!r}")
        return cls(*(parse_rational(p) for p in parts))

    def components(self) -> tuple:
        return (self.ch0, self.ch1, self.ch2, self.ch3)

    def __add__(self, other: "ChernP3") -> "ChernP3":
        return ChernP3(*(a + b for a, b in zip(self.components(), other.components())))

    def __sub__(self, other: "ChernP3") -> "ChernP3":
        return ChernP3(*(a - b for a, b in zip(self.components(), other.components())))

    def truncate(self) -> ChernSurface:
        """(ch₀, ch₁, ch₂)，在 H² = 1 的平面上算墙和斜率"""
        return ChernSurface(self.ch0, self.ch1, self.ch2)

    def to_json(self) -> list:
        return [x.to_json() if isinstance(x, QuadraticNumber) else format_rational(x)
                for x in self.components()]

    def __str__(self) -> str:
        return "(" + ", ".join(str(x) if isinstance(x, QuadraticNumber) else format_rational(x)
                               for x in self.components()) + ")"


UNIT = ChernP3(1, 0, 0, 0)


def line_bundle_p3(k: Rational) -> ChernP3:
    k = Fraction(k)
    return ChernP3(1, k, k ** 2 / 2, k ** 3 / 6)


def exp_class(beta) -> ChernP3:
    """e^{-βH} 截断到次数 3"""
    return ChernP3(1, -beta, beta * beta / 2, -(beta * beta * beta) / 6)


def product_p3(v: ChernP3, w: ChernP3) -> ChernP3:
    a, b = v.components(), w.components()
    return ChernP3(*(sum((a[j] * b[i - j] for j in range(i + 1)), Fraction(0)) for i in range(4)))


def twist_p3(v: ChernP3, beta) -> ChernP3:
    """ch^β = ch · e^{-βH}；β 为 QuadraticNumber 时结果落在 Q(√D) 里"""
    ch0, ch1, ch2, ch3 = v.components()
    if not isinstance(beta, QuadraticNumber):
        beta = Fraction(beta)
    b2 = beta * beta
    b3 = b2 * beta
    return ChernP3(
        ch0,
        ch1 - beta * ch0,
        ch2 - beta * ch1 + b2 * ch0 / 2,
        ch3 - beta * ch2 + b2 * ch1 / 2 - b3 * ch0 / 6,
    )


def chi_p3(v: ChernP3) -> Fraction:
    """Riemann-Roch: χ = ch₃ + 2ch₂ + 11/6 ch₁ + ch₀"""
    return v.ch3 + 2 * v.ch2 + Fraction(11, 6) * v.ch1 + v.ch0


def chi_pair_p3(k: Rational, v: ChernP3) -> Fraction:
    """χ(O(k), E) = χ(ch(O(-k))·ch(E))"""
    return chi_p3(product_p3(line_bundle_p3(-Fraction(k)), v))


def delta_p3(v: ChernP3) -> Fraction:
    return v.ch1 * v.ch1 - 2 * v.ch0 * v.ch2


def q_form(v: ChernP3, t: Rational, beta: Rational) -> Fraction:
    """Q_{α,β} = tΔ + 4(ch₂^β)² - 6ch₁^β ch₃^β，t = α²"""
    t = Fraction(t)
    if t < 0:
        raise NonpositiveT(f"t 必须非负: {format_rational(t)}")
    tw = twist_p3(v, beta)
    return t * delta_p3(v) + 4 * tw.ch2 ** 2 - 6 * tw.ch1 * tw.ch3


def q_circle(v: ChernP3) -> Wall:
    """Q = 0 等价于 ν(v) = ν(ch₁, 2ch₂, 3ch₃)；Δ > 0 时 Q < 0 的区域就是这个半圆盘"""
    partner = ChernSurface(v.ch1, 2 * v.ch2, 3 * v.ch3)
    return numerical_wall(v.truncate(), partner, P3_PLANE)


def nu3(v: ChernP3, t: Rational, beta: Rational) -> SlopeValue:
    return tilt_slope(v.truncate(), t, beta, P3_PLANE)


def tilt_wall_p3(v: ChernP3, w: ChernP3) -> Wall:
    return numerical_wall(v.truncate(), w.truncate(), P3_PLANE)


def second_tilt_charge(v: ChernP3, t: Rational, beta: Rational, s: Rational):
    """Z_{α,β,s} = -ch₃^β + (s + 1/6)t ch₁^β + i(ch₂^β - t/2 ch₀)"""
    t, s = Fraction(t), Fraction(s)
    if t <= 0:
        raise NonpositiveT(f"t = α² 必须为正: {format_rational(t)}")
    if s <= 0:
        raise NonpositiveS(f"s 必须为正: {format_rational(s)}")
    tw = twist_p3(v, beta)
    re = -tw.ch3 + (s + Fraction(1, 6)) * t * tw.ch1
    im = tw.ch2 - t * tw.ch0 / 2
    return re, im


def beta_bar(v: ChernP3) -> QuadraticNumber:
    """ch₂^β = 0 的较小根 (ch₁ - √Δ)/ch₀；秩零时为 ch₂/ch₁"""
    if v.ch0 == 0:
        if v.ch1 == 0:
            raise UndefinedBetaBar(f"{v} 的 ch₀ 和 ch₁ 都为零")
        return QuadraticNumber(Fraction(v.ch2) / v.ch1)
    disc = delta_p3(v)
    if disc < 0:
        raise UndefinedBetaBar(f"Δ({v}) = {format_rational(disc)} < 0")
    return (v.ch1 - QuadraticNumber.sqrt_of(disc)) / v.ch0


def ch3_at_beta_bar(v: ChernP3) -> QuadraticNumber:
    tw = twist_p3(v, beta_bar(v))
    assert tw.ch2 == 0, f"β̄ 处 ch₂ 不为零: {v}"
    return tw.ch3


def rank_zero_e_bound(v: ChernP3) -> bool:
    """(0, 2, d, e) 型的稳定对象满足 e ≤ d²/4 + 1/3；e - d²/4 在扭变下不变"""
    if v.ch0 != 0 or v.ch1 != 2:
        raise WrongShape(f"需要 (ch₀, ch₁) = (0, 2)，得到 {v}")
    return v.ch3 <= v.ch2 ** 2 / 4 + Fraction(1, 3)


class Containment(Enum):
    INSIDE = "inside"
    NOT_INSIDE = "notInside"
    WALL_EMPTY = "wallEmpty"


def wall_inside_q_negative(v: ChernP3, w: ChernP3) -> Containment:
    if delta_p3(v) <= 0:
        raise DegenerateDelta(f"Δ({v}) = {format_rational(delta_p3(v))} ≤ 0，Q < 0 不是半圆盘")
    wall = tilt_wall_p3(v, w)
    if wall.kind is WallKind.EMPTY:
        return Containment.WALL_EMPTY
    if disc_strictly_inside(wall, q_circle(v)):
        return Containment.INSIDE
    return Containment.NOT_INSIDE


def ch_ideal_curve(d: int, g: int) -> ChernP3:
    """次数 d、算术亏格 g 的曲线的理想层 (1, 0, -d, 2d + g - 1)"""
    if d < 1:
        raise InvalidDegree(f"d 必须为正: {d}")
    return ChernP3(1, 0, -d, 2 * d + g - 1)


class WitnessReason(Enum):
    WALL_EMPTY = "wall-empty"
    INSIDE_Q_NEGATIVE = "wall-inside-Q-negative"
    E_BOUND_VIOLATED = "quotient-e-bound-violated"
    NON_DEGENERATE = "non-degenerate-hypothesis"
    NOT_EXCLUDED = "not-excluded"


@dataclass(frozen=True)
class CastelnuovoWitness:
    branch: str
    reason: WitnessReason
    a: Optional[int] = None
    detail: str = ""

    def to_json(self) -> dict:
        payload = {"branch": self.branch, "reason": self.reason.value, "detail": self.detail}
        if self.a is not None:
            payload["a"] = self.a
        return payload


@dataclass
class CastelnuovoVerdict:
    d: int
    g: int
    witnesses: List[CastelnuovoWitness] = field(default_factory=list)

    @property
    def excluded(self) -> bool:
        return all(w.reason is not WitnessReason.NOT_EXCLUDED for w in self.witnesses)

    @property
    def bound(self) -> Fraction:
        return Fraction(self.d * self.d, 4) - self.d + 1

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "g": self.g,
            "excluded": self.excluded,
            "bound": format_rational(self.bound),
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def castelnuovo_excluded(d: int, g: int) -> CastelnuovoVerdict:
    """
    用 tilt 稳定性的墙排除 P³ 中次数 d、亏格 g 的非退化整曲线。

    I_C 的最大失稳墙要么来自秩 ≥ 2 的子对象，要么来自 O(-a) ⊂ I_C。
    a = 1 被非退化假设排除；a ≥ 3 的墙落在 Q < 0 内；a = 2 时看商 G 是否违反 e 的上界。
    所有分支都有排除理由时结论为 excluded。
    """
    if d < 3:
        raise InvalidDegree(f"需要 d ≥ 3，得到 d = {d}")
    if g < 0:
        raise InvalidDegree(f"需要 g ≥ 0，得到 g = {g}")
    v = ch_ideal_curve(d, g)
    verdict = CastelnuovoVerdict(d=d, g=g)
    q_wall = q_circle(v)
    if not q_wall.is_circle:
        logger.warning(f"(d, g) = ({d}, {g}): Q < 0 的区域为空")
        verdict.witnesses.append(CastelnuovoWitness(
            "q-region", WitnessReason.NOT_EXCLUDED, detail=f"Q 的零点集是 {q_wall}，没有 Q < 0 的区域"))
        return verdict

    # 秩 ≥ 2 的子对象给出的墙半径不超过秩 2 的上界；同侧的墙彼此嵌套
    rank_bound = higher_rank_radius_bound(v.truncate(), 2, P3_PLANE)
    if rank_bound < q_wall.radius_sq:
        reason = WitnessReason.INSIDE_Q_NEGATIVE
    else:
        reason = WitnessReason.NOT_EXCLUDED
    verdict.witnesses.append(CastelnuovoWitness(
        "rank>=2", reason,
        detail=f"ρ² ≤ {format_rational(rank_bound)}，Q 圆 {q_wall}"))

    a = 1
    while True:
        sub = line_bundle_p3(-a)
        wall = tilt_wall_p3(v, sub)
        if not wall.is_circle or not heart_holds_along(sub.truncate(), wall):
            # a² ≥ 2d：墙为空，或者沿整面墙 O(-a) 都不在 Coh^β 里
            verdict.witnesses.append(CastelnuovoWitness(
                "twist", WitnessReason.WALL_EMPTY, a=a, detail=f"W(v, O(-{a})) = {wall}"))
            break
        if a == 1:
            verdict.witnesses.append(CastelnuovoWitness(
                "twist", WitnessReason.NON_DEGENERATE, a=a, detail="C 不在平面里，O(-1) 不是 I_C 的子对象"))
        else:
            containment = wall_inside_q_negative(v, sub)
            if containment is Containment.INSIDE:
                verdict.witnesses.append(CastelnuovoWitness(
                    "twist", WitnessReason.INSIDE_Q_NEGATIVE, a=a, detail=f"{wall} 含在 {q_wall} 内"))
            elif a == 2 and not rank_zero_e_bound(v - sub):
                quotient = v - sub
                verdict.witnesses.append(CastelnuovoWitness(
                    "twist", WitnessReason.E_BOUND_VIOLATED, a=a,
                    detail=f"商 G = {quotient}: ch₃ > ch₂²/4 + 1/3"))
            else:
                verdict.witnesses.append(CastelnuovoWitness(
                    "twist", WitnessReason.NOT_EXCLUDED, a=a, detail=f"{wall} 不在 {q_wall} 内"))
        a += 1

    logger.info(f"(d, g) = ({d}, {g}): excluded={verdict.excluded}，界 {format_rational(verdict.bound)}")
    return verdict
