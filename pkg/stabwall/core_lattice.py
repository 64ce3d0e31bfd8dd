"""
Picard 秩一曲面上的 Chern 特征标算术。

类用 H 坐标 (r, c, d) 存储：ch = (r, cH, d)。所有运算都是精确有理数，
本模块不出现浮点。
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Annotated, Any, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer

from stabwall.config import load_config, load_table
from stabwall.errors import NonIntegralGenus, NonpositiveT, ParseError, UnknownPreset
from utils.log_manager import get_logger

logger = get_logger('lattice')

Rational = Union[int, Fraction]

_RATIONAL_RE = re.compile(r'^[+-]?\d+(/[+-]?\d+)?$')


def parse_rational(value: Any) -> Fraction:
    """精确解析 "p/q" 或整数；小数、浮点一律拒绝"""
    if isinstance(value, bool):
        raise ParseError(f"不是有理数: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace(' ', '')
        if _RATIONAL_RE.match(text):
            num, _, den = text.partition('/')
            if den and int(den) == 0:
                raise ParseError(f"分母为零: {value!r}")
            return Fraction(int(num), int(den) if den else 1)
    raise ParseError(f"不是有理数: {value!r}")


def format_rational(value: Rational) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


RationalField = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]


class SurfaceData(BaseModel):
    """曲面不变量：H², H·K, χ(O), aH 有效的最小 a, Bogomolov 常数 C_ω"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str = "custom"
    h_squared: int = Field(..., ge=1)
    h_dot_k: int
    chi_o: int
    a: int = Field(1, ge=1)
    c_bogomolov: RationalField = Fraction(0)

    def describe(self) -> str:
        return f"{self.name}(H²={self.h_squared}, H·K={self.h_dot_k}, χ(O)={self.chi_o}, a={self.a})"


P2 = SurfaceData(name="p2", h_squared=1, h_dot_k=-3, chi_o=1, a=1)
K3_DEG4 = SurfaceData(name="k3_deg4", h_squared=4, h_dot_k=0, chi_o=2, a=1)
_BUILTIN_PRESETS = {"p2": P2, "k3_deg4": K3_DEG4}


def surface_preset(name: str) -> SurfaceData:
    """按名字取预设；config.toml 的 [surfaces.<name>] 优先"""
    surfaces = load_config().get("surfaces")
    if surfaces and name in surfaces:
        return SurfaceData(name=name, **surfaces[name].toDict())
    if name in _BUILTIN_PRESETS:
        return _BUILTIN_PRESETS[name]
    raise UnknownPreset(f"未知的曲面预设: {name}")


def load_surface(path: Union[str, Path]) -> SurfaceData:
    """从 toml/json 文件读取曲面，表可以在顶层或 [surface] 下"""
    path = Path(path)
    try:
        table = load_table(path)
    except OSError as e:
        raise UnknownPreset(f"无法读取曲面文件 {path}: {e}") from e
    except ValueError as e:
        raise ParseError(f"曲面文件格式错误 {path}: {e}") from e
    table = dict(table.get("surface", table))
    table.setdefault("name", path.stem)
    return SurfaceData(**table)


def resolve_surface(surface: Union[str, SurfaceData]) -> SurfaceData:
    if isinstance(surface, SurfaceData):
        return surface
    if surface.endswith(('.toml', '.json')):
        return load_surface(surface)
    return surface_preset(surface)


@dataclass(frozen=True)
class ChernSurface:
    """ch = (r, cH, d)"""
    r: Fraction
    c: Fraction
    d: Fraction

    def __init__(self, r: Rational, c: Rational, d: Rational):
        object.__setattr__(self, 'r', Fraction(r))
        object.__setattr__(self, 'c', Fraction(c))
        object.__setattr__(self, 'd', Fraction(d))

    @classmethod
    def parse(cls, text: str) -> "ChernSurface":
        parts = [p for p in text.split(',')]
        if len(parts) != 3:
            raise ParseError(f"需要 r,c,d 三个分量: {text!r}")
        return cls(*(parse_rational(p) for p in parts))

    def __add__(self, other: "ChernSurface") -> "ChernSurface":
        return ChernSurface(self.r + other.r, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "ChernSurface") -> "ChernSurface":
        return ChernSurface(self.r - other.r, self.c - other.c, self.d - other.d)

    def __neg__(self) -> "ChernSurface":
        return ChernSurface(-self.r, -self.c, -self.d)

    def __mul__(self, k: Rational) -> "ChernSurface":
        return ChernSurface(k * self.r, k * self.c, k * self.d)

    __rmul__ = __mul__

    def as_tuple(self) -> tuple:
        return (self.r, self.c, self.d)

    def to_json(self) -> list:
        return [format_rational(x) for x in self.as_tuple()]

    def __str__(self) -> str:
        return "(" + ", ".join(self.to_json()) + ")"


ZERO = ChernSurface(0, 0, 0)


@dataclass(frozen=True)
class DiscriminantReport:
    delta: Fraction
    delta_bar: Fraction
    delta_c: Fraction

    def to_json(self) -> dict:
        return {
            "delta": format_rational(self.delta),
            "delta_bar": format_rational(self.delta_bar),
            "delta_c": format_rational(self.delta_c),
        }


def line_bundle(k: Rational, S: SurfaceData) -> ChernSurface:
    """ch(O(kH)) = (1, k, k²H²/2)"""
    k = Fraction(k)
    return ChernSurface(1, k, k * k * S.h_squared / 2)


def ideal_points(n: int) -> ChernSurface:
    """n 个点的理想层 I_Z 的类 (1, 0, -n)"""
    return ChernSurface(1, 0, -n)


def twist_surface(v: ChernSurface, beta: Rational, S: SurfaceData) -> ChernSurface:
    """ch^β = ch · e^{-βH}"""
    beta = Fraction(beta)
    h = S.h_squared
    return ChernSurface(
        v.r,
        v.c - beta * v.r,
        v.d - beta * h * v.c + beta * beta * h * v.r / 2,
    )


def delta(v: ChernSurface, S: SurfaceData) -> Fraction:
    """Δ = c²H² - 2rd，与扭变无关"""
    return v.c * v.c * S.h_squared - 2 * v.r * v.d


def delta_bar(v: ChernSurface, S: SurfaceData) -> Fraction:
    return S.h_squared * delta(v, S)


def bogomolov_ok(v: ChernSurface, S: SurfaceData) -> bool:
    return delta(v, S) >= 0


def mu_slope(v: ChernSurface):
    """μ_H = c/r；秩零返回 None 表示 +∞"""
    if v.r == 0:
        return None
    return v.c / v.r


def discriminants(v: ChernSurface, S: SurfaceData, t: Rational, beta: Rational) -> DiscriminantReport:
    t = Fraction(t)
    if t < 0:
        raise NonpositiveT(f"t 必须非负: {t}")
    base = delta(v, S)
    twisted_c = v.c - Fraction(beta) * v.r
    # ω = αH：(ω·ch₁^β)² = α²(H²c^β)² = t(H²c^β)²
    delta_c = base + S.c_bogomolov * t * (S.h_squared * twisted_c) ** 2
    return DiscriminantReport(delta=base, delta_bar=S.h_squared * base, delta_c=delta_c)


def euler_surface(v: ChernSurface, S: SurfaceData) -> Fraction:
    """χ(v) = ∫ ch·(1, -K/2, χ(O))"""
    return v.d - v.c * S.h_dot_k / 2 + v.r * S.chi_o


@lru_cache(maxsize=64)
def genus_in_linear_system(S: SurfaceData) -> int:
    """|aH| 中曲线的算术亏格，由附加公式 2g-2 = C² + C·K 给出"""
    g = 1 + Fraction(S.a * S.h_dot_k, 2) + Fraction(S.a * S.a * S.h_squared, 2)
    if g.denominator != 1:
        logger.warning(f"曲面数据不一致，亏格非整数: {S.describe()} -> {g}")
        raise NonIntegralGenus(f"{S.describe()} 给出的亏格 {format_rational(g)} 不是整数")
    return int(g)
