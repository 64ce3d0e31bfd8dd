"""
用凸多边形算法求 Harder-Narasimhan 滤过。

给定 E 的所有子对象类（有限集合）和稳定性函数 Z，HN 多边形是 {Z(F)} 凸包在
线段 0 -> Z(E) 左侧的边界，顶点依次给出 HN 因子。
"""
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from stabwall.core_lattice import format_rational, parse_rational
from stabwall.errors import EmptyInput, EmptyModel, NotAStabilityFunction, ParseError, ZeroCharge
from utils.log_manager import get_logger

logger = get_logger('hn')

Vector = Tuple[int, ...]


class ChargeSpec(BaseModel):
    """Z(x) = (realPart·x, imagPart·x)"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    real_part: Tuple[Fraction, ...]
    imag_part: Tuple[Fraction, ...]

    @field_validator('real_part', 'imag_part', mode='before')
    @classmethod
    def _exact(cls, value):
        return tuple(parse_rational(x) for x in value)

    @model_validator(mode='after')
    def _same_length(self):
        if len(self.real_part) != len(self.imag_part) or not self.real_part:
            raise ValueError("realPart 和 imagPart 长度必须相同且非空")
        return self

    @property
    def dimension(self) -> int:
        return len(self.real_part)

    def __call__(self, x: Sequence[int]) -> Tuple[Fraction, Fraction]:
        re = sum((a * b for a, b in zip(self.real_part, x)), Fraction(0))
        im = sum((a * b for a, b in zip(self.imag_part, x)), Fraction(0))
        return re, im


def _integer_vector(values) -> Vector:
    """类的坐标必须是整数；小数、布尔值和非整的有理数都拒绝"""
    result = []
    for a in values:
        x = parse_rational(a)
        if x.denominator != 1:
            raise ParseError(f"类的坐标必须是整数: {a!r}")
        result.append(int(x))
    return tuple(result)


class SubobjectModel(BaseModel):
    """E 的类以及它所有子对象的类；0 和 E 本身总会被加入"""
    model_config = ConfigDict(frozen=True)

    target: Vector
    sub_classes: frozenset

    @model_validator(mode='before')
    @classmethod
    def _with_ends(cls, data):
        if not isinstance(data, dict):
            return data
        target = _integer_vector(data.get('target', ()))
        if not target:
            raise EmptyModel("target 为空向量")
        subs = {_integer_vector(x) for x in data.get('sub_classes', ())}
        if any(len(x) != len(target) for x in subs):
            raise ValueError("子对象类的维数与 target 不一致")
        subs |= {tuple(0 for _ in target), target}
        return {**data, 'target': target, 'sub_classes': frozenset(subs)}


@dataclass(frozen=True)
class HNFactor:
    cls: Vector
    slope_numerator: Fraction
    slope_denominator: Fraction

    @property
    def is_infinite(self) -> bool:
        return self.slope_denominator == 0

    def to_json(self) -> dict:
        return {
            "class": list(self.cls),
            "slope": "+inf" if self.is_infinite else format_rational(self.slope_numerator / self.slope_denominator),
        }


@dataclass(frozen=True)
class HNResult:
    vertices: List[Vector]
    factors: List[HNFactor]
    mass: List[Fraction]

    def to_json(self) -> dict:
        return {
            "vertices": [list(x) for x in self.vertices],
            "factors": [f.to_json() for f in self.factors],
            "mass_sq": [format_rational(m) for m in self.mass],
        }


def _sub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def _slope_after(a: Tuple[Fraction, Fraction], b: Tuple[Fraction, Fraction]) -> bool:
    """方向 a 的相位严格大于方向 b（都在上半平面或负实轴上）"""
    return b[0] * a[1] - b[1] * a[0] > 0


def hn_polygon(model: SubobjectModel, Z: ChargeSpec) -> HNResult:
    if not model.sub_classes:
        raise EmptyModel("子对象集合为空")
    if len(model.target) != Z.dimension:
        raise EmptyModel(f"类的维数 {len(model.target)} 与 Z 的维数 {Z.dimension} 不一致")
    z_target = Z(model.target)
    if z_target == (0, 0):
        raise ZeroCharge(f"Z({model.target}) = 0")
    points = {}
    for x in model.sub_classes:
        z = Z(x)
        if z[1] < 0 or z[1] > z_target[1]:
            raise NotAStabilityFunction(f"Im Z({x}) = {format_rational(z[1])} 不在 [0, Im Z(E)] 内")
        # 同一个 Z 值取字典序最小的类，保证与输入顺序无关
        if z not in points or x < points[z]:
            points[z] = x

    # 从 0 出发做 gift wrapping：每步取相位最大的方向，共线时取最远点
    zero = tuple(0 for _ in model.target)
    current = zero
    z_cur = (Fraction(0), Fraction(0))
    vertices = [zero]
    while z_cur != z_target:
        best = None
        for z, x in points.items():
            if z == z_cur or z[1] < z_cur[1]:
                continue
            d = (z[0] - z_cur[0], z[1] - z_cur[1])
            if d[1] == 0 and d[0] > 0:
                continue
            if best is None:
                best = (d, z, x)
                continue
            bd = best[0]
            if _slope_after(d, bd):
                best = (d, z, x)
            elif not _slope_after(bd, d) and (d[0] ** 2 + d[1] ** 2 > bd[0] ** 2 + bd[1] ** 2):
                best = (d, z, x)
        if best is None:
            raise NotAStabilityFunction(f"从 {current} 出发无法到达 {model.target}")
        z_cur = best[1]
        current = model.target if z_cur == z_target else best[2]
        vertices.append(current)

    factors, mass = [], []
    for prev, nxt in zip(vertices, vertices[1:]):
        cls = _sub(nxt, prev)
        re, im = Z(cls)
        if im == 0 and re >= 0:
            raise NotAStabilityFunction(f"因子 {cls} 的 Z = ({format_rational(re)}, 0) 在正实轴上")
        factors.append(HNFactor(cls=cls, slope_numerator=-re, slope_denominator=im))
        mass.append(re * re + im * im)
    logger.debug(f"target={model.target}: {len(factors)} 个 HN 因子")
    return HNResult(vertices=vertices, factors=factors, mass=mass)


def hn_p1(degrees: Iterable[int]) -> List[Tuple[int, int]]:
    """P¹ 上 ⊕O(a_i) 的 HN 因子：按次数分组，严格降序"""
    degrees = list(degrees)
    if not degrees:
        raise EmptyInput("次数列表为空")
    counts = Counter(degrees)
    return sorted(counts.items(), key=lambda item: -item[0])


def subobject_classes_p1(degrees: Iterable[int]) -> SubobjectModel:
    """(秩, 次数) 坐标下每个秩取最大子层次数 D(r')"""
    degrees = sorted(degrees, reverse=True)
    if not degrees:
        raise EmptyInput("次数列表为空")
    target = (len(degrees), sum(degrees))
    subs = {(0, 0), target}
    running = 0
    for rank, a in enumerate(degrees[:-1], start=1):
        running += a
        subs.add((rank, running))
    return SubobjectModel(target=target, sub_classes=subs)


P1_CHARGE = ChargeSpec(real_part=(0, -1), imag_part=(1, 0))


def hn_from_degrees(degrees: Iterable[int]) -> List[Tuple[int, int]]:
    """在 P¹ 模型上跑通用多边形算法，换回 (次数, 重数)"""
    result = hn_polygon(subobject_classes_p1(degrees), P1_CHARGE)
    return [(f.cls[1] // f.cls[0], f.cls[0]) for f in result.factors]
