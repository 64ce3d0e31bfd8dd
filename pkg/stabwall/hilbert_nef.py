"""
由墙的数据得到点的 Hilbert 概形 X^[n] 上的 nef 除子。

除子记在 (K^[n], H^[n], E) 坐标下；Picard 秩一时 K_X = (H·K/H²)·H，
所以还能合并出只含 H^[n] 与 E 的 combined_h。默认 X 的非正则性为零。
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from stabwall.core_lattice import ChernSurface, Rational, SurfaceData, format_rational, genus_in_linear_system
from stabwall.errors import HypothesisViolated
from stabwall.wall_enum import WallCandidate, largest_wall_ideal_sheaf
from utils.log_manager import get_logger

logger = get_logger('nef')


@dataclass(frozen=True)
class DivisorHilb:
    coef_k: Fraction
    coef_h: Fraction
    coef_e: Fraction
    combined_h: Optional[Fraction] = None

    def with_surface(self, S: SurfaceData) -> "DivisorHilb":
        combined = self.coef_h + self.coef_k * Fraction(S.h_dot_k, S.h_squared)
        return DivisorHilb(self.coef_k, self.coef_h, self.coef_e, combined)

    def __add__(self, other: "DivisorHilb") -> "DivisorHilb":
        combined = None
        if self.combined_h is not None and other.combined_h is not None:
            combined = self.combined_h + other.combined_h
        return DivisorHilb(self.coef_k + other.coef_k, self.coef_h + other.coef_h,
                           self.coef_e + other.coef_e, combined)

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.coef_k, self.coef_h, self.coef_e)

    def to_json(self) -> dict:
        payload = {
            "coef_k": format_rational(self.coef_k),
            "coef_h": format_rational(self.coef_h),
            "coef_e": format_rational(self.coef_e),
        }
        if self.combined_h is not None:
            payload["combined_h"] = format_rational(self.combined_h)
        return payload


def donaldson_image(w: ChernSurface, S: SurfaceData) -> DivisorHilb:
    """(r, c, x) ↦ r·E/2 - c·H^[n]，ch₂ 分量映到 0"""
    return DivisorHilb(Fraction(0), -w.c, w.r / 2).with_surface(S)


def divisor_from_wall_center(s_w: Rational, S: Optional[SurfaceData] = None) -> DivisorHilb:
    """墙心 s_W 对应的射线 K^[n]/2 - s_W H^[n] - E/2"""
    divisor = DivisorHilb(Fraction(1, 2), -Fraction(s_w), Fraction(-1, 2))
    return divisor.with_surface(S) if S is not None else divisor


def _check_n(S: SurfaceData, n: int):
    bound = S.a * S.a * S.h_squared
    if n < bound:
        raise HypothesisViolated(f"需要 n ≥ a²H² = {bound}，得到 n = {n}")


def nef_divisor_hilb(S: SurfaceData, n: int) -> DivisorHilb:
    """D = K^[n]/2 + (a/2 + n/(aH²))H^[n] - E/2"""
    _check_n(S, n)
    coef_h = Fraction(S.a, 2) + Fraction(n, S.a * S.h_squared)
    return DivisorHilb(Fraction(1, 2), coef_h, Fraction(-1, 2)).with_surface(S)


def is_extremal(S: SurfaceData, n: int) -> Tuple[bool, int]:
    """n ≥ g + 1 时 D 是 nef 锥的边界；g 是 |aH| 中曲线的亏格"""
    _check_n(S, n)
    genus = genus_in_linear_system(S)
    return n >= genus + 1, genus


def nef_from_largest_wall(n: int, S: SurfaceData, verify: Optional[bool] = None) -> Tuple[DivisorHilb, WallCandidate]:
    candidate = largest_wall_ideal_sheaf(n, S, verify)
    divisor = divisor_from_wall_center(candidate.wall.center, S)
    logger.info(f"{S.name} n={n}: 墙 {candidate.wall} -> D = {divisor.to_json()}")
    return divisor, candidate
