"""
候选失稳墙的有限枚举，以及 Hilbert 概形理想层类 (1, 0, -n) 的最大墙。

枚举只给出数值候选：沿整面墙满足 heart 条件、两个因子都满足 Bogomolov、
落在 Chern 格点上、并且在墙内确实让 v 失稳的分解 v = F + G。
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional

from stabwall.config import wall_enum_max_denom, wall_enum_verify_largest
from stabwall.core_lattice import (
    ChernSurface,
    Rational,
    SurfaceData,
    delta,
    delta_bar,
    format_rational,
    ideal_points,
    line_bundle,
)
from stabwall.errors import HypothesisViolated, InvalidRank, NegativeDiscriminant, ProbeOnVerticalWall
from stabwall.tilt_plane import (
    Ordering,
    Wall,
    compare_tilt_slopes,
    heart_holds_along,
    numerical_wall,
    vertical_wall,
)
from utils.log_manager import get_logger

logger = get_logger('walls')


@dataclass(frozen=True)
class WallCandidate:
    wall: Wall
    destabilizer: ChernSurface
    quotient: ChernSurface

    def sort_key(self):
        return (-self.wall.radius_sq, self.destabilizer.as_tuple())

    def to_json(self) -> dict:
        return {
            "wall": self.wall.to_json(),
            "destabilizer": self.destabilizer.to_json(),
            "quotient": self.quotient.to_json(),
            "radius_sq": format_rational(self.wall.radius_sq),
        }


def higher_rank_radius_bound(v: ChernSurface, rF: int, S: SurfaceData) -> Fraction:
    """秩 rF 的子对象给出的墙满足 ρ² ≤ Δ̄(v) / (4H²rF(H²rF - H²r_v))"""
    if rF <= 0 or rF <= v.r:
        raise InvalidRank(f"rF={rF} 必须大于 max(r_v, 0)，r_v={format_rational(v.r)}")
    if delta(v, S) < 0:
        raise NegativeDiscriminant(f"Δ({v}) < 0")
    h = S.h_squared
    return delta_bar(v, S) / (4 * h * rF * (h * rF - h * v.r))


def probe_radius_sq(v: ChernSurface, S: SurfaceData, beta_probe: Rational) -> Fraction:
    """v 的经过边界点 (β₀, 0) 的那面数值墙的 ρ²"""
    beta = Fraction(beta_probe)
    h = S.h_squared
    if v.r == 0:
        if v.c == 0:
            return Fraction(0)
        # 秩零：所有半圆墙同心
        center = v.d / (h * v.c)
    else:
        mu = v.c / v.r
        if beta == mu:
            raise ProbeOnVerticalWall(f"β₀ = {format_rational(beta)} 落在竖直墙上")
        k = delta(v, S) / (h * v.r * v.r)
        # 墙族满足 ρ² = (s - μ)² - k，代入 ρ² = (β₀ - s)² 解出 s
        center = (mu * mu - k - beta * beta) / (2 * (mu - beta))
    return (beta - center) ** 2


def _min_rank(v: ChernSurface) -> int:
    return max(2, math.floor(v.r) + 1)


def default_max_rank(v: ChernSurface, S: SurfaceData, beta_probe: Rational,
                     radius_sq: Optional[Fraction] = None) -> int:
    """最小的 rF，使 higher_rank_radius_bound(v, rF) 低于过探针的墙的 ρ²，至少为 2"""
    if radius_sq is None:
        radius_sq = probe_radius_sq(v, S, beta_probe)
    rF = _min_rank(v)
    if radius_sq <= 0 or delta(v, S) == 0:
        return rF
    while higher_rank_radius_bound(v, rF, S) >= radius_sq:
        rF += 1
    return rF


def _search_beta(v: ChernSurface, S: SurfaceData, side: int, target: Fraction) -> Fraction:
    """找有理数 β₁，使所有 ρ² ≥ target 的同侧墙都严格跨过 β = β₁"""
    h = S.h_squared
    if v.r == 0:
        return v.d / (h * v.c)
    mu = v.c / v.r
    k = delta(v, S) / (h * v.r * v.r)
    # 墙族收缩到 β* = μ ± √k，从内侧逼近 √k
    q = 1
    while True:
        m = math.isqrt(k.numerator * q * q // k.denominator)
        if m > 0:
            beta = mu + side * Fraction(m, q)
            if probe_radius_sq(v, S, beta) < target:
                return beta
        q *= 2


def _lattice_points(lo: Fraction, hi: Fraction, c: int, S: SurfaceData, max_denom: int) -> Iterator[Fraction]:
    if lo > hi:
        return
    if max_denom > 0:
        for j in range(math.ceil(lo * max_denom), math.floor(hi * max_denom) + 1):
            yield Fraction(j, max_denom)
        return
    # 层的格点：ch₂ ∈ c²H²/2 + ℤ
    base = Fraction(c * c * S.h_squared, 2)
    offset = base - math.floor(base)
    for j in range(math.ceil(lo - offset), math.floor(hi - offset) + 1):
        yield offset + j


def _twisted_d_range(r: int, c_twisted: Fraction, delta_v: Fraction, S: SurfaceData):
    """0 ≤ Δ(x) ≤ Δ(v) 给出 ch₂^β 的范围；秩零时无界"""
    h = S.h_squared
    lo, hi = (h * c_twisted ** 2 - delta_v) / (2 * r), h * c_twisted ** 2 / (2 * r)
    return (lo, hi) if r > 0 else (hi, lo)


def _untwist_d(d_twisted: Fraction, r: int, c: Fraction, beta: Fraction, S: SurfaceData) -> Fraction:
    h = S.h_squared
    return d_twisted + beta * h * c - beta * beta * h * r / 2


def _box(v: ChernSurface, S: SurfaceData, beta1: Fraction, r_lo: int, r_hi: int,
         max_denom: int) -> Iterator[ChernSurface]:
    """有限性引理在 β = β₁ 处的盒子：0 ≤ c^{β₁}(F) ≤ c^{β₁}(v)，0 ≤ Δ(F), Δ(G) ≤ Δ(v)"""
    big_c = v.c - beta1 * v.r
    delta_v = delta(v, S)
    if big_c < 0:
        return
    for rF in range(r_lo, r_hi + 1):
        rG = v.r - rF
        if rF == 0 and rG == 0:
            continue
        for cF in range(math.ceil(beta1 * rF), math.floor(beta1 * rF + big_c) + 1):
            cF_tw = cF - beta1 * rF
            if rF != 0:
                lo, hi = _twisted_d_range(rF, cF_tw, delta_v, S)
                lo, hi = _untwist_d(lo, rF, cF, beta1, S), _untwist_d(hi, rF, cF, beta1, S)
            else:
                cG = v.c - cF
                lo_g, hi_g = _twisted_d_range(rG, big_c - cF_tw, delta_v, S)
                lo_g, hi_g = _untwist_d(lo_g, rG, cG, beta1, S), _untwist_d(hi_g, rG, cG, beta1, S)
                lo, hi = v.d - hi_g, v.d - lo_g
            for dF in _lattice_points(lo, hi, cF, S, max_denom):
                yield ChernSurface(rF, cF, dF)


def _examine(v: ChernSurface, F: ChernSurface, S: SurfaceData, side: int,
             beta1: Fraction) -> Optional[WallCandidate]:
    G = v - F
    if delta(F, S) < 0 or delta(G, S) < 0:
        return None
    wall = numerical_wall(v, F, S)
    if not wall.is_circle:
        return None
    if side and (wall.center - v.c / v.r) * side <= 0:
        return None
    if not (heart_holds_along(F, wall) and heart_holds_along(G, wall)):
        return None
    if (beta1 - wall.center) ** 2 >= wall.radius_sq:
        logger.debug(f"墙 {wall} 没有跨过 β₁={format_rational(beta1)}，跳过 F={F}")
        return None
    # 墙内取点 (t, β) = (ρ²/4, s)，F 的斜率要大于 v
    if compare_tilt_slopes(F, v, wall.radius_sq / 4, wall.center, S) is not Ordering.GREATER:
        return None
    return WallCandidate(wall=wall, destabilizer=F, quotient=G)


def enumerate_walls(v: ChernSurface, S: SurfaceData, beta_probe: Rational,
                    max_rank: Optional[int] = None, *,
                    radius_floor: Optional[Rational] = None,
                    max_denom: Optional[int] = None) -> List[WallCandidate]:
    """
    列出探针一侧 v 的候选半圆墙，按 radius_sq 降序，同半径按失稳子 (r, c, d) 字典序。

    探针决定搜索竖直墙的哪一侧，并通过过 (β₀, 0) 的墙给出默认的秩上界 max_rank。
    返回 radius_sq 大于 higher_rank_radius_bound(v, max_rank + 1) 的全部墙，
    在这个范围内秩截断是完备的。radius_floor 给出时只返回 radius_sq ≥ radius_floor 的墙。
    """
    beta_probe = Fraction(beta_probe)
    delta_v = delta(v, S)
    if delta_v < 0:
        raise NegativeDiscriminant(f"Δ({v}) = {format_rational(delta_v)} < 0")
    side = 0
    if v.r != 0:
        mu = vertical_wall(v, S)
        if beta_probe == mu:
            raise ProbeOnVerticalWall(f"β₀ = {format_rational(beta_probe)} 落在竖直墙上")
        side = 1 if beta_probe > mu else -1
    if delta_v == 0 or (v.r == 0 and v.c == 0):
        # Δ = 0 的类生成锥的端射线，没有半圆墙
        return []
    if max_denom is None:
        max_denom = wall_enum_max_denom()
    floor = Fraction(radius_floor) if radius_floor is not None else None

    if max_rank is None:
        max_rank = default_max_rank(v, S, beta_probe, floor)
    cutoff = higher_rank_radius_bound(v, max_rank + 1, S)
    target = floor if floor is not None else cutoff
    beta1 = _search_beta(v, S, side, target)
    r_lo = math.ceil(v.r - max_rank)

    seen: Dict[Wall, WallCandidate] = {}
    examined = 0
    for F in _box(v, S, beta1, r_lo, max_rank, max_denom):
        examined += 1
        cand = _examine(v, F, S, side, beta1)
        if cand is None:
            continue
        rsq = cand.wall.radius_sq
        if rsq <= cutoff or (floor is not None and rsq < floor):
            continue
        kept = seen.get(cand.wall)
        if kept is None or cand.sort_key() < kept.sort_key():
            seen[cand.wall] = cand

    result = sorted(seen.values(), key=WallCandidate.sort_key)
    logger.info(
        f"v={v} β₀={format_rational(beta_probe)}: 检查 {examined} 个候选，"
        f"max_rank={max_rank}，截断 ρ²>{format_rational(cutoff)}，得到 {len(result)} 面墙"
    )
    return result


def largest_wall_ideal_sheaf(n: int, S: SurfaceData, verify: Optional[bool] = None) -> WallCandidate:
    """(1, 0, -n) 的最大墙由 O(-aH) ⊂ I_Z 给出，需要 n > a²H²"""
    a, h = S.a, S.h_squared
    if n <= a * a * h:
        raise HypothesisViolated(f"需要 n > a²H² = {a * a * h}，得到 n = {n}")
    v = ideal_points(n)
    F = line_bundle(-a, S)
    candidate = WallCandidate(wall=numerical_wall(v, F, S), destabilizer=F, quotient=v - F)

    if verify is None:
        verify = wall_enum_verify_largest()
    if verify:
        others = enumerate_walls(v, S, vertical_wall(v, S) - 1, radius_floor=candidate.wall.radius_sq)
        for other in others:
            if other.wall != candidate.wall:
                logger.error(f"n={n}: 墙 {other.wall} 不小于 {candidate.wall}")
                raise AssertionError(f"O(-aH) 的墙不是最大墙: {other.wall}")
    logger.info(f"{S.name} n={n}: 最大墙 {candidate.wall}")
    return candidate


def hilbert_wall_ladder(n: int, S: SurfaceData, max_rank: Optional[int] = None) -> List[WallCandidate]:
    """(1, 0, -n) 在竖直墙左侧探针 β₀ = -1 处的墙列表"""
    v = ideal_points(n)
    return enumerate_walls(v, S, vertical_wall(v, S) - 1, max_rank)
