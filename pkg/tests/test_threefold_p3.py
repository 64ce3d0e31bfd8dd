import math
import random
from fractions import Fraction

import pytest

from stabwall.errors import (
    DegenerateDelta,
    InvalidDegree,
    MixedRadicand,
    NonpositiveS,
    UndefinedBetaBar,
    WrongShape,
)
from stabwall.threefold_p3 import (
    UNIT,
    ChernP3,
    Containment,
    QuadraticNumber,
    WitnessReason,
    beta_bar,
    castelnuovo_excluded,
    ch3_at_beta_bar,
    ch_ideal_curve,
    chi_p3,
    chi_pair_p3,
    exp_class,
    line_bundle_p3,
    nu3,
    product_p3,
    q_circle,
    q_form,
    rank_zero_e_bound,
    second_tilt_charge,
    tilt_wall_p3,
    twist_p3,
    wall_inside_q_negative,
)
from stabwall.tilt_plane import SlopeValue, Wall, WallKind

SKYSCRAPER = ChernP3(0, 0, 0, 1)


def _random_p3(rng):
    return ChernP3(rng.randint(-3, 3), rng.randint(-5, 5), Fraction(rng.randint(-12, 12), 2),
                   Fraction(rng.randint(-30, 30), 6))


def test_product():
    v = ChernP3(2, -1, Fraction(3, 2), Fraction(-1, 6))
    assert product_p3(v, UNIT) == v
    assert product_p3(line_bundle_p3(1), line_bundle_p3(-1)) == UNIT
    assert product_p3(line_bundle_p3(1), line_bundle_p3(1)) == ChernP3(1, 2, 2, Fraction(4, 3))
    assert line_bundle_p3(2) == ChernP3(1, 2, 2, Fraction(4, 3))


def test_twist():
    for k in range(-3, 4):
        assert twist_p3(line_bundle_p3(k), k) == UNIT
    assert twist_p3(ChernP3(1, 0, -3, 5), -1) == ChernP3(1, 1, Fraction(-5, 2), Fraction(13, 6))


def test_twist_is_product_with_exp_class():
    rng = random.Random(17)
    for _ in range(100):
        v = _random_p3(rng)
        beta = Fraction(rng.randint(-8, 8), rng.randint(1, 3))
        assert twist_p3(v, beta) == product_p3(v, exp_class(beta))


def test_riemann_roch():
    for k in range(0, 6):
        assert chi_p3(line_bundle_p3(k)) == math.comb(k + 3, 3)
    assert chi_p3(UNIT) == 1
    assert chi_p3(line_bundle_p3(1)) == 4
    assert chi_p3(ch_ideal_curve(3, 0)) == 0
    assert chi_pair_p3(0, UNIT) == 1
    assert chi_pair_p3(3, UNIT) == 0
    assert chi_pair_p3(-2, UNIT) == 10


def test_q_form_values():
    assert q_form(ChernP3(1, 0, -3, 5), 1, -1) == 18
    assert q_form(SKYSCRAPER, 3, Fraction(1, 2)) == 0


@pytest.mark.parametrize("k", range(-5, 6))
def test_q_form_vanishes_on_line_bundles(k):
    v = line_bundle_p3(k)
    # Q 对 t 至多一次、对 β 至多四次，2×5 个点上为零就恒为零
    for t in (0, 1):
        for beta in range(5):
            assert q_form(v, t, beta) == 0
    rng = random.Random(k)
    for _ in range(20):
        t = Fraction(rng.randint(0, 40), rng.randint(1, 7))
        beta = Fraction(rng.randint(-40, 40), rng.randint(1, 7))
        assert q_form(v, t, beta) == 0


def _points_on(wall):
    points = []
    for x in (Fraction(0), Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)):
        if x * x < wall.radius_sq:
            points.append((wall.radius_sq - x * x, wall.center + x))
            points.append((wall.radius_sq - x * x, wall.center - x))
    return points


def test_q_circle():
    v = ChernP3(1, 0, -3, 5)
    wall = q_circle(v)
    assert wall == Wall.circle(Fraction(-5, 2), Fraction(1, 4))
    for t, beta in _points_on(wall):
        assert q_form(v, t, beta) == 0
    v = ch_ideal_curve(5, 3)
    wall = q_circle(v)
    assert wall == Wall.circle(Fraction(-18, 5), Fraction(74, 25))
    for t, beta in _points_on(wall):
        assert q_form(v, t, beta) == 0
    # Q < 0 在圆内，圆外为正
    assert q_form(v, 1, Fraction(-18, 5)) < 0
    assert q_form(v, 4, Fraction(-18, 5)) > 0
    assert q_circle(UNIT).kind is WallKind.EVERYWHERE


def test_p3_slopes_and_walls():
    assert nu3(UNIT, 1, -1) == SlopeValue.finite(0)
    assert tilt_wall_p3(ChernP3(1, 0, -3, 0), ChernP3(1, -1, Fraction(1, 2), 0)) == Wall.circle(
        Fraction(-7, 2), Fraction(25, 4))
    v = ch_ideal_curve(4, 1)
    assert tilt_wall_p3(v, v).kind is WallKind.EVERYWHERE


def test_second_tilt_charge():
    assert second_tilt_charge(SKYSCRAPER, 2, Fraction(-1, 3), 5) == (-1, 0)
    t, s = Fraction(3), Fraction(1, 2)
    assert second_tilt_charge(UNIT, t, 0, s) == (0, -t / 2)
    with pytest.raises(NonpositiveS):
        second_tilt_charge(UNIT, 1, 0, 0)


def test_quadratic_number_arithmetic():
    r2 = QuadraticNumber.sqrt_of(2)
    assert (r2.p, r2.q, r2.D) == (0, 1, 2)
    assert r2 * r2 == 2
    assert Fraction(7, 5) < r2 < Fraction(3, 2)
    assert (1 + r2) * (1 - r2) == -1
    assert (1 / (1 + r2)) == r2 - 1
    assert QuadraticNumber.sqrt_of(Fraction(9, 4)).is_rational
    half = QuadraticNumber.sqrt_of(Fraction(1, 2))
    assert (half.p, half.q, half.D) == (0, Fraction(1, 2), 2)
    assert half * half == Fraction(1, 2)
    assert QuadraticNumber(3, -2, 2).sign() == 1
    assert QuadraticNumber(2, -2, 2).sign() == -1
    assert QuadraticNumber(-3, 2, 2).sign() == -1
    with pytest.raises(MixedRadicand):
        QuadraticNumber(0, 1, 2) + QuadraticNumber(0, 1, 3)


def test_quadratic_number_squarefree():
    r8 = QuadraticNumber.sqrt_of(8)
    assert (r8.p, r8.q, r8.D) == (0, 2, 2)
    assert QuadraticNumber(0, 1, 8) == QuadraticNumber(0, 2, 2)
    assert QuadraticNumber.sqrt_of(2) + r8 == 3 * QuadraticNumber.sqrt_of(2)
    assert QuadraticNumber.sqrt_of(Fraction(8, 3)) == Fraction(2, 3) * QuadraticNumber.sqrt_of(6)
    four = QuadraticNumber(1, 1, 4)
    assert four.is_rational and four == 3
    assert QuadraticNumber(2, -1, 4).sign() == 0


def test_quadratic_number_powers():
    r2 = QuadraticNumber.sqrt_of(2)
    assert r2 ** 0 == 1
    assert r2 ** 3 == 2 * r2
    assert r2 ** -2 == Fraction(1, 2)
    assert (1 + r2) ** -1 == r2 - 1
    with pytest.raises(ZeroDivisionError):
        QuadraticNumber(0) ** -1


def test_beta_bar():
    for n in (3, 5, 7):
        bb = beta_bar(ChernP3(1, 0, -n, 0))
        assert (bb.p, bb.q, bb.D) == (0, -1, 2 * n)
    assert beta_bar(ChernP3(0, 2, 4, 4)) == 2
    assert beta_bar(line_bundle_p3(3)) == 3
    with pytest.raises(UndefinedBetaBar):
        beta_bar(ChernP3(0, 0, 1, 1))
    with pytest.raises(UndefinedBetaBar):
        beta_bar(ChernP3(1, 0, 1, 0))


def test_ch3_at_beta_bar():
    v = ChernP3(1, 0, -4, 6)
    value = ch3_at_beta_bar(v)
    # β̄ = -√8 = -2√2
    assert (value.p, value.q, value.D) == (6, Fraction(-16, 3), 2)
    beta = QuadraticNumber(0, -2, 2)
    assert value == 6 + 4 * beta - beta ** 3 / 6
    assert ch3_at_beta_bar(line_bundle_p3(2)) == 0


def test_beta_bar_kills_ch2():
    rng = random.Random(23)
    checked = 0
    while checked < 100:
        v = _random_p3(rng)
        if (v.ch0 == 0 and v.ch1 == 0) or (v.ch0 != 0 and v.ch1 ** 2 - 2 * v.ch0 * v.ch2 < 0):
            continue
        assert twist_p3(v, beta_bar(v)).ch2 == 0
        checked += 1


def test_rank_zero_e_bound():
    assert rank_zero_e_bound(ChernP3(0, 2, 4, 4))
    assert not rank_zero_e_bound(ChernP3(0, 2, 4, Fraction(14, 3)))
    assert rank_zero_e_bound(ChernP3(0, 2, 0, Fraction(1, 3)))
    with pytest.raises(WrongShape):
        rank_zero_e_bound(UNIT)


def test_wall_inside_q_negative():
    v = ch_ideal_curve(5, 3)
    assert wall_inside_q_negative(v, line_bundle_p3(-3)) is Containment.INSIDE
    assert wall_inside_q_negative(v, line_bundle_p3(-1)) is Containment.NOT_INSIDE
    assert wall_inside_q_negative(ch_ideal_curve(8, 0), line_bundle_p3(-4)) is Containment.WALL_EMPTY
    with pytest.raises(DegenerateDelta):
        wall_inside_q_negative(UNIT, line_bundle_p3(-1))


def test_ch_ideal_curve():
    assert ch_ideal_curve(3, 0) == ChernP3(1, 0, -3, 5)
    assert ch_ideal_curve(4, 1) == ChernP3(1, 0, -4, 8)
    assert ch_ideal_curve(1, 0) == ChernP3(1, 0, -1, 1)


@pytest.mark.parametrize("d,g,excluded", [
    (3, 1, True),
    (3, 0, False),
    (4, 1, False),
    (4, 2, True),
    (5, 2, False),
    (5, 3, True),
])
def test_castelnuovo_examples(d, g, excluded):
    assert castelnuovo_excluded(d, g).excluded is excluded


def test_castelnuovo_witnesses():
    verdict = castelnuovo_excluded(5, 3)
    reasons = {(w.branch, w.a): w.reason for w in verdict.witnesses}
    assert reasons[("twist", 1)] is WitnessReason.NON_DEGENERATE
    assert reasons[("twist", 2)] is WitnessReason.INSIDE_Q_NEGATIVE
    assert reasons[("twist", 3)] is WitnessReason.INSIDE_Q_NEGATIVE
    assert reasons[("twist", 4)] is WitnessReason.WALL_EMPTY
    assert reasons[("rank>=2", None)] is WitnessReason.INSIDE_Q_NEGATIVE
    assert verdict.to_json()["bound"] == "9/4"
    # a = 2 的墙恰好就是 Q 的零点圆，只能靠商的 e 上界排除
    verdict = castelnuovo_excluded(6, 5)
    reasons = {(w.branch, w.a): w.reason for w in verdict.witnesses}
    assert reasons[("twist", 2)] is WitnessReason.E_BOUND_VIOLATED
    assert verdict.excluded
    with pytest.raises(InvalidDegree):
        castelnuovo_excluded(2, 0)
    with pytest.raises(InvalidDegree):
        castelnuovo_excluded(5, -1)


def test_castelnuovo_sweep():
    for d in range(3, 13):
        bound = Fraction(d * d, 4) - d + 1
        for g in range(0, d * d + 1):
            assert castelnuovo_excluded(d, g).excluded == (g > bound), (d, g)
