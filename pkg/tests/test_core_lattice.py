import random
from fractions import Fraction

import pytest

from stabwall.core_lattice import (
    K3_DEG4,
    P2,
    ChernSurface,
    SurfaceData,
    bogomolov_ok,
    delta,
    delta_bar,
    discriminants,
    euler_surface,
    format_rational,
    genus_in_linear_system,
    ideal_points,
    line_bundle,
    load_surface,
    mu_slope,
    parse_rational,
    resolve_surface,
    surface_preset,
    twist_surface,
)
from stabwall.errors import NonIntegralGenus, NonpositiveT, ParseError, UnknownPreset


def test_parse_rational_exact():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    assert parse_rational(" 7 / 2 ") == Fraction(7, 2)
    assert parse_rational(5) == 5


@pytest.mark.parametrize("bad", ["0.5", 0.5, True, "1/0", "abc", "", "1/2/3"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ParseError):
        parse_rational(bad)


def test_format_rational():
    assert format_rational(Fraction(-9, 2)) == "-9/2"
    assert format_rational(Fraction(4, 2)) == "2"
    assert parse_rational(format_rational(Fraction(-17, 6))) == Fraction(-17, 6)


def test_line_bundle_self_twist():
    for S in (P2, K3_DEG4):
        for k in range(-3, 4):
            assert twist_surface(line_bundle(k, S), k, S) == ChernSurface(1, 0, 0)


def test_twist_group_law():
    rng = random.Random(19)
    for _ in range(200):
        S = rng.choice([P2, K3_DEG4])
        v = ChernSurface(rng.randint(-3, 3), rng.randint(-5, 5), Fraction(rng.randint(-20, 20), 2))
        b1 = Fraction(rng.randint(-10, 10), rng.randint(1, 4))
        b2 = Fraction(rng.randint(-10, 10), rng.randint(1, 4))
        assert twist_surface(v, 0, S) == v
        assert twist_surface(twist_surface(v, b1, S), b2, S) == twist_surface(v, b1 + b2, S)


def test_delta_twist_invariant():
    rng = random.Random(7)
    for _ in range(200):
        v = ChernSurface(rng.randint(-3, 3), rng.randint(-5, 5), Fraction(rng.randint(-20, 20), 2))
        beta = Fraction(rng.randint(-10, 10), rng.randint(1, 4))
        for S in (P2, K3_DEG4):
            assert delta(twist_surface(v, beta, S), S) == delta(v, S)
            assert delta_bar(v, S) == S.h_squared * delta(v, S)


def test_euler_characteristic_p2():
    for k in range(0, 6):
        assert euler_surface(line_bundle(k, P2), P2) == Fraction((k + 1) * (k + 2), 2)
    assert euler_surface(ideal_points(4), P2) == -3


def test_euler_characteristic_additive():
    rng = random.Random(29)
    for _ in range(200):
        S = rng.choice([P2, K3_DEG4])
        v = ChernSurface(rng.randint(-3, 3), rng.randint(-5, 5), Fraction(rng.randint(-20, 20), 2))
        w = ChernSurface(rng.randint(-3, 3), rng.randint(-5, 5), Fraction(rng.randint(-20, 20), 2))
        assert euler_surface(v + w, S) == euler_surface(v, S) + euler_surface(w, S)
        assert euler_surface(-v, S) == -euler_surface(v, S)


def test_genus():
    assert genus_in_linear_system(P2) == 0
    assert genus_in_linear_system(K3_DEG4) == 3
    bad = SurfaceData(name="bad", h_squared=1, h_dot_k=0, chi_o=1)
    with pytest.raises(NonIntegralGenus):
        genus_in_linear_system(bad)


def test_discriminants_with_bogomolov_constant():
    S = SurfaceData(name="c2", h_squared=1, h_dot_k=-3, chi_o=1, c_bogomolov="2")
    report = discriminants(ChernSurface(1, 0, -4), S, 1, -1)
    assert report.delta == 8
    assert report.delta_bar == 8
    assert report.delta_c == 10
    assert discriminants(ChernSurface(1, 0, -4), P2, 1, -1).delta_c == 8
    with pytest.raises(NonpositiveT):
        discriminants(ChernSurface(1, 0, -4), P2, -1, 0)


def test_bogomolov_and_mu():
    assert bogomolov_ok(ideal_points(3), P2)
    assert not bogomolov_ok(ChernSurface(1, 0, 1), P2)
    assert mu_slope(ChernSurface(2, 1, 0)) == Fraction(1, 2)
    assert mu_slope(ChernSurface(0, 1, 0)) is None


def test_presets():
    assert surface_preset("p2") == P2
    assert surface_preset("k3_deg4") == K3_DEG4
    assert resolve_surface(P2) is P2
    with pytest.raises(UnknownPreset):
        surface_preset("nope")


def test_load_surface_file(tmp_path):
    path = tmp_path / "quadric.toml"
    path.write_text('[surface]\nh_squared = 2\nh_dot_k = -4\nchi_o = 1\n', encoding='utf-8')
    S = resolve_surface(str(path))
    assert S.name == "quadric"
    assert S.h_squared == 2
    assert S.c_bogomolov == 0
    assert genus_in_linear_system(S) == 0
    with pytest.raises(UnknownPreset):
        load_surface(tmp_path / "missing.toml")


def test_chern_parse():
    v = ChernSurface.parse("1,0,-4")
    assert v == ideal_points(4)
    assert v.to_json() == ["1", "0", "-4"]
    assert v - line_bundle(-1, P2) == ChernSurface(0, 1, Fraction(-9, 2))
    with pytest.raises(ParseError):
        ChernSurface.parse("1,0")
