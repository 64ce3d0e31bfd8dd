from fractions import Fraction

import pytest

from stabwall.core_lattice import K3_DEG4, P2, ChernSurface, SurfaceData
from stabwall.errors import HypothesisViolated
from stabwall.hilbert_nef import (
    DivisorHilb,
    divisor_from_wall_center,
    donaldson_image,
    is_extremal,
    nef_divisor_hilb,
    nef_from_largest_wall,
)
from stabwall.wall_enum import largest_wall_ideal_sheaf

HALF = Fraction(1, 2)


def test_donaldson_image():
    assert donaldson_image(ChernSurface(1, 0, 7), P2).as_tuple() == (0, 0, HALF)
    assert donaldson_image(ChernSurface(0, 1, 3), P2).as_tuple() == (0, -1, 0)
    assert donaldson_image(ChernSurface(0, 0, 1), P2).as_tuple() == (0, 0, 0)


def test_donaldson_image_additive():
    v, w = ChernSurface(2, -3, Fraction(1, 2)), ChernSurface(-1, 4, 6)
    assert donaldson_image(v + w, K3_DEG4) == donaldson_image(v, K3_DEG4) + donaldson_image(w, K3_DEG4)


def test_divisor_from_wall_center():
    assert divisor_from_wall_center(Fraction(-9, 2)).as_tuple() == (HALF, Fraction(9, 2), -HALF)
    assert divisor_from_wall_center(0).as_tuple() == (HALF, 0, -HALF)
    assert divisor_from_wall_center(0).combined_h is None


def test_nef_divisor_p2():
    D = nef_divisor_hilb(P2, 4)
    assert D == DivisorHilb(HALF, Fraction(9, 2), -HALF, Fraction(3))
    assert D.to_json() == {"coef_k": "1/2", "coef_h": "9/2", "coef_e": "-1/2", "combined_h": "3"}


def test_nef_divisor_k3():
    D = nef_divisor_hilb(K3_DEG4, 4)
    assert D.as_tuple() == (HALF, Fraction(3, 2), -HALF)
    assert D.combined_h == Fraction(3, 2)
    with pytest.raises(HypothesisViolated):
        nef_divisor_hilb(K3_DEG4, 3)
    with pytest.raises(HypothesisViolated):
        nef_divisor_hilb(P2, 0)


@pytest.mark.parametrize("n", range(2, 21))
def test_wall_center_reproduces_nef_divisor(n):
    center = largest_wall_ideal_sheaf(n, P2, verify=False).wall.center
    assert divisor_from_wall_center(center, P2) == nef_divisor_hilb(P2, n)


def test_nef_from_largest_wall():
    divisor, candidate = nef_from_largest_wall(4, P2, verify=False)
    assert divisor == nef_divisor_hilb(P2, 4)
    assert candidate.wall.center == Fraction(-9, 2)


def test_extremality():
    assert is_extremal(P2, 4) == (True, 0)
    assert is_extremal(K3_DEG4, 4) == (True, 3)
    sextic = SurfaceData(name="sextic", h_squared=6, h_dot_k=0, chi_o=2)
    assert is_extremal(sextic, 6) == (True, 4)
    big_genus = SurfaceData(name="big_genus", h_squared=6, h_dot_k=6, chi_o=1)
    assert is_extremal(big_genus, 6) == (False, 7)
    assert is_extremal(big_genus, 8) == (True, 7)
    with pytest.raises(HypothesisViolated):
        is_extremal(big_genus, 5)
