import math

import pytest

from mpdsim.units import Constants, DEFAULT_CONSTANTS, SPEED_OF_LIGHT, virtual_mass


def test_canonical_mass_value():
    m = virtual_mass(0.65, 3.0e5)
    assert m == pytest.approx(2.0 * math.pi / (0.65 * 3.0e5), rel=1e-15)
    assert m == pytest.approx(3.222146311374146e-05, rel=1e-12)


def test_si_mass_check():
    hbar_si = 1.05e-34  # J s
    m = virtual_mass(650e-9, 3.0e8, hbar=hbar_si)
    assert m == pytest.approx(3.383e-36, rel=1e-3)


def test_inverse_proportionality_in_wavelength():
    assert virtual_mass(1.3, 3.0e5) == pytest.approx(virtual_mass(0.65, 3.0e5) / 2)


@pytest.mark.parametrize("lam,c", [(0.0, 3e5), (-1.0, 3e5), (0.65, 0.0), (0.65, -1.0)])
def test_invalid_inputs(lam, c):
    with pytest.raises(ValueError):
        virtual_mass(lam, c)


def test_constants_ratio_independent_of_scale():
    base = DEFAULT_CONSTANTS
    scaled = base.scaled(7.5)
    assert scaled.hbar == pytest.approx(7.5 * base.hbar)
    assert scaled.m / scaled.hbar == pytest.approx(base.m / base.hbar, rel=1e-15)
    assert base.c == SPEED_OF_LIGHT


def test_constants_validation():
    with pytest.raises(ValueError):
        Constants(wavelength=-0.65)
    with pytest.raises(ValueError):
        Constants(hbar=0.0)
    with pytest.raises(ValueError):
        DEFAULT_CONSTANTS.scaled(0.0)
