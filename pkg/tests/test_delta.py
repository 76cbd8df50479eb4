import cmath
import math

import mpmath
import numpy as np
import pytest

from abasym.acceptance import endpoint_exponents
from abasym.delta import (
    beta_phase,
    beta_phase_unit_interval,
    build_delta_data,
    delta,
    delta0,
    delta_boundary,
    delta_rows,
    nu_from_modulus,
    synthetic_delta_data,
)
from abasym.errors import DomainError, InputError, OnBand, ReflectionAtUnitModulus, TooCloseToEndpoint


def _clustered_grid(n=2001, m=400):
    g = np.linspace(-1, 1, n)
    near = np.geomspace(1e-7, 0.5, m)
    return np.unique(np.concatenate([g, 1 - near, -1 + near]))


@pytest.fixture(scope="module")
def smooth_dd():
    g = _clustered_grid()
    return synthetic_delta_data(1.0, 0.05 * (1 - g * g) + 0.02, g)


def test_nu_from_modulus():
    assert nu_from_modulus(0.0) == 0
    r = 0.6
    assert nu_from_modulus(r) == pytest.approx(-math.log(1 - r * r) / (2 * math.pi), rel=1e-15)
    with pytest.raises(ReflectionAtUnitModulus):
        nu_from_modulus([0.2, 1.0])


def test_delta_matches_mpmath_quadrature():
    s = np.linspace(-0.8, 0.8, 3201)
    nu = 0.1 * np.cos(s) ** 2
    dd = synthetic_delta_data(0.8, nu, s)
    for z in (0.2 + 0.3j, -1.5 + 0.0j, 2j, 0.5 - 0.4j):
        ref = complex(mpmath.quad(lambda t: 0.1 * mpmath.cos(t) ** 2 / (t - z), [-0.8, 0, 0.8]))
        assert delta(z, dd) == pytest.approx(cmath.exp(1j * ref), abs=1e-6)


def test_reflection_symmetry(smooth_dd):
    for z in (0.3 + 0.2j, -2 + 1j, 5j):
        assert delta(z, smooth_dd) * np.conj(delta(np.conj(z), smooth_dd)) == pytest.approx(1, abs=1e-13)


def test_unimodular_off_the_band(smooth_dd):
    for x in (-3.0, -1.2, 1.01, 7.0):
        assert abs(delta(x, smooth_dd)) == pytest.approx(1, abs=1e-13)


def test_boundary_jump(smooth_dd):
    for s in (-0.7, 0.0, 0.45):
        dp, dm = delta_boundary(s, smooth_dd)
        nu = float(smooth_dd.nu(s))
        assert dp / dm == pytest.approx(math.exp(-2 * math.pi * nu), rel=1e-13)


def test_boundary_values_are_limits(smooth_dd):
    s, eps = 0.31, 1e-6
    dp, dm = delta_boundary(s, smooth_dd)
    assert delta(s + 1j * eps, smooth_dd) == pytest.approx(dp, abs=1e-4)
    assert delta(s - 1j * eps, smooth_dd) == pytest.approx(dm, abs=1e-4)


def test_large_z_tail(smooth_dd):
    z = 400 * cmath.exp(0.7j)
    assert (delta(z, smooth_dd) - 1) * z == pytest.approx(-1j * smooth_dd.tail_coefficient, rel=5e-3)


def test_band_errors(smooth_dd):
    with pytest.raises(OnBand):
        delta(0.3, smooth_dd)
    with pytest.raises(TooCloseToEndpoint):
        delta_boundary(1.0 - 1e-12, smooth_dd)


def test_delta0_unimodular(smooth_dd):
    for e in ("+z0", "-z0"):
        assert abs(delta0(e, smooth_dd)) == pytest.approx(1, abs=1e-13)
    assert smooth_dd.delta0_plus == pytest.approx(delta0("+", smooth_dd), abs=1e-15)


def test_endpoint_label_checked(smooth_dd):
    with pytest.raises(InputError):
        delta0("middle", smooth_dd)


@pytest.mark.parametrize("z", [-0.4 + 0.3j, 0.8 - 0.2j, 3.0 + 0j])
def test_clean_and_unit_interval_forms_agree(smooth_dd, z):
    for e in (1, -1):
        a = beta_phase(z, e, smooth_dd)
        b = beta_phase_unit_interval(z, e, smooth_dd)
        assert a == pytest.approx(b, abs=1e-12)


def test_literal_pairing_shifts_minus_endpoint_by_constant(smooth_dd):
    z = -0.4 + 0.3j
    b = beta_phase_unit_interval(z, -1, smooth_dd)
    c = beta_phase_unit_interval(z, -1, smooth_dd, pairing="literal")
    assert c - b == pytest.approx(1j * math.pi * smooth_dd.nu_minus_z0, abs=1e-12)
    # at +z0 both pairings coincide
    assert beta_phase_unit_interval(z, 1, smooth_dd, pairing="literal") == pytest.approx(
        beta_phase_unit_interval(z, 1, smooth_dd), abs=1e-12)


def test_local_power_factorization(smooth_dd):
    # delta / (z - z0)^{i nu(z0)} tends to delta0 at +z0
    small = endpoint_exponents(smooth_dd, np.geomspace(1e-4, 1e-2, 5))
    assert all(e > 0.4 for e in small)


def test_smooth_nu_gives_near_linear_remainder(smooth_dd):
    # d log d behaviour: fitted exponent close to 1 for smooth data
    ex = endpoint_exponents(smooth_dd)
    assert all(0.75 < e < 1.0 for e in ex)


def test_cusped_nu_gives_square_root_remainder():
    # nu - nu(endpoint) ~ sqrt(distance) is the case where the exponent drops to 1/2
    g = _clustered_grid()
    nu = 0.05 + 0.1 * np.sqrt(np.clip(1 - np.abs(g), 0, None))
    ex = endpoint_exponents(synthetic_delta_data(1.0, nu, g))
    assert all(0.4 < e < 0.6 for e in ex)


def test_sech_delta(sech_sd, sech_dd):
    assert sech_dd.z0 == 1.0
    assert sech_dd.nu.grid[0] == -1.0 and sech_dd.nu.grid[-1] == 1.0
    assert sech_dd.r_plus == pytest.approx(sech_sd.r_at(1.0))
    rows = delta_rows(sech_dd)
    assert rows.shape[1] == 6
    assert np.all(np.abs(rows[:, 2] ** 2 + rows[:, 3] ** 2 - np.exp(-2 * math.pi * rows[:, 1])) < 1e-12)


def test_z0_outside_grid(sech_sd):
    with pytest.raises(DomainError):
        build_delta_data(sech_sd, 5.0)
    with pytest.raises(DomainError):
        build_delta_data(sech_sd, 0.01)
