import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abasym.acceptance import jump_decay_slope
from abasym.errors import InputError, NeutralOnContour, OnCriticalPoint, PoleAtZero, WrongRegime
from abasym.local_model import synthetic_local_model
from abasym.phase import (
    RayCoordinates,
    _J2_SHAPE,
    central_sup_norm,
    contour_point,
    contour_rows,
    critical_points,
    decay_sign,
    exponent,
    jump_J,
    jump_J1,
    jump_J1_factors,
    jump_J2,
    region_chart,
    sample_segment,
    segment_length,
    theta,
    theta_prime,
    theta_rewritten,
)

RAY = RayCoordinates.from_z0(-1.0, 1.0, 40.0)


def test_ray_point():
    assert RAY.x == pytest.approx(10.0)
    assert RAY.z0 == pytest.approx(1.0)
    back = RayCoordinates.from_xt(-1.0, 10.0, 40.0)
    assert back.z0 == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3).filter(lambda a: abs(a) > 0.05), st.floats(0.1, 100), st.floats(0.1, 100))
def test_stationary_points(alpha, t, mag):
    x = -math.copysign(mag, alpha)
    z0, zm = critical_points(alpha, x, t)
    assert zm == -z0
    ray = RayCoordinates(x, t, alpha, z0)
    assert abs(theta_prime(z0, ray)) < 1e-12 * (abs(x / t) + abs(alpha) / z0 ** 2)


def test_wrong_regime():
    with pytest.raises(WrongRegime):
        critical_points(-1.0, -5.0, 10.0)
    with pytest.raises(InputError):
        critical_points(-1.0, 5.0, 0.0)


@settings(max_examples=50, deadline=None)
@given(st.complex_numbers(max_magnitude=10).filter(lambda z: abs(z) > 1e-3))
def test_rewritten_theta(z):
    assert theta(z, RAY) == pytest.approx(theta_rewritten(z, RAY), rel=1e-12, abs=1e-12)


def test_pole_at_zero():
    with pytest.raises(PoleAtZero):
        theta(0j, RAY)


def test_decay_signs():
    assert decay_sign(0.7, RAY) == "neutral"
    labels = {decay_sign(z, RAY) for z in (0.5 + 0.1j, 1.5 + 0.1j, 0.5 - 0.1j, 1.5 - 0.1j)}
    assert labels == {"grows", "decays"}
    # upper half: outside the band the factor e^{2it theta} decays
    assert decay_sign(2 + 0.3j, RAY) == "decays"
    assert decay_sign(0.5 + 0.3j, RAY) == "grows"


def test_neutral_off_axis_raises():
    # Re(2 i t theta) vanishes on the imaginary axis at |z| = z0
    with pytest.raises(NeutralOnContour):
        decay_sign(1j * RAY.z0, RAY)


def test_region_chart():
    rows = region_chart(RAY, (-2, 2), (-1, 1), n=21)
    labels = {r[2] for r in rows}
    assert labels == {"grows", "decays", "neutral"}
    for re, im, lab, val in rows:
        if lab == "grows":
            assert val > 0


def test_real_axis_jump(sech_sd):
    J = jump_J(sech_sd.z[::50], sech_sd, RAY)
    assert J.shape[-2:] == (2, 2)
    assert np.max(np.abs(np.linalg.det(J) - 1)) < 1e-12


@pytest.mark.parametrize("z", [-2.3, -0.6, 0.2, 0.85, 1.7])
def test_conjugated_jump_factorizes(sech_sd, sech_dd, z):
    left, right = jump_J1_factors(z, sech_sd, sech_dd, RAY)
    assert np.max(np.abs(left @ right - jump_J1(z, sech_sd, sech_dd, RAY))) < 1e-9


def test_factorization_rejects_stationary_point(sech_sd, sech_dd):
    with pytest.raises(OnCriticalPoint):
        jump_J1_factors(1.0, sech_sd, sech_dd, RAY)


def test_contour_geometry():
    for m in range(1, 13):
        pts = sample_segment(m, 1.0, 10)
        assert len(pts) == 10
        assert pts[-1].h == pytest.approx(segment_length(m, 1.0))
    with pytest.raises(InputError):
        contour_point(13, 0.1, 1.0)
    with pytest.raises(InputError):
        contour_point(9, 1.0, 1.0)
    assert contour_point(9, 1 / math.sqrt(2), 1.0).z == pytest.approx(0.5 + 0.5j)


@pytest.mark.parametrize("m", range(1, 13))
def test_every_triangular_factor_decays(m):
    # the exponential carried by each segment's factor is bounded by one away from +-z0
    shape, _ = _J2_SHAPE[m]
    for p in sample_segment(m, RAY.z0, 40):
        w = exponent(p.z, RAY)
        assert (w if shape == "lower" else -w) <= 1e-12


def test_j2_unimodular_and_small_far_out():
    lm = synthetic_local_model(1.0, 0.4, 0.3 + 0.2j)
    for m in range(1, 13):
        for p in sample_segment(m, 1.0, 20):
            assert abs(np.linalg.det(jump_J2(p, lm, RAY)) - 1) < 1e-12
    far = contour_point(1, 8.0, 1.0)
    assert np.max(np.abs(jump_J2(far, lm, RAY) - np.eye(2))) < 1e-12


def test_central_decay_rate():
    lm = synthetic_local_model(1.0, 0.4, 0.4)
    slope = jump_decay_slope(lm)
    assert slope == pytest.approx(-0.25, abs=1e-3)


def test_central_norm_decreases():
    lm = synthetic_local_model(1.0, 0.5, 0.5)
    vals = [central_sup_norm(lm, RayCoordinates.from_z0(-1.0, 1.0, t), n=100) for t in (10, 20, 40)]
    assert vals[0] > vals[1] > vals[2]


def test_contour_rows():
    lm = synthetic_local_model(1.0, 0.4, 0.4)
    rows = contour_rows(lm, RAY, n=5)
    assert len(rows) == 60
    assert {r[2] for r in rows} == {f"Sigma{m}" for m in range(1, 13)}
