import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abasym.errors import InputError, PoleError, PoleOnNode, RangeError
from abasym.numerics import (
    QuadratureSpec,
    SampledFunction,
    cauchy_integral,
    complex_gamma,
    cumulative_integral,
    parabolic_cylinder_D,
    parabolic_cylinder_D_prime,
    reciprocal_gamma,
)

finite = st.floats(-6, 6, allow_nan=False)


def test_gamma_small_integers_and_half():
    assert complex_gamma(5) == pytest.approx(24, rel=1e-14)
    assert complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert complex_gamma(-0.5) == pytest.approx(-2 * math.sqrt(math.pi), rel=1e-14)


@settings(max_examples=80, deadline=None)
@given(finite, finite)
def test_gamma_against_mpmath(x, y):
    w = complex(x, y)
    if abs(w - round(x)) < 1e-3 and x <= 0.1:
        return
    ref = complex(mpmath.gamma(mpmath.mpc(x, y)))
    assert abs(complex_gamma(w) - ref) <= 1e-12 * abs(ref)


def test_gamma_poles():
    for n in (0, -1, -7):
        with pytest.raises(PoleError):
            complex_gamma(n)
        assert reciprocal_gamma(n) == 0


@pytest.mark.parametrize("y", [0.01, 0.3, 1.0, 2.5, 6.0])
def test_gamma_imaginary_axis_modulus(y):
    assert abs(complex_gamma(1j * y)) ** 2 == pytest.approx(math.pi / (y * math.sinh(math.pi * y)), rel=1e-12)


def test_gamma_conjugation():
    w = 0.3 - 1.7j
    assert complex_gamma(w.conjugate()) == pytest.approx(complex_gamma(w).conjugate(), rel=1e-14)


@pytest.mark.parametrize("k", [0, 1.5, -2.0, 3 + 4j, 6j, 5.9 * cmath.exp(2.5j)])
def test_d0_is_gaussian(k):
    ref = cmath.exp(-k * k / 4)
    assert abs(parabolic_cylinder_D(0, k) - ref) <= 1e-12 * max(1, abs(ref))


def test_d1_is_k_times_gaussian():
    for k in (0.7, -3.2 + 1j, 9.0):
        assert parabolic_cylinder_D(1, k) == pytest.approx(k * cmath.exp(-k * k / 4), rel=1e-11)


@settings(max_examples=60, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 20), st.floats(-math.pi, math.pi))
def test_pcf_against_mpmath(ar, ai, rk, ak):
    a = complex(ar, ai)
    if abs(a) > 5:
        return
    k = rk * cmath.exp(1j * ak)
    ref = complex(mpmath.pcfd(mpmath.mpc(a), mpmath.mpc(k)))
    val = parabolic_cylinder_D(a, k)
    assert abs(val - ref) <= 1e-9 * max(1.0, abs(ref))


@pytest.mark.parametrize("a", [0.2j, -0.4j, 1.3 - 0.5j])
@pytest.mark.parametrize("k", [0.5, 2 + 1j, -4j, 10 * cmath.exp(0.7j)])
def test_pcf_recurrence(a, k):
    d = [parabolic_cylinder_D(a + s, k) for s in (-1, 0, 1)]
    scale = max(abs(d[2]), abs(k * d[1]), abs(a * d[0]))
    assert abs(d[2] - k * d[1] + a * d[0]) <= 1e-9 * scale


def test_pcf_derivative_against_mpmath():
    for a, k in [(0.3j, 1.1 - 0.4j), (-0.2j, -2.5j), (1.0, 7.0)]:
        ref = complex(mpmath.diff(lambda w: mpmath.pcfd(mpmath.mpc(a), w), mpmath.mpc(k)))
        assert parabolic_cylinder_D_prime(a, k) == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_pcf_window():
    with pytest.raises(RangeError):
        parabolic_cylinder_D(5.5, 1.0)
    with pytest.raises(RangeError):
        parabolic_cylinder_D(0.1, 21.0)


def test_sampled_function_validation():
    with pytest.raises(InputError):
        SampledFunction([0, 1, 1], [0, 0, 0])
    with pytest.raises(InputError):
        SampledFunction([0, 1], [0, 0, 0])
    f = SampledFunction([0, 1, 2], [0, 2, 0])
    assert f(0.5) == 1.0
    assert (f + f)(1) == 4.0
    with pytest.raises(InputError):
        f + SampledFunction([0, 1, 3], [0, 0, 0])


def _mp_cauchy(fun, a, b, z):
    return complex(mpmath.quad(lambda s: fun(s) / (s - z), [a, 0, b]))


def test_cauchy_off_axis_matches_mpmath():
    fun = lambda t: mpmath.cos(3 * t) * (1 - t * t)
    for z in (0.3 + 0.2j, -0.9 - 0.05j, 2 + 1j):
        ref = _mp_cauchy(fun, -1, 1, z)
        errs = []
        for n in (1001, 2001):
            s = np.linspace(-1, 1, n)
            errs.append(abs(cauchy_integral(SampledFunction(s, np.cos(3 * s) * (1 - s * s)), z) - ref))
        assert errs[1] < 1e-5
        # second order in the grid step
        assert errs[0] / errs[1] > 3.5


def test_cauchy_linear_rule_is_exact_for_hat():
    # piecewise-linear data: the linear rule is exact
    f = SampledFunction([-1.0, 0.0, 1.0], [0.0, 1.0, 0.0])
    z = 0.25 + 0.5j
    ref = complex(mpmath.quad(lambda t: (1 - abs(t)) / (t - z), [-1, 0, 1]))
    assert cauchy_integral(f, z) == pytest.approx(ref, abs=1e-14)


def test_principal_value_of_constant():
    f = SampledFunction(np.linspace(-1, 1, 11), np.ones(11))
    x = 0.37
    assert cauchy_integral(f, x) == pytest.approx(math.log((1 - x) / (1 + x)), abs=1e-14)


@pytest.mark.parametrize("rule", ["trapezoid", "gauss"])
def test_rules_agree(rule):
    s = np.linspace(-1, 1, 801)
    f = SampledFunction(s, np.exp(-s * s) * (1 - s * s))
    ref = cauchy_integral(f, 0.123 + 0.05j)
    val = cauchy_integral(f, 0.123 + 0.05j, QuadratureSpec(rule=rule, refinement=4))
    assert val == pytest.approx(ref, abs=1e-4)
    pv_ref = cauchy_integral(f, 0.2)
    assert cauchy_integral(f, 0.2, QuadratureSpec(rule=rule, refinement=2)) == pytest.approx(pv_ref, abs=1e-4)


def test_pole_on_endpoint():
    f = SampledFunction([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(PoleOnNode):
        cauchy_integral(f, 1.0)
    g = SampledFunction([0.0, 1.0], [1.0, 0.0])
    assert math.isfinite(cauchy_integral(g, 1.0).real)


def test_trapezoid_pole_on_node_without_window():
    f = SampledFunction(np.linspace(-1, 1, 5), np.ones(5) * 0.5)
    with pytest.raises(PoleOnNode):
        cauchy_integral(f, 0.0, QuadratureSpec(rule="trapezoid", pv_window=0.1))


def test_cumulative_integral():
    s = np.linspace(0, math.pi, 2001)
    F = cumulative_integral(SampledFunction(s, np.sin(s)))
    assert F.values[0] == 0
    assert F.values[-1] == pytest.approx(2.0, abs=1e-6)
