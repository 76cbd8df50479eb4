"""Parabolic-cylinder model problems at the phase points +-z0."""
import cmath
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InputError, ZeroReflectionAtPhasePoint
from .numerics import complex_gamma, parabolic_cylinder_D, parabolic_cylinder_D_prime

_SQRT_2PI = math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class LocalModel:
    z0: float
    nu_plus: float
    nu_minus: float
    a1: complex
    a2: complex
    r_plus: complex
    r_minus: complex
    delta0_plus: complex
    delta0_minus: complex
    beta12_plus: complex
    beta21_plus: complex
    beta12_minus: complex
    beta21_minus: complex

    def to_json(self):
        out = {}
        for key, val in asdict(self).items():
            out[key] = [val.real, val.imag] if isinstance(val, complex) else val
        return out


def _nu_of(r):
    return -math.log1p(-abs(r) ** 2) / (2 * math.pi)


def beta12_plus(r, nu):
    """-sqrt(2 pi) e^{-pi nu / 2} e^{-i pi / 4} / (conj(r) Gamma(i nu))."""
    return (-_SQRT_2PI * math.exp(-math.pi * nu / 2) * cmath.exp(-0.25j * math.pi)
            / (complex(r).conjugate() * complex_gamma(1j * nu)))


def beta12_minus(r, nu):
    """sqrt(2 pi) e^{-pi nu / 2} e^{i pi / 4} / (conj(r) Gamma(-i nu))."""
    return (_SQRT_2PI * math.exp(-math.pi * nu / 2) * cmath.exp(0.25j * math.pi)
            / (complex(r).conjugate() * complex_gamma(-1j * nu)))


def _betas(r, nu, formula, allow_zero, label):
    if r == 0 or nu == 0:
        if allow_zero:
            return 0j, 0j
        raise ZeroReflectionAtPhasePoint(f"r({label}) = 0: beta12 is undefined")
    b12 = formula(r, nu)
    return b12, nu / b12


def synthetic_local_model(z0, r_plus, r_minus, delta0_plus=1.0, delta0_minus=1.0, allow_zero=False):
    """LocalModel from prescribed endpoint reflection values."""
    r_plus, r_minus = complex(r_plus), complex(r_minus)
    nu_p, nu_m = _nu_of(r_plus), _nu_of(r_minus)
    b12p, b21p = _betas(r_plus, nu_p, beta12_plus, allow_zero, "+z0")
    b12m, b21m = _betas(r_minus, nu_m, beta12_minus, allow_zero, "-z0")
    return LocalModel(float(z0), nu_p, nu_m, 1j * nu_p, 1j * nu_m, r_plus, r_minus,
                      complex(delta0_plus), complex(delta0_minus), b12p, b21p, b12m, b21m)


def build_local_model(sd, dd, ray, allow_zero=False):
    """Model data at +-z0 from interpolated r(+-z0) and the conjugation data.

    ``sd`` is accepted for interface symmetry; the endpoint values were
    already interpolated when ``dd`` was built from it.
    """
    if abs(dd.z0 - ray.z0) > 1e-12 * ray.z0:
        raise InputError(f"conjugation data built at z0={dd.z0}, ray has z0={ray.z0}")
    r_plus, r_minus = complex(dd.r_plus), complex(dd.r_minus)
    nu_p, nu_m = dd.nu_z0, dd.nu_minus_z0
    b12p, b21p = _betas(r_plus, nu_p, beta12_plus, allow_zero, "+z0")
    b12m, b21m = _betas(r_minus, nu_m, beta12_minus, allow_zero, "-z0")
    return LocalModel(ray.z0, nu_p, nu_m, 1j * nu_p, 1j * nu_m, r_plus, r_minus,
                      dd.delta0_plus, dd.delta0_minus, b12p, b21p, b12m, b21m)


def _rot(c):
    return cmath.exp(c * math.pi * 1j)


def _d(a, c, k):
    return parabolic_cylinder_D(a, _rot(c) * k)


def _dk(a, c, k, sign):
    """d/dk D_a(e^{c pi i} k) + sign * (i k / 2) D_a(e^{c pi i} k)."""
    w = _rot(c) * k
    return _rot(c) * parabolic_cylinder_D_prime(a, w) + sign * 0.5j * k * parabolic_cylinder_D(a, w)


def _raw_plus(k, lm, upper):
    a, nu = lm.a1, lm.nu_plus
    e1, e3 = math.exp(math.pi * nu / 4), math.exp(-3 * math.pi * nu / 4)
    if upper:
        n11 = e1 * _d(-a, -0.25, k)
        n12 = e3 * _dk(a, -0.75, k, +1) / lm.beta21_plus
        n21 = e1 * _dk(-a, -0.25, k, -1) / lm.beta12_plus
        n22 = e3 * _d(a, -0.75, k)
    else:
        n11 = e3 * _d(-a, 0.75, k)
        n12 = e1 * _dk(a, 0.25, k, +1) / lm.beta21_plus
        n21 = e3 * _dk(-a, 0.75, k, -1) / lm.beta12_plus
        n22 = e1 * _d(a, 0.25, k)
    return np.array([[n11, n12], [n21, n22]])


def _raw_minus(k, lm, upper):
    a, nu = lm.a2, lm.nu_minus
    e1, e3 = math.exp(math.pi * nu / 4), math.exp(-3 * math.pi * nu / 4)
    if upper:
        n11 = e3 * _d(a, -0.75, k)
        n12 = e1 * _dk(-a, -0.25, k, -1) / lm.beta21_minus
        n21 = e3 * _dk(a, -0.75, k, +1) / lm.beta12_minus
        n22 = e1 * _d(-a, -0.25, k)
    else:
        n11 = e1 * _d(a, 0.25, k)
        # lower-half 12 entry carries e^{-3 pi nu / 4}; the other weight breaks the jump
        n12 = e3 * _dk(-a, 0.75, k, -1) / lm.beta21_minus
        n21 = e1 * _dk(a, 0.25, k, +1) / lm.beta12_minus
        n22 = e3 * _d(-a, 0.75, k)
    return np.array([[n11, n12], [n21, n22]])


def _half_plane(k, side):
    if side is None:
        if k.imag == 0:
            raise InputError("real k needs side='+' or side='-'")
        return k.imag > 0
    if side in ("+", "upper", 1):
        return True
    if side in ("-", "lower", -1):
        return False
    raise InputError(f"side must be '+' or '-', got {side!r}")


def N_matrix(endpoint, k, lm, side=None):
    """Model solution at +z0 or -z0.

    The half plane follows Im k; for real k pass side='+' (limit from above)
    or side='-'. At +z0 the entries are returned in the row/column order
    that carries the jump [[1 - |r|^2, -conj r], [r, 1]].
    """
    from .delta import _endpoint_sign
    sign = _endpoint_sign(endpoint)
    k = complex(k)
    upper = _half_plane(k, side)
    if lm.beta12_plus == 0 and sign > 0 or lm.beta12_minus == 0 and sign < 0:
        raise ZeroReflectionAtPhasePoint("model undefined when r vanishes at the phase point")
    if sign > 0:
        n = _raw_plus(k, lm, upper)
        return np.array([[n[1, 1], -n[1, 0]], [-n[0, 1], n[0, 0]]])
    return _raw_minus(k, lm, upper)


def model_jump(endpoint, lm):
    """Constant jump across the real k-axis with the scalar factors absorbed."""
    from .delta import _endpoint_sign
    r = lm.r_plus if _endpoint_sign(endpoint) > 0 else lm.r_minus
    return np.array([[1 - abs(r) ** 2, -r.conjugate()], [r, 1]], dtype=complex)


def jump_defect(endpoint, k, lm):
    """max entry of |N_+(k) - N_-(k) V| at real k."""
    k = float(k)
    Np = N_matrix(endpoint, k, lm, side="+")
    Nm = N_matrix(endpoint, k, lm, side="-")
    return float(np.max(np.abs(Np - Nm @ model_jump(endpoint, lm))))


def mtilde1_from_beta(lm):
    """First-moment entries ((M1+)_12, (M1-)_12, (M1)_11) = (i beta12+, -i beta12-, 0)."""
    return 1j * lm.beta12_plus, -1j * lm.beta12_minus, 0j
