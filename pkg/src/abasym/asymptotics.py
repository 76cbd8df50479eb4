"""Leading-order long-time behaviour of A and B along rays x / t = const."""
import math
from dataclasses import dataclass, field

import numpy as np

from .delta import DEFAULT_SPEC, build_delta_data
from .errors import ABError, WrongRegime
from .local_model import LocalModel, build_local_model, mtilde1_from_beta
from .numerics import SampledFunction
from .phase import RayCoordinates

ERROR_ORDER = "O(t^{-1})"


@dataclass(frozen=True)
class AsymptoticSolution:
    x: float
    t: float
    z0: float
    A_leading: complex
    B_leading: float
    error_order: str
    model: LocalModel = field(repr=False)


def _prefactor(lm, ray):
    if ray.alpha * ray.x >= 0 or ray.t <= 0:
        raise WrongRegime("leading term requires alpha * x < 0 and t > 0")
    return 4 * math.sqrt(ray.z0 / (-ray.alpha * ray.t))


def leading_A(lm, ray):
    """4 sqrt(z0 / (-alpha t)) (i beta12(+z0) - i beta12(-z0)), via the first moments."""
    m_plus, m_minus, _ = mtilde1_from_beta(lm)
    return _prefactor(lm, ray) * (m_plus + m_minus)


def leading_A_direct(lm, ray):
    return _prefactor(lm, ray) * (1j * lm.beta12_plus - 1j * lm.beta12_minus)


def leading_B(lm, ray):
    _prefactor(lm, ray)
    return 0.0


def solve_ray(sd, ray, dd=None, spec=DEFAULT_SPEC):
    """Leading term at one (x, t); a vanishing r(+-z0) gives a zero contribution."""
    dd = dd if dd is not None else build_delta_data(sd, ray.z0, spec)
    lm = build_local_model(sd, dd, ray, allow_zero=True)
    return AsymptoticSolution(ray.x, ray.t, ray.z0, leading_A(lm, ray), leading_B(lm, ray), ERROR_ORDER, lm)


def envelope_profile(sd, alpha, t, x_samples, spec=DEFAULT_SPEC):
    """Leading |A|-carrying profile A(x, t) over x at fixed t.

    Returns (SampledFunction of A over the successful samples, {x: error}).
    Conjugation data is shared between samples with the same z0.
    """
    cache = {}
    xs, vals, errors = [], [], {}
    for x in x_samples:
        try:
            ray = RayCoordinates.from_xt(alpha, x, t)
            if ray.z0 not in cache:
                cache[ray.z0] = build_delta_data(sd, ray.z0, spec)
            sol = solve_ray(sd, ray, cache[ray.z0], spec)
        except ABError as exc:
            errors[float(x)] = f"{type(exc).__name__}: {exc}"
            continue
        xs.append(float(x))
        vals.append(sol.A_leading)
    if len(xs) >= 2:
        order = np.argsort(xs)
        profile = SampledFunction(np.asarray(xs)[order], np.asarray(vals, dtype=complex)[order])
    else:
        profile = None
    return profile, errors


ASYMPTOTIC_COLUMNS = ("x", "t", "z0", "Re A", "Im A", "|A|", "B", "error_order")


def asymptotic_row(sol):
    return (sol.x, sol.t, sol.z0, sol.A_leading.real, sol.A_leading.imag, abs(sol.A_leading),
            sol.B_leading, sol.error_order)
