"""Phase function, stationary points, decay regions and jump matrices."""
import cmath
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS, TOL
from .errors import InputError, NeutralOnContour, OnCriticalPoint, PoleAtZero, WrongRegime


@dataclass(frozen=True)
class RayCoordinates:
    x: float
    t: float
    alpha: float
    z0: float

    @classmethod
    def from_xt(cls, alpha, x, t):
        z0, _ = critical_points(alpha, x, t)
        return cls(float(x), float(t), float(alpha), z0)

    @classmethod
    def from_z0(cls, alpha, z0, t):
        """Ray point x = -alpha t / (4 z0^2) for a prescribed phase point."""
        if z0 <= 0 or t <= 0:
            raise InputError("z0 and t must be positive")
        x = -alpha * t / (4 * z0 * z0)
        return cls.from_xt(alpha, x, t)


def critical_points(alpha, x, t):
    """Stationary points +-sqrt(-alpha t / (4 x)) of theta."""
    if t <= 0:
        raise InputError("t must be positive")
    if alpha * x >= 0:
        raise WrongRegime("alpha * x >= 0: no real stationary points (decaying regime)")
    z0 = math.sqrt(-alpha * t / (4 * x))
    return z0, -z0


def theta(z, ray):
    """theta(z) = z x / t - alpha / (4 z)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise PoleAtZero("theta has a pole at z = 0")
    out = z * ray.x / ray.t - ray.alpha / (4 * z)
    return out if out.ndim else complex(out)


def theta_rewritten(z, ray):
    """Equivalent form -(alpha z / 4)(1/z0^2 + 1/z^2)."""
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise PoleAtZero("theta has a pole at z = 0")
    out = -(ray.alpha * z / 4) * (1 / ray.z0 ** 2 + 1 / z ** 2)
    return out if out.ndim else complex(out)


def theta_prime(z, ray):
    z = np.asarray(z, dtype=complex)
    return ray.x / ray.t + ray.alpha / (4 * z * z)


def exponent(z, ray):
    """Re(2 i t theta(z)); exp of this is |exp(2 i t theta)|."""
    return np.real(2j * ray.t * theta(z, ray))


def decay_sign(z, ray):
    """'grows', 'decays' or 'neutral' for |exp(2 i t theta(z))|."""
    z = complex(z)
    if z.imag == 0:
        return "neutral"
    val = exponent(z, ray)
    if abs(val) < TOL.neutral:
        raise NeutralOnContour(f"Re(2 i t theta) vanishes at z = {z}")
    return "grows" if val > 0 else "decays"


def region_chart(ray, re_range, im_range, n=100):
    """Rows (Re z, Im z, label, Re(2 i t theta)) on an n x n grid avoiding the real axis."""
    rows = []
    for re in np.linspace(*re_range, n):
        for im in np.linspace(*im_range, n):
            z = complex(re, im)
            if z == 0:
                continue
            val = float(exponent(z, ray))
            if im == 0:
                label = "neutral"
            elif abs(val) < TOL.neutral:
                label = "neutral"
            else:
                label = "grows" if val > 0 else "decays"
            rows.append((re, im, label, val))
    return rows


# ---------------------------------------------------------------------------
# Jumps on the real axis


def _r_values(z, sd):
    z = np.atleast_1d(np.asarray(z, dtype=float))
    idx = np.searchsorted(sd.z, z)
    out = np.empty(z.shape, dtype=complex)
    r = sd.r
    for i, (zz, j) in enumerate(zip(z, idx)):
        if j < sd.z.size and sd.z[j] == zz:
            out[i] = r[j]
        else:
            out[i] = sd.r_at(zz)
    return out


def jump_J(z, sd, ray):
    """exp(-i t theta ad sigma3) applied to [[1 - |r|^2, -conj r], [r, 1]]; shape (..., 2, 2)."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    r = _r_values(z, sd)
    e = np.exp(2j * ray.t * theta(z + 0j, ray))
    J = np.empty(z.shape + (2, 2), dtype=complex)
    J[..., 0, 0] = 1 - np.abs(r) ** 2
    J[..., 0, 1] = -np.conj(r) / e
    J[..., 1, 0] = r * e
    J[..., 1, 1] = 1
    return J


def _upper(v):
    return np.array([[1, v], [0, 1]], dtype=complex)


def _lower(v):
    return np.array([[1, 0], [v, 1]], dtype=complex)


def jump_J1_factors(z, sd, dd, ray, spec=None):
    """Triangular factors (left, right) of the conjugated jump at a real z.

    |z| > z0: upper(-conj r delta^2 e^{-2it theta}) * lower(r delta^-2 e^{2it theta});
    |z| < z0: lower(r delta_-^-2 e^{2it theta} / (1-|r|^2)) * upper(-conj r delta_+^2 e^{-2it theta} / (1-|r|^2)).
    """
    from .delta import DEFAULT_SPEC, delta, delta_boundary
    spec = spec or DEFAULT_SPEC
    z = float(z)
    if abs(abs(z) - ray.z0) <= 1e-12 * ray.z0:
        raise OnCriticalPoint(f"z = {z} is a stationary point")
    r = complex(_r_values(z, sd)[0])
    e = cmath.exp(2j * ray.t * theta(z + 0j, ray))
    if abs(z) > ray.z0:
        d = delta(z, dd, spec)
        return _upper(-r.conjugate() * d ** 2 / e), _lower(r / (d ** 2) * e)
    dp, dm = delta_boundary(z, dd, spec)
    g = 1 - abs(r) ** 2
    return _lower(r / dm ** 2 * e / g), _upper(-r.conjugate() * dp ** 2 / e / g)


def jump_J1(z, sd, dd, ray, spec=None):
    """delta_-^{sigma3} J delta_+^{-sigma3} assembled directly."""
    from .delta import DEFAULT_SPEC, delta, delta_boundary
    spec = spec or DEFAULT_SPEC
    z = float(z)
    J = jump_J(z, sd, ray)[0]
    if abs(z) > ray.z0:
        dp = dm = delta(z, dd, spec)
    else:
        dp, dm = delta_boundary(z, dd, spec)
    return np.diag([dm, 1 / dm]) @ J @ np.diag([1 / dp, dp])


# ---------------------------------------------------------------------------
# Contours and the second jump

# segment -> (anchor: +1, -1 or 0, bounded?)
_SEGMENTS = {
    1: (1, False), 2: (1, True), 3: (1, True), 4: (1, False),
    5: (-1, True), 6: (-1, False), 7: (-1, False), 8: (-1, True),
    9: (0, True), 10: (0, True), 11: (0, True), 12: (0, True),
}


@dataclass(frozen=True)
class ContourPoint:
    z: complex
    segment: int
    h: float


def segment_direction(m):
    return cmath.exp(1j * (2 * m - 1) * math.pi / 4)


def segment_length(m, z0):
    anchor, bounded = _SEGMENTS[m]
    return z0 / math.sqrt(2) if bounded else DEFAULTS.contour_truncation * z0


def contour_point(m, h, z0):
    if m not in _SEGMENTS:
        raise InputError(f"unknown contour segment {m}")
    if h < 0 or h > segment_length(m, z0) * (1 + 1e-12):
        raise InputError(f"arc parameter {h} outside segment {m}")
    anchor, _ = _SEGMENTS[m]
    return ContourPoint(anchor * z0 + segment_direction(m) * h, m, float(h))


def sample_segment(m, z0, n=200, include_start=False):
    length = segment_length(m, z0)
    hs = np.linspace(0, length, n + 1)
    if not include_start:
        hs = hs[1:]
    return [contour_point(m, h, z0) for h in hs]


def _power(w, exponent_value):
    # principal branch, cut along the negative real axis of w
    return cmath.exp(exponent_value * cmath.log(w))


def boundary_value_R(p, lm):
    """R_j on its ray, in the form attached to segment p.segment."""
    m = p.segment
    z = p.z
    z0 = lm.z0
    rp, rm = lm.r_plus, lm.r_minus
    npl, nmi = lm.nu_plus, lm.nu_minus
    dp, dm = lm.delta0_plus, lm.delta0_minus
    if m in (1, 2, 3, 4, 9, 12):
        w = z - z0
        g = 1 - abs(rp) ** 2
        if m == 1:
            return rp * dp ** -2 * _power(w, -2j * npl)
        if m in (2, 9):
            return rp.conjugate() / g * dp ** 2 * _power(w, 2j * npl)
        if m in (3, 12):
            return rp / g * dp ** -2 * _power(w, -2j * npl)
        return rp.conjugate() * dp ** 2 * _power(w, 2j * npl)
    w = z + z0
    g = 1 - abs(rm) ** 2
    if m == 6:
        return rm * dm ** -2 * _power(w, -2j * nmi)
    if m in (5, 10):
        return rm.conjugate() / g * dm ** 2 * _power(w, 2j * nmi)
    if m in (8, 11):
        return rm / g * dm ** -2 * _power(w, -2j * nmi)
    return rm.conjugate() * dm ** 2 * _power(w, 2j * nmi)


def _safe_exp(w):
    # the triangular factors decay on their own rays; underflow to zero there
    return 0j if w.real < -700 else cmath.exp(w)


# (triangle, sign): lower carries +-R e^{2it theta}, upper carries +-R e^{-2it theta}
_J2_SHAPE = {
    1: ("lower", 1), 2: ("upper", -1), 9: ("upper", -1), 3: ("lower", -1), 12: ("lower", -1),
    4: ("upper", 1), 5: ("upper", -1), 10: ("upper", -1), 6: ("lower", 1), 7: ("upper", 1),
    8: ("lower", -1), 11: ("lower", -1),
}


def jump_J2(p, lm, ray):
    """Triangular jump on the deformed contour with the ray-wise R_j values."""
    R = boundary_value_R(p, lm)
    shape, sign = _J2_SHAPE[p.segment]
    w = 2j * ray.t * theta(p.z, ray)
    if shape == "lower":
        return _lower(sign * R * _safe_exp(w))
    return _upper(sign * R * _safe_exp(-w))


def jump_deviation(p, lm, ray):
    """Sup-norm of J2 - I at a contour point."""
    return float(np.max(np.sum(np.abs(jump_J2(p, lm, ray) - np.eye(2)), axis=1)))


def central_sup_norm(lm, ray, n=400):
    """max over the segments through the origin of |J2 - I|."""
    best = 0.0
    for m in (9, 10, 11, 12):
        for p in sample_segment(m, ray.z0, n):
            best = max(best, jump_deviation(p, lm, ray))
    return best


def contour_rows(lm, ray, n=50):
    """Rows (Re z, Im z, label, |J2 - I|) over all twelve segments."""
    rows = []
    for m in range(1, 13):
        for p in sample_segment(m, ray.z0, n):
            rows.append((p.z.real, p.z.imag, f"Sigma{m}", jump_deviation(p, lm, ray)))
    return rows
