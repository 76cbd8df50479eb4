"""Jost solutions, scattering coefficients and the reflection coefficient.

The spectral problem is integrated in the oscillation-removed variable
psi = phi * exp(i z x sigma3), where phi solves phi_x = U phi with
U = [[-iz, q], [conj(q), iz]] and q = i A / 2. Each grid cell is advanced with
the fourth-order Magnus exponential built from the two Gauss-Legendre points,
so every step lies in SU(1,1) for real z.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .config import DEFAULTS, TOL
from .errors import (
    BlowUp,
    ContourTooCoarse,
    DomainError,
    InputError,
    SolitonsPresent,
    UnitarityViolation,
)

# Sign s in r(z; t) = r(z; 0) * exp(s * i * alpha * t / (2 z)); fixed against the PDE oracle.
PHASE_SIGN = -1


@dataclass(frozen=True)
class ModelParameters:
    alpha: float = -1.0
    beta: float = 1.0
    gamma: float = -1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise InputError(f"{name} must be finite")
        if abs(self.beta * self.gamma + 1.0) > TOL.beta_gamma:
            raise InputError("the model requires beta * gamma = -1")
        if self.alpha == 0:
            raise InputError("alpha must be nonzero")


@dataclass(frozen=True)
class InitialData:
    """Samples of A0 (complex) and B0 (real) on a uniform grid."""
    x: np.ndarray
    A0: np.ndarray
    B0: np.ndarray
    label: str = "samples"
    check_decay: bool = True

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        A0 = np.asarray(self.A0, dtype=complex)
        B0 = np.asarray(self.B0, dtype=float)
        if x.ndim != 1 or x.size < 256:
            raise InputError("the x-grid needs at least 256 nodes")
        if A0.shape != x.shape or B0.shape != x.shape:
            raise InputError("A0, B0 and x must have equal length")
        dx = np.diff(x)
        if np.any(dx <= 0) or np.ptp(dx) > 1e-9 * dx.mean():
            raise InputError("the x-grid must be uniform and increasing")
        if not (np.all(np.isfinite(A0)) and np.all(np.isfinite(B0))):
            raise InputError("initial data must be finite")
        if self.check_decay:
            ends = max(abs(A0[0]), abs(A0[-1]), abs(B0[0]), abs(B0[-1]))
            if ends > TOL.endpoint_decay:
                raise InputError(f"initial data do not decay at the grid ends (|.| = {ends:.3g})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "A0", A0)
        object.__setattr__(self, "B0", B0)

    @property
    def step(self):
        return (self.x[-1] - self.x[0]) / (self.x.size - 1)

    @property
    def b0_nonzero(self):
        return bool(np.any(self.B0 != 0))


PROFILES = {
    "zero": lambda x, c: np.zeros_like(x, dtype=complex),
    "sech": lambda x, c: c / np.cosh(x) + 0j,
    "gauss": lambda x, c: c * np.exp(-x * x) + 0j,
}


def uniform_grid(x_min, x_max, n):
    return np.linspace(x_min, x_max, n)


def make_profile(name, amplitude=DEFAULTS.amplitude, x_min=-DEFAULTS.half_width,
                 x_max=DEFAULTS.half_width, n=DEFAULTS.x_nodes):
    """Named initial profile with B0 = 0."""
    if name not in PROFILES:
        raise InputError(f"unknown profile {name!r}; choose from {sorted(PROFILES)}")
    x = uniform_grid(x_min, x_max, n)
    return InitialData(x, PROFILES[name](x, amplitude), np.zeros_like(x), label=name)


# ---------------------------------------------------------------------------
# Magnus propagator

_C1 = 0.5 - math.sqrt(3) / 6
_C2 = 0.5 + math.sqrt(3) / 6


def _lagrange_weights(offsets, c):
    w = []
    for i, oi in enumerate(offsets):
        v = 1.0
        for j, oj in enumerate(offsets):
            if j != i:
                v *= (c - oj) / (oi - oj)
        w.append(v)
    return np.array(w)


def gauss_point_values(A):
    """Cubic interpolation of A to the two Gauss points of every cell."""
    n = A.size
    out = np.empty((2, n - 1), dtype=complex)
    interior = np.arange(1, n - 2)
    offsets = (-1, 0, 1, 2)
    for row, c in enumerate((_C1, _C2)):
        w = _lagrange_weights(offsets, c)
        out[row, interior] = sum(w[i] * A[interior + offsets[i]] for i in range(4))
        wl = _lagrange_weights((0, 1, 2, 3), c)
        out[row, 0] = np.dot(wl, A[0:4])
        wr = _lagrange_weights((-2, -1, 0, 1), c)
        out[row, n - 2] = np.dot(wr, A[n - 4:n])
    return out


def _sinhc(k):
    small = np.abs(k) < 1e-4
    safe = np.where(small, 1.0, k)
    k2 = k * k
    return np.where(small, 1 + k2 / 6 + k2 * k2 / 120, np.sinh(safe) / safe)


def _cell_exponential(z, q1, q2, h):
    """exp(Omega) for one cell as entries (e11, e12, e21, e22), vectorized in z."""
    p1, p2 = np.conj(q1), np.conj(q2)
    K = math.sqrt(3) * h * h / 12
    a = -1j * z * h + K * (q2 * p1 - q1 * p2)
    b = 0.5 * h * (q1 + q2) - 2j * K * z * (q1 - q2)
    c = 0.5 * h * (p1 + p2) + 2j * K * z * (p1 - p2)
    kappa = np.sqrt(a * a + b * c)
    ch = np.cosh(kappa)
    sh = _sinhc(kappa)
    return ch + sh * a, sh * b, sh * c, ch - sh * a


def _march(z, qg, h, start, stop, column, forward):
    """Carry one Jost column across cells [start, stop) of the grid.

    Column 1 carries the factor exp(+izx), column 2 exp(-izx)."""
    z = np.asarray(z, dtype=complex)
    u = np.zeros_like(z)
    w = np.zeros_like(z)
    if column == 1:
        u[...] = 1.0
    else:
        w[...] = 1.0
    # stepping away from the launch point: exp(+izh) for (1, forward) and (2, backward)
    phase = np.exp(1j * z * h) if (column == 1) == forward else np.exp(-1j * z * h)
    cells = range(start, stop) if forward else range(stop - 1, start - 1, -1)
    for count, j in enumerate(cells):
        e11, e12, e21, e22 = _cell_exponential(z, qg[0, j], qg[1, j], h)
        if forward:
            u, w = phase * (e11 * u + e12 * w), phase * (e21 * u + e22 * w)
        else:
            # inverse of a unimodular 2x2 matrix
            u, w = phase * (e22 * u - e12 * w), phase * (-e21 * u + e11 * w)
        if count % 256 == 255:
            _check_growth(u, w)
    _check_growth(u, w)
    return np.stack([u, w])


def _check_growth(u, w):
    norm = np.sqrt(np.abs(u) ** 2 + np.abs(w) ** 2)
    if not np.all(np.isfinite(norm)) or np.any(norm > TOL.blowup):
        raise BlowUp("Jost column grew beyond the admissible bound; check the sign of Im z")


@dataclass
class JostPair:
    """Jost columns at x_ref; entries have shape (2, nz) or are None when the
    column is not defined for the requested z."""
    z: np.ndarray
    x_ref: float
    psi_minus_col1: np.ndarray | None = None
    psi_plus_col2: np.ndarray | None = None
    psi_minus_col2: np.ndarray | None = None
    psi_plus_col1: np.ndarray | None = None


def _ref_index(data, x_ref):
    j = int(np.argmin(np.abs(data.x - x_ref)))
    return j, float(data.x[j])


def jost_columns(data, z, x_ref=0.0, columns=("m1", "p2", "m2", "p1")):
    """All requested Jost columns at the grid node nearest to x_ref.

    Column keys: m1 = psi_-^1 (Im z >= 0), p2 = psi_+^2 (Im z >= 0),
    m2 = psi_-^2 (Im z <= 0), p1 = psi_+^1 (Im z <= 0).
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    qg = 0.5j * gauss_point_values(data.A0)
    h = data.step
    jr, xr = _ref_index(data, x_ref)
    last = data.x.size - 1
    pair = JostPair(z=z, x_ref=xr)
    upper = np.all(z.imag >= 0)
    lower = np.all(z.imag <= 0)
    plan = {
        "m1": ("psi_minus_col1", 1, True, upper),
        "p2": ("psi_plus_col2", 2, False, upper),
        "m2": ("psi_minus_col2", 2, True, lower),
        "p1": ("psi_plus_col1", 1, False, lower),
    }
    for key in columns:
        name, col, from_left, allowed = plan[key]
        if not allowed:
            raise DomainError(f"column {key} requires Im z of the other sign")
        if from_left:
            val = _march(z, qg, h, 0, jr, col, forward=True)
        else:
            val = _march(z, qg, h, jr, last, col, forward=False)
        setattr(pair, name, val)
    return pair


def jost_solve(data, z, side, x_ref=0.0):
    """Jost columns launched from the left (psi_-) or right (psi_+) end.

    For real z both columns are returned; off the axis only the column that
    is bounded for that half-plane is computed, the other is None.
    """
    if side not in ("left", "right"):
        raise InputError("side must be 'left' or 'right'")
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if side == "left":
        keys = [k for k, ok in (("m1", np.all(z.imag >= 0)), ("m2", np.all(z.imag <= 0))) if ok]
    else:
        keys = [k for k, ok in (("p2", np.all(z.imag >= 0)), ("p1", np.all(z.imag <= 0))) if ok]
    if not keys:
        raise DomainError("z samples straddle the real axis; split them by half-plane")
    return jost_columns(data, z, x_ref, keys)


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def scattering_coefficients(data, z, x_ref=0.0):
    """s11 = det(psi_-^1, psi_+^2) and s21 = exp(-2izx) det(psi_+^1, psi_-^1)."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(np.abs(z) < DEFAULTS.z_min - 1e-12):
        raise DomainError(f"|z| must be at least {DEFAULTS.z_min}")
    pair = jost_columns(data, z, x_ref, ("m1", "p2", "p1"))
    s11 = _det(pair.psi_minus_col1, pair.psi_plus_col2)
    s21 = np.exp(-2j * z * pair.x_ref) * _det(pair.psi_plus_col1, pair.psi_minus_col1)
    return s11, s21


def conjugate_partners(data, z, x_ref=0.0):
    """Directly computed s22 = det(psi_+^1, psi_-^2) and s12 = exp(2izx) det(psi_-^2, psi_+^2)."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    pair = jost_columns(data, z, x_ref, ("p2", "m2", "p1"))
    s22 = _det(pair.psi_plus_col1, pair.psi_minus_col2)
    s12 = np.exp(2j * z * pair.x_ref) * _det(pair.psi_minus_col2, pair.psi_plus_col2)
    return s22, s12


# ---------------------------------------------------------------------------
# Scattering data on a spectral grid


def default_z_grid(z_max=DEFAULTS.z_max, n=DEFAULTS.z_nodes, z_min=DEFAULTS.z_min):
    """Uniform grid on [-z_max, z_max] with the dead zone |z| < z_min removed."""
    z = np.linspace(-z_max, z_max, n)
    return z[np.abs(z) >= z_min - 1e-12]


@dataclass(frozen=True)
class ScatteringData:
    """Scattering coefficients on a real spectral grid.

    r is stored in polar form so that time evolution changes only its phase.
    """
    z: np.ndarray
    s11: np.ndarray
    s21: np.ndarray
    r_mod: np.ndarray
    r_arg: np.ndarray
    h11_norm: float = float("nan")
    meta: dict = field(default_factory=dict)

    @property
    def r(self):
        return self.r_mod * np.exp(1j * self.r_arg)

    @property
    def unitarity_defect(self):
        return float(np.max(np.abs(np.abs(self.s11) ** 2 - np.abs(self.s21) ** 2 - 1.0)))

    def r_at(self, zq):
        """Cubic interpolation of r at an off-grid point, within one side of the dead zone."""
        return _cubic_at(self.z, self.r, zq)


def _segments(z):
    # split where spacing jumps (the dead zone)
    dz = np.diff(z)
    cut = np.nonzero(dz > 1.5 * np.median(dz))[0]
    edges = np.concatenate(([0], cut + 1, [z.size]))
    return [slice(edges[i], edges[i + 1]) for i in range(edges.size - 1)]


def _cubic_at(z, values, zq):
    zq = float(zq)
    for seg in _segments(z):
        zs = z[seg]
        if zs[0] - 1e-12 <= zq <= zs[-1] + 1e-12:
            if zs.size < 4:
                return complex(np.interp(zq, zs, values[seg]))
            j = int(np.clip(np.searchsorted(zs, zq) - 2, 0, zs.size - 4))
            nodes = zs[j:j + 4]
            w = [np.prod([(zq - nodes[m]) / (nodes[i] - nodes[m]) for m in range(4) if m != i]) for i in range(4)]
            return complex(np.dot(w, values[seg][j:j + 4]))
    raise DomainError(f"z = {zq} lies outside the sampled spectral grid")


def sobolev_norm_h11(sd):
    """Discrete H^{1,1} norm of r: sqrt of the trapezoid sum of (1+z^2)(|r|^2+|r'|^2)
    with finite-difference r', taken separately on each side of the dead zone."""
    r = sd.r
    total = 0.0
    for seg in _segments(sd.z):
        zs, rs = sd.z[seg], r[seg]
        if zs.size < 2:
            continue
        dr = np.gradient(rs, zs)
        total += np.trapezoid((1 + zs ** 2) * (np.abs(rs) ** 2 + np.abs(dr) ** 2), zs)
    return float(math.sqrt(total))


def _parallel(fn, z, threads):
    if threads <= 1 or z.size < 2 * threads:
        return fn(z)
    chunks = np.array_split(z, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(fn, chunks))
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(len(parts[0])))


def reflection(data, z_grid=None, x_ref=0.0, threads=1, winding=None, check_symmetry=True):
    """Reflection coefficient r = s21 / s11 on a real grid.

    The argument-principle check runs first unless a winding number is given.
    """
    z = default_z_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
    if winding is None:
        winding = check_no_discrete_spectrum(data)
    elif winding != 0:
        raise SolitonsPresent(f"winding number {winding}")
    s11, s21 = _parallel(lambda zz: scattering_coefficients(data, zz, x_ref), z, threads)
    defect = np.abs(np.abs(s11) ** 2 - np.abs(s21) ** 2 - 1.0)
    if np.max(defect) > TOL.unitarity:
        raise UnitarityViolation(f"| |s11|^2 - |s21|^2 - 1 | = {np.max(defect):.3g}; refine the x-grid")
    r = s21 / s11
    if np.any(np.abs(r) >= 1):
        raise UnitarityViolation("|r| reached 1 on the grid")
    meta = {
        "winding": int(winding),
        "unitarity_defect": float(np.max(defect)),
        "x_ref": float(data.x[_ref_index(data, x_ref)[0]]),
        "b0_nonzero": data.b0_nonzero,
        "x_grid": {"min": float(data.x[0]), "max": float(data.x[-1]), "n": int(data.x.size)},
        "profile": data.label,
    }
    if check_symmetry:
        s22, s12 = _parallel(lambda zz: conjugate_partners(data, zz, x_ref), z, threads)
        meta["symmetry_residual"] = float(max(np.max(np.abs(s22 - np.conj(s11))),
                                              np.max(np.abs(s12 - np.conj(s21)))))
    sd = ScatteringData(z, s11, s21, np.abs(r), np.angle(r), meta=meta)
    return replace(sd, h11_norm=sobolev_norm_h11(sd))


def winding_contour(half_width=DEFAULTS.winding_half_width, height=DEFAULTS.winding_height,
                    bottom=DEFAULTS.z_min, samples=DEFAULTS.winding_samples):
    """Counter-clockwise rectangle in the upper half-plane, closed (first point repeated)."""
    t = np.linspace(0, 1, samples, endpoint=False)
    w, b, hgt = half_width, bottom, height
    sides = [
        -w + 2 * w * t + 1j * b,
        w + 1j * (b + (hgt - b) * t),
        w - 2 * w * t + 1j * hgt,
        -w + 1j * (hgt - (hgt - b) * t),
    ]
    path = np.concatenate(sides)
    return np.append(path, path[0])


def _s11_upper(data, z):
    pair = jost_columns(data, z, 0.0, ("m1", "p2"))
    return _det(pair.psi_minus_col1, pair.psi_plus_col2)


def check_no_discrete_spectrum(data, samples=DEFAULTS.winding_samples, max_refine=4, raise_on_solitons=True):
    """Winding number of s11 around a rectangle in the upper half-plane.

    Segments whose phase increment exceeds pi/2 are subdivided up to
    ``max_refine`` times before ContourTooCoarse is raised.
    """
    path = winding_contour(samples=samples)
    vals = _s11_upper(data, path)
    for _ in range(max_refine + 1):
        steps = np.angle(vals[1:] / vals[:-1])
        bad = np.nonzero(np.abs(steps) > TOL.winding_jump)[0]
        if bad.size == 0:
            break
        new_path, new_vals = [path[0]], [vals[0]]
        extra_z = []
        for j in bad:
            extra_z.append(path[j] + (path[j + 1] - path[j]) * np.arange(1, 8) / 8)
        extra = _s11_upper(data, np.concatenate(extra_z))
        pos = 0
        bad_set = {int(j): i for i, j in enumerate(bad)}
        for j in range(path.size - 1):
            if j in bad_set:
                i = bad_set[j]
                new_path.extend(extra_z[i])
                new_vals.extend(extra[7 * i:7 * i + 7])
            new_path.append(path[j + 1])
            new_vals.append(vals[j + 1])
            pos += 1
        path, vals = np.array(new_path), np.array(new_vals)
    else:
        raise ContourTooCoarse("phase increments of s11 stay above pi/2 after refinement")
    winding = int(round(np.sum(np.angle(vals[1:] / vals[:-1])) / (2 * math.pi)))
    if winding > 0 and raise_on_solitons:
        raise SolitonsPresent(f"s11 has {winding} zero(s) in the upper half-plane")
    return winding


def evolve_scattering(sd, t, params):
    """Scattering data at time t: r picks up the phase exp(PHASE_SIGN * i alpha t / (2z))."""
    phase = PHASE_SIGN * params.alpha * t / (2 * sd.z)
    meta = dict(sd.meta, t=float(t))
    return replace(sd, s21=sd.s21 * np.exp(1j * phase), r_arg=sd.r_arg + phase, meta=meta)


# ---------------------------------------------------------------------------
# CSV


def scattering_rows(sd):
    r = sd.r
    return np.column_stack([sd.z, sd.s11.real, sd.s11.imag, sd.s21.real, sd.s21.imag, r.real, r.imag])


SCATTERING_COLUMNS = ("z", "Re s11", "Im s11", "Re s21", "Im s21", "Re r", "Im r")


def scattering_from_rows(rows, meta=None):
    rows = np.asarray(rows, dtype=float)
    z = rows[:, 0]
    s11 = rows[:, 1] + 1j * rows[:, 2]
    s21 = rows[:, 3] + 1j * rows[:, 4]
    r = rows[:, 5] + 1j * rows[:, 6]
    sd = ScatteringData(z, s11, s21, np.abs(r), np.angle(r), meta=dict(meta or {}))
    return replace(sd, h11_norm=sobolev_norm_h11(sd))
