"""Method-of-lines solver for A_xt = alpha A + beta A B, B_x = -(gamma/2)(|A|^2)_t.

The x-derivative is inverted with antiderivatives that vanish at the left
end, so A_t and B are slaved to A and solved for by damped fixed-point
iteration; time stepping is classical RK4.
"""
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline

from .config import DEFAULTS, TOL
from .errors import DomainEscape, FixedPointDivergence, InputError, StepTooLarge
from .scattering import InitialData, ModelParameters


@dataclass(frozen=True)
class EvolveConfig:
    dt: float = DEFAULTS.pde_dt
    t_end: float = 5.0
    fixed_point_tol: float = TOL.fixed_point
    fixed_point_max_iter: int = TOL.fixed_point_max_iter
    damping: float = DEFAULTS.pde_damping
    checkpoints: tuple = ()
    escape_fraction: float = 0.05

    def __post_init__(self):
        if not (self.dt > 0 and self.t_end >= 0):
            raise InputError("dt must be positive and t_end non-negative")
        if not (self.fixed_point_tol > 0 and self.fixed_point_max_iter > 0):
            raise InputError("fixed-point tolerances must be positive")
        if not 0 < self.damping <= 1:
            raise InputError("damping must lie in (0, 1]")
        cps = tuple(sorted(float(c) for c in self.checkpoints))
        if any(c < 0 or c > self.t_end + 1e-12 for c in cps):
            raise InputError("checkpoints must lie in [0, t_end]")
        object.__setattr__(self, "checkpoints", cps)


@dataclass(frozen=True)
class FieldState:
    x: np.ndarray
    A: np.ndarray
    B: np.ndarray
    t: float = 0.0
    A_t: np.ndarray = field(default=None, repr=False)   # cached time derivative at this state
    info: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        B = np.asarray(self.B)
        if np.iscomplexobj(B):
            if np.max(np.abs(B.imag), initial=0.0) > 1e-12:
                raise InputError("B must be real")
            B = B.real
        if A.shape != np.shape(self.x) or B.shape != A.shape:
            raise InputError("A, B and x must have equal length")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B.astype(float))

    @property
    def step(self):
        return (self.x[-1] - self.x[0]) / (self.x.size - 1)

    @classmethod
    def from_initial(cls, data):
        return cls(data.x, data.A0, data.B0, 0.0)


def _antiderivative(f, h):
    return cumulative_trapezoid(f, dx=h, initial=0.0)


def solve_slaved(A, B_guess, h, params, cfg=None, freeze_B=False):
    """(A_t, B, iterations) solving the coupled left-anchored integral relations."""
    cfg = cfg or EvolveConfig()
    base = params.alpha * _antiderivative(A, h)
    if freeze_B:
        B = np.zeros(A.shape)
        return base, B, 0
    B = np.asarray(B_guess, dtype=float)
    scale = -params.gamma
    for it in range(1, cfg.fixed_point_max_iter + 1):
        A_t = base + params.beta * _antiderivative(A * B, h)
        B_new = scale * _antiderivative(np.real(np.conj(A) * A_t), h)
        change = np.max(np.abs(B_new - B))
        if not np.isfinite(change):
            break
        B = B + cfg.damping * (B_new - B)
        if change <= cfg.fixed_point_tol:
            A_t = base + params.beta * _antiderivative(A * B, h)
            return A_t, B, it
    raise FixedPointDivergence(
        f"A_t/B coupling did not converge in {cfg.fixed_point_max_iter} iterations; reduce amplitude or dt")


def rhs(state, params, cfg=None, freeze_B=False):
    """(A_t, B) at ``state``; B(x) = -(gamma/2) int_{-inf}^x d_t |A|^2."""
    A_t, B, _ = solve_slaved(state.A, state.B, state.step, params, cfg, freeze_B)
    return A_t, B


def _settle(state, params, cfg):
    if state.A_t is not None:
        return state, 0
    A_t, B, it = solve_slaved(state.A, state.B, state.step, params, cfg)
    return replace(state, B=B, A_t=A_t), it


def step(state, params, cfg):
    """One RK4 step; the returned state carries its own slaved B and A_t."""
    dt, h = cfg.dt, state.step
    state, it0 = _settle(state, params, cfg)
    amp = float(np.max(np.abs(state.A), initial=0.0))
    if dt * amp * amp > TOL.stability:
        raise StepTooLarge(f"dt * max|A|^2 = {dt * amp * amp:.3g} exceeds {TOL.stability}")
    A0 = state.A
    k1, B = state.A_t, state.B
    k2, B, i2 = solve_slaved(A0 + 0.5 * dt * k1, B, h, params, cfg)
    k3, B, i3 = solve_slaved(A0 + 0.5 * dt * k2, B, h, params, cfg)
    k4, B, i4 = solve_slaved(A0 + dt * k3, B, h, params, cfg)
    A1 = A0 + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    A_t, B1, i5 = solve_slaved(A1, B, h, params, cfg)
    return FieldState(state.x, A1, B1, state.t + dt, A_t, {"iterations": max(it0, i2, i3, i4, i5)})


def _check_escape(state, frac, peak):
    n = max(1, int(frac * state.x.size))
    left = float(np.max(np.abs(state.A[:n])))
    if peak > 0 and left > TOL.escape * peak:
        raise DomainEscape(f"|A| near the left end is {left / peak:.3g} of its peak at t = {state.t:.4g}")


def right_defect(state, params):
    """Value of int (alpha A + beta A B) over the grid; A_t at the right end."""
    return float(abs(state.A_t[-1])) if state.A_t is not None else float(
        abs(rhs(state, params)[0][-1]))


def evolve(data, params, cfg):
    """Integrate from the initial data to cfg.t_end.

    B0 only seeds the first fixed-point solve: B is determined by A. The
    returned state's ``info`` holds the checkpoint snapshots, the largest
    iteration count and the right-end compatibility defect.
    """
    state = FieldState.from_initial(data)
    if not np.any(state.A):
        state = replace(state, B=np.zeros_like(state.B), A_t=np.zeros_like(state.A))
    state, it = _settle(state, params, cfg)
    n_steps = int(round(cfg.t_end / cfg.dt))
    if abs(n_steps * cfg.dt - cfg.t_end) > 1e-9 * max(1.0, cfg.t_end):
        raise InputError("t_end must be a multiple of dt")
    cp_steps = {int(round(c / cfg.dt)): c for c in cfg.checkpoints}
    snapshots = {}
    peak0 = float(np.max(np.abs(state.A), initial=0.0))
    max_iter = it
    defects = []
    if 0 in cp_steps:
        snapshots[cp_steps[0]] = state
    for j in range(1, n_steps + 1):
        state = step(state, params, cfg)
        max_iter = max(max_iter, state.info["iterations"])
        if j % 50 == 0 or j == n_steps:
            _check_escape(state, cfg.escape_fraction, peak0)
            if not np.all(np.isfinite(state.A)):
                raise FixedPointDivergence(f"non-finite field at t = {state.t:.4g}")
        if j in cp_steps:
            state = replace(state, t=cp_steps[j]) if abs(state.t - cp_steps[j]) < 1e-9 else state
            snapshots[cp_steps[j]] = state
            defects.append((state.t, right_defect(state, params)))
    info = {
        "max_fixed_point_iterations": max_iter,
        "right_defects": defects,
        "final_right_defect": right_defect(state, params),
        "causal_step_product": cfg.dt * float(state.x[-1] - state.x[0]),
        "snapshots": snapshots,
    }
    return replace(state, t=float(cfg.t_end) if n_steps else 0.0, info=info)


def taper(state, start, stop=None):
    """Multiply A by a raised-cosine window falling from 1 at ``start`` to 0 at ``stop``."""
    stop = state.x[-1] if stop is None else stop
    s = np.clip((state.x - start) / (stop - start), 0.0, 1.0)
    w = 0.5 * (1 + np.cos(math.pi * s))
    return replace(state, A=state.A * w, A_t=None)


def as_initial_data(state):
    """Evolved field as scattering input (end decay is not enforced)."""
    return InitialData(state.x, state.A, np.zeros_like(state.B), label=f"evolved t={state.t:g}",
                       check_decay=False)


def truncated(state, X):
    """Field tapered over [X, 2X] and cut at 2X."""
    s = taper(state, X, 2 * X)
    keep = s.x <= 2 * X + 1e-9
    return FieldState(s.x[keep], s.A[keep], s.B[keep], s.t)


def extrapolated_reflection(state, z_grid, truncations, threads=1):
    """Scattering data of an evolved field whose right tail decays like x^{-3/4}.

    The slowly decaying tail shifts the phase of r by an amount proportional
    to the tail's L2 mass beyond the cut, i.e. like X^{-1/2}. The field is
    cut at the two truncations X1 < X2 (taper over [X, 2X]) and the phase and
    modulus of r, and |s11|, are extrapolated linearly in X^{-1/2}.
    Returns (r, |s11|, per-truncation ScatteringData).
    """
    from .scattering import reflection
    X1, X2 = sorted(float(v) for v in truncations)[-2:]
    if not (X1 < X2 and 2 * X2 <= state.x[-1] + 1e-9):
        raise InputError("need two truncations with 2 * X2 inside the grid")
    sds = [reflection(as_initial_data(truncated(state, X)), z_grid, winding=0, threads=threads,
                      check_symmetry=False) for X in (X1, X2)]
    a1, a2 = X1 ** -0.5, X2 ** -0.5
    w = a2 / (a1 - a2)
    phase = -np.angle(sds[0].r / sds[1].r) * w
    mod = sds[1].r_mod + (sds[1].r_mod - sds[0].r_mod) * w
    m1, m2 = np.abs(sds[0].s11), np.abs(sds[1].s11)
    return mod * np.exp(1j * (sds[1].r_arg + phase)), m2 + (m2 - m1) * w, sds


def _sample(x, values, xq):
    j = int(np.clip(np.searchsorted(x, xq), 3, x.size - 4))
    sl = slice(j - 4, j + 4)
    return complex(CubicSpline(x[sl], values[sl])(xq))


def compare_asymptotics(data, params, ray_z0, t_checkpoints, cfg=None, sd=None, threads=1):
    """|A_num| against the leading term at x = -alpha t / (4 z0^2) for each checkpoint."""
    from .asymptotics import solve_ray
    from .delta import build_delta_data
    from .phase import RayCoordinates
    from .scattering import reflection

    cps = tuple(sorted(float(t) for t in t_checkpoints))
    base = cfg or EvolveConfig()
    cfg = replace(base, t_end=cps[-1], checkpoints=cps)
    if not np.any(data.A0):
        rows = [{"t": t, "x": -params.alpha * t / (4 * ray_z0 ** 2), "A_num": 0j, "A_leading": 0j,
                 "B_num": 0.0, "residual": 0.0, "ratio": float("nan")} for t in cps]
        return {"rows": rows, "residual_exponent": float("nan"), "max_fixed_point_iterations": 0}
    if sd is None:
        sd = reflection(data, winding=0, threads=threads, check_symmetry=False)
    dd = build_delta_data(sd, ray_z0)
    final = evolve(data, params, cfg)
    rows = []
    for t in cps:
        snap = final.info["snapshots"][t]
        ray = RayCoordinates.from_z0(params.alpha, ray_z0, t)
        if not snap.x[0] < ray.x < snap.x[-1]:
            raise DomainEscape(f"ray point x = {ray.x:.4g} is outside the grid at t = {t:g}")
        lead = solve_ray(sd, ray, dd).A_leading
        a_num = _sample(snap.x, snap.A, ray.x)
        b_num = _sample(snap.x, snap.B, ray.x).real
        rows.append({"t": t, "x": ray.x, "A_num": a_num, "A_leading": lead, "B_num": b_num,
                     "residual": abs(a_num - lead),
                     "ratio": abs(a_num) / abs(lead) if lead != 0 else float("nan")})
    res = np.array([r["residual"] for r in rows])
    ts = np.array(cps)
    if len(cps) >= 2 and np.all(res > 0):
        exponent = -float(np.polyfit(np.log(ts), np.log(res), 1)[0])
    else:
        exponent = float("nan")
    return {"rows": rows, "residual_exponent": exponent,
            "max_fixed_point_iterations": final.info["max_fixed_point_iterations"],
            "final_right_defect": final.info["final_right_defect"]}


SNAPSHOT_COLUMNS = ("x", "Re A", "Im A", "|A|", "B")


def snapshot_rows(state):
    return np.column_stack([state.x, state.A.real, state.A.imag, np.abs(state.A), state.B])
