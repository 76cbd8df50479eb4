"""Command-line front end.

Exit codes: 0 ok, 1 input error, 2 domain or regime error, 3 numerical
invariant failure, 4 degenerate data (outputs are still written).
"""
import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import ABError, InputError


def _out_dir(args):
    root = args.out or os.environ.get("AB_OUT_DIR") or "."
    path = Path(root)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _config(args):
    return io.load_json(args.config) if args.config else {}


def _z_grid(cfg):
    from .scattering import default_z_grid
    g = cfg.get("z_grid", {})
    return default_z_grid(float(g.get("max", 4.0)), int(g.get("n", 801)), float(g.get("min", 0.05)))


def cmd_scatter(cfg, out, threads=1):
    from .scattering import SCATTERING_COLUMNS, check_no_discrete_spectrum, reflection, scattering_rows
    data, params = io.parse_initial_data(cfg)
    winding = check_no_discrete_spectrum(data)
    sd = reflection(data, _z_grid(cfg), x_ref=float(cfg.get("x_ref", 0.0)), threads=threads, winding=winding)
    csv_path = io.write_csv(out / "scattering.csv", SCATTERING_COLUMNS, scattering_rows(sd))
    meta = dict(sd.meta)
    meta.update(h11_norm=sd.h11_norm,
                z_grid={"min": float(sd.z.min()), "max": float(sd.z.max()), "n": int(sd.z.size)},
                alpha=params.alpha, beta=params.beta, gamma=params.gamma)
    io.write_json(out / "scattering.json", meta)
    return csv_path, 0


def _load_scattering(path):
    from .scattering import scattering_from_rows
    path = Path(path)
    if not path.exists():
        raise InputError(f"scattering data file {path} not found; run 'scatter' first")
    _, rows = io.read_csv(path)
    meta_path = path.with_suffix(".json")
    meta = io.load_json(meta_path) if meta_path.exists() else {}
    return scattering_from_rows(rows, meta)


def _ray_list(cfg):
    from .phase import RayCoordinates
    alpha = float(cfg.get("alpha", -1.0))
    rays = []
    for p in cfg.get("points", []):
        rays.append(RayCoordinates.from_xt(alpha, float(p["x"]), float(p["t"])))
    for ray in cfg.get("rays", [] if "points" in cfg else [{"z0": 1.0, "t": [20.0, 40.0, 80.0]}]):
        for t in ray["t"]:
            rays.append(RayCoordinates.from_z0(alpha, float(ray["z0"]), float(t)))
    return rays


def cmd_asymptote(cfg, out, threads=1):
    from .asymptotics import ASYMPTOTIC_COLUMNS, asymptotic_row, solve_ray
    from .delta import build_delta_data
    sd = _load_scattering(cfg.get("scattering", out / "scattering.csv"))
    rays = _ray_list(cfg)
    if not rays:
        raise InputError("no (x, t) samples requested")
    cache, rows, models = {}, [], []
    degenerate = False
    for ray in rays:
        if ray.z0 not in cache:
            cache[ray.z0] = build_delta_data(sd, ray.z0)
        sol = solve_ray(sd, ray, cache[ray.z0])
        degenerate |= sol.model.beta12_plus == 0 or sol.model.beta12_minus == 0
        rows.append(asymptotic_row(sol))
        models.append(dict(x=ray.x, t=ray.t, **sol.model.to_json()))
    csv_path = io.write_csv(out / "asymptotic.csv", ASYMPTOTIC_COLUMNS, rows)
    io.write_json(out / "local_models.json", models)
    if degenerate:
        print("warning: r vanishes at a phase point; leading term set to 0", file=sys.stderr)
        return csv_path, 4
    return csv_path, 0


def cmd_evolve(cfg, out, threads=1):
    from dataclasses import replace
    from .pde import SNAPSHOT_COLUMNS, EvolveConfig, as_initial_data, evolve, snapshot_rows
    from .scattering import reflection
    default_grid = {"min": -60.0, "max": 60.0, "n": 4096}
    data, params = io.parse_initial_data(cfg, default_grid)
    t_end = float(cfg.get("t_end", 5.0))
    ecfg = EvolveConfig(dt=float(cfg.get("dt", 0.01)), t_end=t_end,
                        damping=float(cfg.get("damping", 0.5)),
                        checkpoints=tuple(cfg.get("checkpoints", [t_end])))
    final = evolve(data, params, ecfg)
    files = []
    for t, snap in final.info["snapshots"].items():
        files.append(io.write_csv(out / f"snapshot_t{io.fmt(t)}.csv", SNAPSHOT_COLUMNS, snapshot_rows(snap)))
    report = {
        "t_end": t_end,
        "dt": ecfg.dt,
        "max_fixed_point_iterations": final.info["max_fixed_point_iterations"],
        "right_defects": [list(d) for d in final.info["right_defects"]],
        "causal_step_product": final.info["causal_step_product"],
    }
    if cfg.get("isospectrality", True) and np.any(data.A0):
        # modes with t / (4 z^2) beyond the grid have left it; compare only the resolved band
        z = _z_grid(cfg)
        reach = data.x[-1] - 0.0
        zmin = float(np.sqrt(t_end / (4 * 0.5 * reach))) if t_end > 0 else 0.0
        z = z[np.abs(z) >= zmin]
        s0 = reflection(data, z, winding=0, threads=threads, check_symmetry=False)
        s1 = reflection(as_initial_data(final), z, winding=0, threads=threads, check_symmetry=False)
        dev = float(np.max(np.abs(np.abs(s1.s11) - np.abs(s0.s11))))
        report["isospectrality"] = {"z_min_resolved": zmin, "max_s11_modulus_change": dev,
                                    "tolerance": 5e-3, "passed": dev <= 5e-3}
    io.write_json(out / "evolve_report.json", report)
    return files, 0


def cmd_compare(cfg, out, threads=1):
    from .pde import EvolveConfig, compare_asymptotics
    default_grid = {"min": -60.0, "max": 60.0, "n": 4096}
    data, params = io.parse_initial_data(cfg, default_grid)
    cps = [float(t) for t in cfg.get("checkpoints", [20.0, 40.0, 80.0])]
    ecfg = EvolveConfig(dt=float(cfg.get("dt", 0.01)), t_end=max(cps),
                        damping=float(cfg.get("damping", 0.5)))
    rep = compare_asymptotics(data, params, float(cfg.get("z0", 1.0)), cps, ecfg, threads=threads)
    rows = [(r["t"], r["x"], r["A_num"].real, r["A_num"].imag, r["A_leading"].real, r["A_leading"].imag,
             r["B_num"], r["residual"], r["ratio"]) for r in rep["rows"]]
    path = io.write_csv(out / "compare.csv",
                        ("t", "x", "Re A_num", "Im A_num", "Re A_lead", "Im A_lead", "B_num", "residual", "ratio"),
                        rows)
    io.write_json(out / "compare.json", {k: v for k, v in rep.items() if k != "rows"})
    return path, 0


def cmd_verify(cfg, out, threads=1, fast=False):
    from .acceptance import REPORT_SCHEMA, run_all
    report = run_all(fast=fast, threads=threads, echo=True)
    io.validate(report, REPORT_SCHEMA, "verify report")
    path = io.write_json(out / "verify_report.json", report)
    return path, 0 if report["passed"] else 3


COMMANDS = {
    "scatter": cmd_scatter,
    "asymptote": cmd_asymptote,
    "evolve": cmd_evolve,
    "compare": cmd_compare,
    "verify": cmd_verify,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="abasym", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON configuration file")
    parser.add_argument("--out", help="output directory (default: $AB_OUT_DIR or .)")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--fast", action="store_true", help="verify: skip the PDE-based criteria")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise InputError("--threads must be at least 1")
        cfg = _config(args)
        out = _out_dir(args)
        fn = COMMANDS[args.command]
        kwargs = {"fast": args.fast} if args.command == "verify" else {}
        _, code = fn(cfg, out, args.threads, **kwargs)
    except ABError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except (KeyError, TypeError, ValueError) as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return 1
    return code


if __name__ == "__main__":
    sys.exit(main())
