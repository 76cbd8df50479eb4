"""Lossless CSV/JSON output and initial-data input."""
import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError
from .scattering import InitialData, ModelParameters, make_profile, uniform_grid

INITIAL_DATA_SCHEMA = {
    "type": "object",
    "properties": {
        "alpha": {"type": "number"},
        "beta": {"type": "number"},
        "gamma": {"type": "number"},
        "grid": {
            "type": "object",
            "properties": {"min": {"type": "number"}, "max": {"type": "number"},
                           "n": {"type": "integer", "minimum": 2}},
            "required": ["min", "max", "n"],
        },
        "profile": {
            "oneOf": [
                {"type": "object",
                 "properties": {"name": {"type": "string"}, "amplitude": {"type": "number"}},
                 "required": ["name"]},
                {"type": "object",
                 "properties": {
                     "samples": {"type": "array",
                                 "items": {"type": "array", "items": {"type": "number"},
                                           "minItems": 2, "maxItems": 2}},
                     "B0": {"type": "array", "items": {"type": "number"}}},
                 "required": ["samples"]},
            ]
        },
    },
}


def fmt(v):
    """17 significant digits, enough for an exact double round trip."""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def write_csv(path, columns, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_csv(path):
    """(columns, rows as a float array) for all-numeric files."""
    lines = Path(path).read_text().strip().splitlines()
    if not lines:
        raise InputError(f"{path} is empty")
    columns = lines[0].split(",")
    try:
        rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]], dtype=float)
    except ValueError as exc:
        raise InputError(f"{path}: non-numeric entry ({exc})") from exc
    return columns, rows


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, complex):
        return _encode([obj.real, obj.imag], indent, level)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    return _encode(obj, indent, 0) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def validate(obj, schema, what):
    import jsonschema
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"{what}: {exc.message} (at {where})") from exc


def parse_model(cfg):
    return ModelParameters(float(cfg.get("alpha", -1.0)), float(cfg.get("beta", 1.0)),
                           float(cfg.get("gamma", -1.0)))


def parse_initial_data(cfg, default_grid=None):
    """InitialData and ModelParameters from the documented JSON layout."""
    validate(cfg, INITIAL_DATA_SCHEMA, "initial data")
    params = parse_model(cfg)
    grid = cfg.get("grid", default_grid or {})
    profile = cfg.get("profile", {"name": "sech"})
    if "samples" in profile:
        samples = np.asarray(profile["samples"], dtype=float)
        A0 = samples[:, 0] + 1j * samples[:, 1]
        n = int(grid.get("n", A0.size))
        if n != A0.size:
            raise InputError(f"grid.n = {n} but {A0.size} samples given")
        if "min" not in grid or "max" not in grid:
            raise InputError("raw samples need grid.min and grid.max")
        x = uniform_grid(float(grid["min"]), float(grid["max"]), n)
        B0 = np.asarray(profile.get("B0", np.zeros(n)), dtype=float)
        return InitialData(x, A0, B0, label="samples"), params
    kwargs = {}
    if "min" in grid:
        kwargs.update(x_min=float(grid["min"]), x_max=float(grid["max"]), n=int(grid["n"]))
    if "amplitude" in profile:
        kwargs["amplitude"] = float(profile["amplitude"])
    return make_profile(profile["name"], **kwargs), params
