"""Instance JSON schema, trajectory CSV format, and status sidecars.

Wire conventions shared by the CLI:

* complex scalars serialize as ``[re, im]`` pairs (bare numbers are
  accepted on input and read as real);
* matrices serialize as row-major nested arrays of such pairs;
* coefficient functions are objects with a ``kind`` discriminator:
  ``{"kind": "constant", "value": ...}``,
  ``{"kind": "polynomial", "coefficients": [...], "t_ref": ...}``,
  ``{"kind": "sampled", "times": [...], "values": [...], "order": 1|3}``;
* trajectory CSV columns are ``t``, the entries of Y row-major with
  interleaved re/im parts, then the monitor columns ``lambda_min_gap``
  and ``residual`` (and ``det_phi_abs`` for the linear-flow method);
* each CSV gets a JSON status sidecar next to it.

Parse errors raise ``InstanceFormatError`` with the offending field named
in the message.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

import numpy as np

from . import coefficients as cf
from .coefficients import CoefficientFunction, CoefficientSet
from .exceptions import InstanceFormatError, RiccatiError
from .integrate import LinearFlow, Trajectory


# ---------------------------------------------------------------------------
# Complex scalars and matrices
# ---------------------------------------------------------------------------

def complex_to_pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def pair_to_complex(obj, field: str) -> complex:
    if isinstance(obj, (int, float)) and not isinstance(obj, bool):
        return complex(obj)
    if (isinstance(obj, list) and len(obj) == 2
            and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj)):
        return complex(obj[0], obj[1])
    raise InstanceFormatError(f"field '{field}' must be a number or [re, im] pair")


def matrix_to_obj(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[complex_to_pair(m[i, j]) for j in range(m.shape[1])]
            for i in range(m.shape[0])]


def obj_to_matrix(obj, n: int, field: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != n:
        raise InstanceFormatError(f"field '{field}' must be an {n}x{n} row-major matrix")
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise InstanceFormatError(f"field '{field}[{i}]' must have {n} entries")
        for j, entry in enumerate(row):
            out[i, j] = pair_to_complex(entry, f"{field}[{i}][{j}]")
    if not np.all(np.isfinite(out.real)) or not np.all(np.isfinite(out.imag)):
        raise InstanceFormatError(f"field '{field}' contains non-finite entries")
    return out


def _value_to_obj(v, scalar: bool):
    return complex_to_pair(v) if scalar else matrix_to_obj(v)


def _obj_to_value(obj, n: int, field: str, scalar: bool):
    return pair_to_complex(obj, field) if scalar else obj_to_matrix(obj, n, field)


# ---------------------------------------------------------------------------
# Coefficient functions
# ---------------------------------------------------------------------------

def function_to_obj(f: CoefficientFunction) -> dict:
    scalar = f.is_scalar
    if f.kind == "constant":
        return {"kind": "constant", "value": _value_to_obj(f.eval(0.0) if scalar
                                                           else f.value, scalar)}
    if f.kind == "polynomial":
        return {
            "kind": "polynomial",
            "t_ref": f.t_ref,
            "coefficients": [_value_to_obj(c, scalar) for c in f.coefficients],
        }
    if f.kind == "sampled":
        return {
            "kind": "sampled",
            "order": f.order,
            "times": [float(t) for t in f.times],
            "values": [_value_to_obj(v, scalar) for v in f.values],
        }
    raise RiccatiError(f"cannot serialize coefficient function of kind {f.kind!r}")


def obj_to_function(obj, field: str, n: int, scalar: bool = False,
                    default_t_ref: float = 0.0) -> CoefficientFunction:
    if not isinstance(obj, dict):
        raise InstanceFormatError(f"field '{field}' must be a coefficient-function object")
    kind = obj.get("kind")
    if kind == "constant":
        if "value" not in obj:
            raise InstanceFormatError(f"field '{field}.value' is missing")
        return cf.constant(_obj_to_value(obj["value"], n, f"{field}.value", scalar),
                           scalar=scalar)
    if kind == "polynomial":
        coeffs = obj.get("coefficients")
        if not isinstance(coeffs, list) or not coeffs:
            raise InstanceFormatError(
                f"field '{field}.coefficients' must be a non-empty list")
        t_ref = obj.get("t_ref", default_t_ref)
        if not isinstance(t_ref, (int, float)) or isinstance(t_ref, bool):
            raise InstanceFormatError(f"field '{field}.t_ref' must be a number")
        vals = [_obj_to_value(c, n, f"{field}.coefficients[{k}]", scalar)
                for k, c in enumerate(coeffs)]
        try:
            return cf.polynomial(vals, t_ref=float(t_ref), scalar=scalar)
        except ValueError as exc:
            raise InstanceFormatError(f"field '{field}': {exc}") from exc
    if kind == "sampled":
        times = obj.get("times")
        values = obj.get("values")
        if not isinstance(times, list) or not isinstance(values, list):
            raise InstanceFormatError(
                f"field '{field}' (sampled) needs 'times' and 'values' lists")
        if len(times) != len(values):
            raise InstanceFormatError(
                f"field '{field}': {len(times)} times but {len(values)} values")
        order = obj.get("order", 3)
        if order not in (1, 3):
            raise InstanceFormatError(f"field '{field}.order' must be 1 or 3")
        vals = [_obj_to_value(v, n, f"{field}.values[{k}]", scalar)
                for k, v in enumerate(values)]
        try:
            return cf.sampled(times, vals, order=order, scalar=scalar)
        except (ValueError, RiccatiError) as exc:
            raise InstanceFormatError(f"field '{field}': {exc}") from exc
    raise InstanceFormatError(
        f"field '{field}.kind' must be 'constant', 'polynomial' or 'sampled'")


# ---------------------------------------------------------------------------
# Instance files
# ---------------------------------------------------------------------------

@dataclass
class ParsedInstance:
    cs: CoefficientSet
    y0: np.ndarray
    lam: CoefficientFunction | None = None
    mu: CoefficientFunction | None = None
    nu: CoefficientFunction | None = None
    grid_points: int | None = None


def parse_instance(obj) -> ParsedInstance:
    """Validate a JSON instance object and build the domain types."""
    if not isinstance(obj, dict):
        raise InstanceFormatError("instance document must be a JSON object")
    n = obj.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InstanceFormatError("field 'n' must be a positive integer")
    for name in ("t0", "t_end"):
        v = obj.get(name)
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise InstanceFormatError(f"field '{name}' must be a finite number")
    t0, t_end = float(obj["t0"]), float(obj["t_end"])
    if not t0 < t_end:
        raise InstanceFormatError("field 't_end' must exceed 't0'")

    fns = {}
    for name in ("P", "Q", "R", "S"):
        if name not in obj:
            raise InstanceFormatError(f"field '{name}' is missing")
        fns[name] = obj_to_function(obj[name], name, n, scalar=False, default_t_ref=t0)
    if "Y0" not in obj:
        raise InstanceFormatError("field 'Y0' is missing")
    y0 = obj_to_matrix(obj["Y0"], n, "Y0")

    try:
        cs = CoefficientSet(n=n, t0=t0, t_end=t_end, **fns)
    except RiccatiError as exc:
        raise InstanceFormatError(str(exc)) from exc
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc

    lam = (obj_to_function(obj["lambda"], "lambda", n, scalar=False, default_t_ref=t0)
           if "lambda" in obj else None)
    mu = (obj_to_function(obj["mu"], "mu", n, scalar=True, default_t_ref=t0)
          if "mu" in obj else None)
    nu = (obj_to_function(obj["nu"], "nu", n, scalar=True, default_t_ref=t0)
          if "nu" in obj else None)
    if lam is not None and lam.dim != n:
        raise InstanceFormatError(f"field 'lambda' has dimension {lam.dim}, expected {n}")

    grid_points = obj.get("grid_points")
    if grid_points is not None:
        if not isinstance(grid_points, int) or isinstance(grid_points, bool) or grid_points < 2:
            raise InstanceFormatError("field 'grid_points' must be an integer >= 2")

    return ParsedInstance(cs=cs, y0=y0, lam=lam, mu=mu, nu=nu, grid_points=grid_points)


def load_instance(path: str) -> ParsedInstance:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise InstanceFormatError(f"cannot read instance file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"instance file is not valid JSON: {exc}") from exc
    return parse_instance(obj)


def instance_to_obj(cs: CoefficientSet, y0,
                    lam: CoefficientFunction | None = None,
                    mu: CoefficientFunction | None = None,
                    nu: CoefficientFunction | None = None,
                    grid_points: int | None = None) -> dict:
    obj = {
        "n": cs.n,
        "t0": cs.t0,
        "t_end": cs.t_end,
        "P": function_to_obj(cs.P),
        "Q": function_to_obj(cs.Q),
        "R": function_to_obj(cs.R),
        "S": function_to_obj(cs.S),
        "Y0": matrix_to_obj(y0),
    }
    if lam is not None:
        obj["lambda"] = function_to_obj(lam)
    if mu is not None:
        obj["mu"] = function_to_obj(mu)
    if nu is not None:
        obj["nu"] = function_to_obj(nu)
    if grid_points is not None:
        obj["grid_points"] = grid_points
    return obj


def dumps_instance(obj: dict) -> str:
    """Deterministic serialization: identical objects give identical bytes."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Trajectory CSV and status sidecar
# ---------------------------------------------------------------------------

def trajectory_csv_header(n: int, with_det: bool = False) -> list[str]:
    cols = ["t"]
    for i in range(n):
        for j in range(n):
            cols.append(f"y{i}_{j}_re")
            cols.append(f"y{i}_{j}_im")
    cols += ["lambda_min_gap", "residual"]
    if with_det:
        cols.append("det_phi_abs")
    return cols


def write_trajectory_csv(path: str, traj: Trajectory, cs: CoefficientSet,
                         lam: CoefficientFunction | None = None,
                         flow: LinearFlow | None = None) -> None:
    """Write samples plus monitor columns.

    ``lambda_min_gap`` is the least eigenvalue of Y + Y* - L - L*;
    ``residual`` is the central-difference equation residual (empty when
    fewer than 3 samples are available); ``det_phi_abs`` is only present
    when a linear flow is supplied.
    """
    from .verify import eigen_monitor, residual_series

    n = traj.n
    gaps = eigen_monitor(traj, lam)
    if traj.times.size >= 3:
        resid = residual_series(traj, cs)
    else:
        resid = np.full(traj.times.size, np.nan)
    dets = None
    if flow is not None:
        det_by_time = {float(t): abs(complex(np.linalg.det(flow.phi[k])))
                       for k, t in enumerate(flow.times)}
        dets = [det_by_time.get(float(t), float("nan")) for t in traj.times]

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(trajectory_csv_header(n, with_det=flow is not None))
        for k, t in enumerate(traj.times):
            row = [repr(float(t))]
            y = traj.values[k]
            for i in range(n):
                for j in range(n):
                    row.append(repr(float(y[i, j].real)))
                    row.append(repr(float(y[i, j].imag)))
            row.append(repr(float(gaps[k])))
            row.append("" if np.isnan(resid[k]) else repr(float(resid[k])))
            if dets is not None:
                row.append(repr(dets[k]))
            writer.writerow(row)


def read_trajectory_csv(path: str, n: int):
    """Read back (times, values) from a trajectory CSV of dimension n."""
    expected = 1 + 2 * n * n
    times: list[float] = []
    values: list[np.ndarray] = []
    try:
        with open(path, "r", newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or len(header) < expected:
                raise InstanceFormatError(
                    f"trajectory CSV has {0 if header is None else len(header)} columns, "
                    f"expected at least {expected} for dimension {n}")
            for row in reader:
                if not row:
                    continue
                if len(row) < expected:
                    raise InstanceFormatError(
                        f"trajectory CSV row has {len(row)} columns, expected >= {expected}")
                times.append(float(row[0]))
                flat = np.array([float(row[1 + 2 * k]) + 1j * float(row[2 + 2 * k])
                                 for k in range(n * n)])
                values.append(flat.reshape(n, n))
    except OSError as exc:
        raise InstanceFormatError(f"cannot read trajectory CSV: {exc}") from exc
    except ValueError as exc:
        raise InstanceFormatError(f"trajectory CSV contains a malformed number: {exc}") from exc
    if not times:
        raise InstanceFormatError("trajectory CSV contains no samples")
    return np.array(times), np.array(values)


def status_sidecar_path(csv_path: str) -> str:
    if csv_path.endswith(".csv"):
        return csv_path[:-4] + ".status.json"
    return csv_path + ".status.json"


def trajectory_status_obj(traj: Trajectory, extra: dict | None = None) -> dict:
    obj = {
        "method": traj.method,
        "status": traj.status,
        "n": int(traj.n),
        "samples": int(traj.times.size),
        "t_first": float(traj.times[0]) if traj.times.size else None,
        "t_last": float(traj.times[-1]) if traj.times.size else None,
        "t_escape": traj.t_escape,
        "blowup_trigger": traj.blowup_trigger,
        "singular_times": [float(t) for t in traj.singular_times],
        "notes": list(traj.notes),
    }
    if extra:
        obj.update(extra)
    return obj


def write_status_sidecar(csv_path: str, traj: Trajectory, extra: dict | None = None) -> str:
    sidecar = status_sidecar_path(csv_path)
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(trajectory_status_obj(traj, extra), fh, sort_keys=True, indent=2)
        fh.write("\n")
    return sidecar
