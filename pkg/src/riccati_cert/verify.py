"""Runtime verification along computed trajectories.

Tests the statements the certificates guarantee: the Hermitian-part
lower bound Y + Y* >= L + L*, the two-sided comparison 0 <= Y <= Ytilde,
and the equation residual. The residual uses central differences of the
stored samples rather than the integrator's internal derivative, so the
check is independent of the integration code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import coefficients as cf
from .coefficients import CoefficientFunction, CoefficientSet
from .exceptions import DimensionError
from .matrix_core import _eigvalsh, hermitian_part
from .integrate import Trajectory


@dataclass
class BoundReport:
    """Minimum over samples of the least eigenvalue of
    G(t) = Y(t) + Y*(t) - L(t) - L*(t); passes when it stays above -tol."""

    passed: bool
    min_value: float
    t_min: float
    tol: float
    times: np.ndarray
    series: np.ndarray

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "min_lambda": self.min_value,
            "t_min": self.t_min,
            "tol": self.tol,
            "samples": int(self.times.size),
        }


def eigen_monitor(traj: Trajectory, lam: CoefficientFunction | None = None) -> np.ndarray:
    """Least eigenvalue of Y(t) + Y*(t) - L(t) - L*(t) at every sample.

    This is the scalar whose nonnegativity the gauge certificate
    guarantees; the series is exported as the ``lambda_min_gap`` CSV
    column.
    """
    n = traj.n
    lam = lam or cf.zero_matrix_function(n)
    if lam.dim != n:
        raise DimensionError(f"lambda has dimension {lam.dim}, expected {n}")
    out = np.empty(traj.times.size)
    for k, t in enumerate(traj.times):
        y = traj.values[k]
        lam_t = lam.eval(float(t))
        g = y + y.conj().T - lam_t - lam_t.conj().T
        out[k] = float(_eigvalsh(hermitian_part(g), "eigen_monitor")[0])
    return out


def verify_hermitian_bound(traj: Trajectory, lam: CoefficientFunction | None = None,
                           tol: float = 1e-6) -> BoundReport:
    """Check Y(t) + Y*(t) >= L(t) + L*(t) along the trajectory.

    The tolerance is absolute on the least eigenvalue: the certified
    inequality is exact but computed trajectories are not, so the default
    band (-1e-6) is matched to the integrator tolerances.
    """
    series = eigen_monitor(traj, lam)
    if series.size == 0:
        raise ValueError("trajectory has no samples")
    k = int(np.argmin(series))
    min_value = float(series[k])
    return BoundReport(passed=min_value >= -tol, min_value=min_value,
                       t_min=float(traj.times[k]), tol=tol,
                       times=traj.times, series=series)


@dataclass
class SandwichReport:
    """Worst witnesses for both sides of 0 <= Y(t) <= Ytilde(t)."""

    passed: bool
    lower_min: float
    lower_t: float
    upper_min: float
    upper_t: float
    tol: float


def verify_sandwich(traj: Trajectory, traj_tilde: Trajectory,
                    tol: float = 1e-6) -> SandwichReport:
    """Check Y(t) >= 0 and Ytilde(t) - Y(t) >= 0 at every shared sample."""
    if traj.times.shape != traj_tilde.times.shape or \
            not np.array_equal(traj.times, traj_tilde.times):
        raise ValueError("trajectories are sampled on different grids")
    if traj.values.shape != traj_tilde.values.shape:
        raise DimensionError("trajectory dimensions differ")
    lower = (np.inf, np.nan)
    upper = (np.inf, np.nan)
    for k, t in enumerate(traj.times):
        y = traj.values[k]
        diff = traj_tilde.values[k] - y
        lo = float(_eigvalsh(hermitian_part(y), "verify_sandwich")[0])
        hi = float(_eigvalsh(hermitian_part(diff), "verify_sandwich")[0])
        if lo < lower[0]:
            lower = (lo, float(t))
        if hi < upper[0]:
            upper = (hi, float(t))
    return SandwichReport(passed=(lower[0] >= -tol and upper[0] >= -tol),
                          lower_min=lower[0], lower_t=lower[1],
                          upper_min=upper[0], upper_t=upper[1], tol=tol)


def residual_series(traj: Trajectory, cs: CoefficientSet) -> np.ndarray:
    """Scaled equation residual at every sample.

    The derivative is estimated by central differences of the stored
    samples (second-order one-sided at the ends), so the series has an
    O(h^2) floor in the sample spacing h even for exact trajectories.
    Scaling by 1 + ||Y||_F^2 keeps the measure meaningful for large
    solutions.
    """
    if traj.times.size < 3:
        raise ValueError("residual check needs at least 3 samples")
    deriv = np.gradient(traj.values, traj.times, axis=0, edge_order=2)
    out = np.empty(traj.times.size)
    for k, t in enumerate(traj.times):
        t = float(t)
        y = traj.values[k]
        resid = deriv[k] + y @ cs.P.eval(t) @ y + cs.Q.eval(t) @ y \
            + y @ cs.R.eval(t) - cs.S.eval(t)
        out[k] = float(np.linalg.norm(resid)) / (1.0 + float(np.linalg.norm(y)) ** 2)
    return out


def residual_check(traj: Trajectory, cs: CoefficientSet) -> float:
    """Maximum scaled residual over all samples."""
    return float(np.max(residual_series(traj, cs)))
