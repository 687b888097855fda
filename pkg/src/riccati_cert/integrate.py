"""Trajectory computation by three routes.

* ``integrate_riccati_direct``      -- the quadratic equation itself,
  Y' = S - Y P Y - Q Y - Y R, with finite-escape (blow-up) detection;
* ``integrate_linear_system``       -- the equivalent 2n x n linear flow
  Phi' = R Phi + P Psi, Psi' = S Phi - Q Psi with Y = Psi Phi^{-1},
  which continues through Riccati blow-up;
* ``integrate_lyapunov_comparison`` -- the linear comparison equation
  Ytilde' = S - R* Ytilde - Ytilde R used by the sandwich bound.

All three share one embedded explicit Runge-Kutta 5(4) pair
(Dormand-Prince coefficients, FSAL) with a PI step-size controller.
Requested sample times are hit exactly by clamping steps, so no dense
interpolation error enters the stored samples. Everything is
deterministic: the initial step comes from a standard starting-step
heuristic and there are no randomized components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .coefficients import CoefficientSet
from .exceptions import DimensionError, IntegrationError
from .matrix_core import as_matrix

# Dormand-Prince 5(4) tableau. The fifth-order row is propagated; the
# difference against the fourth-order row gives the error estimate.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_ERR = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_BETA = 0.04
_ALPHA = 0.2 - 0.75 * _BETA

#: Hard ceiling on the reconstruction-condition estimate beyond which a
#: flow sample always counts as numerically singular. The effective
#: cutoff is accuracy-aware: reconstruction error scales like
#: cond_est * rtol, so samples are skipped once that estimate reaches
#: order one (see integrate_linear_system).
_SINGULAR_COND_CEILING = 1e13

_MAX_STEPS = 1_000_000


@dataclass(frozen=True)
class IntegratorOptions:
    """Step control and detection thresholds.

    ``blowup_norm`` caps the Frobenius norm of the direct solution;
    ``recondition_threshold`` bounds the condition estimate of the linear
    flow before a (Phi, Psi) <- (I, Y) reset is performed.
    """

    rtol: float = 1e-9
    atol: float = 1e-12
    h_init: float | None = None
    h_min: float = 1e-12
    h_max: float = math.inf
    blowup_norm: float = 1e8
    recondition_threshold: float = 1e8

    def __post_init__(self):
        if not (self.rtol > 0 and self.atol > 0):
            raise IntegrationError("rtol and atol must be positive")
        if not 0 < self.h_min <= self.h_max:
            raise IntegrationError("need 0 < h_min <= h_max")
        if self.h_init is not None and not self.h_min <= self.h_init <= self.h_max:
            raise IntegrationError("need h_min <= h_init <= h_max")
        if self.blowup_norm <= 0 or self.recondition_threshold <= 0:
            raise IntegrationError("thresholds must be positive")


@dataclass
class Trajectory:
    """Sampled solution with its termination status.

    ``status`` is one of ``completed``, ``blow_up`` (with ``t_escape`` the
    last accepted time and ``blowup_trigger`` either ``norm_cap`` or
    ``step_collapse``), or ``phi_singular`` (the linear flow crossed
    numerically singular Phi at ``singular_times``; those samples carry no
    reconstructed value). All stored values are finite.
    """

    times: np.ndarray
    values: np.ndarray
    status: str
    method: str
    t_escape: float | None = None
    blowup_trigger: str | None = None
    singular_times: np.ndarray = field(default_factory=lambda: np.empty(0))
    notes: list[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.values.shape[1]


@dataclass
class LinearFlow:
    """Samples of the linear flow (Phi, Psi) with its restart log.

    Stored samples are the values used going forward, i.e. post-reset at
    restart times, so Y(tau) = Psi(tau) Phi(tau)^{-1} is preserved across
    each reset by construction.
    """

    times: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    restarts: list[float] = field(default_factory=list)


def default_sample_times(cs: CoefficientSet, num: int = 201) -> np.ndarray:
    return np.linspace(cs.t0, cs.t_end, num)


def _rms(x: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.abs(x) ** 2)))


def _initial_step(f, t0: float, y0: np.ndarray, f0: np.ndarray,
                  opts: IntegratorOptions, span: float) -> float:
    """Standard starting-step heuristic for a fifth-order method."""
    sc = opts.atol + opts.rtol * np.abs(y0)
    d0 = _rms(y0 / sc)
    d1 = _rms(f0 / sc)
    h0 = 0.01 * d0 / d1 if d0 > 1e-5 and d1 > 1e-5 else 1e-6
    h0 = min(h0, span)
    y1 = y0 + h0 * f0
    f1 = f(t0 + h0, y1)
    d2 = _rms((f1 - f0) / sc) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    h = min(100 * h0, h1, span, opts.h_max)
    return max(h, opts.h_min)


def _integrate_sampled(f, sample_times: np.ndarray, y0: np.ndarray,
                       opts: IntegratorOptions, after_step=None, at_sample=None):
    """Drive the RK pair through ``sample_times``, clamping steps so every
    sample is hit exactly.

    ``after_step(t, y)`` may return a stop-reason string (checked on the
    initial state and after every accepted step). ``at_sample(t, y)`` may
    return a replacement state (used for flow reconditioning).

    Returns (times, states, stop_reason, t_last) where ``times``/``states``
    hold the samples actually reached and ``t_last`` is the last accepted
    time.
    """
    t = float(sample_times[0])
    y = y0.astype(np.complex128).copy()
    times: list[float] = []
    states: list[np.ndarray] = []

    if at_sample is not None:
        y = at_sample(t, y)
    times.append(t)
    states.append(y.copy())
    reason = after_step(t, y) if after_step is not None else None
    if reason is not None or sample_times.size == 1:
        return times, states, reason, t

    f_curr = f(t, y)
    span = float(sample_times[-1]) - t
    h = opts.h_init if opts.h_init is not None else _initial_step(f, t, y, f_curr, opts, span)
    h = min(max(h, opts.h_min), opts.h_max)

    facold = 1e-4
    rejected_last = False
    next_idx = 1
    n_steps = 0
    k = [None] * 7

    while next_idx < sample_times.size:
        t_target = float(sample_times[next_idx])
        tiny = 1e-13 * max(1.0, abs(t_target))
        if t_target - t <= tiny:
            # already there to rounding; record the sample without stepping
            if at_sample is not None:
                y_new = at_sample(t_target, y)
                if y_new is not y:
                    y = y_new
                    f_curr = f(t, y)
            times.append(t_target)
            states.append(y.copy())
            next_idx += 1
            continue

        n_steps += 1
        if n_steps > _MAX_STEPS:
            raise IntegrationError(f"step budget exceeded ({_MAX_STEPS} steps)")

        hit = h >= (t_target - t) - tiny
        h_eff = (t_target - t) if hit else h

        # stages (FSAL: k[0] is f at the current point)
        k[0] = f_curr
        for i in range(1, 7):
            yi = y.copy()
            for j, a in enumerate(_A[i]):
                if a != 0.0:
                    yi += (h_eff * a) * k[j]
            k[i] = f(t + _C[i] * h_eff, yi)
        y_new = y.copy()
        for j, b in enumerate(_B5):
            if b != 0.0:
                y_new += (h_eff * b) * k[j]

        err_vec = np.zeros_like(y)
        for j, e in enumerate(_ERR):
            if e != 0.0:
                err_vec += (h_eff * e) * k[j]
        sc = opts.atol + opts.rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms(err_vec / sc)
        if not np.isfinite(err):
            err = math.inf

        if err <= 1.0:
            t = t_target if hit else t + h_eff
            y = y_new
            f_curr = k[6]  # FSAL
            if err == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = _SAFETY * err ** (-_ALPHA) * facold ** _BETA
                factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            if rejected_last:
                factor = min(factor, 1.0)
            rejected_last = False
            facold = max(err, 1e-4)
            h = min(max(h_eff * factor, opts.h_min), opts.h_max)
            if hit:
                if at_sample is not None:
                    y_new2 = at_sample(t, y)
                    if y_new2 is not y:
                        y = y_new2
                        f_curr = f(t, y)
                times.append(t)
                states.append(y.copy())
                next_idx += 1
            if after_step is not None:
                reason = after_step(t, y)
                if reason is not None:
                    return times, states, reason, t
        else:
            rejected_last = True
            factor = max(_MIN_FACTOR, _SAFETY * err ** (-_ALPHA)) if math.isfinite(err) else _MIN_FACTOR
            h = h_eff * min(factor, 1.0)
            if h < opts.h_min:
                return times, states, "step_collapse", t

    return times, states, None, t


def _check_samples(cs: CoefficientSet, sample_times) -> np.ndarray:
    ts = np.asarray(sample_times, dtype=np.float64)
    if ts.ndim != 1 or ts.size < 1:
        raise IntegrationError("sample_times must be a non-empty 1-D array")
    if abs(float(ts[0]) - cs.t0) > 1e-12 * max(1.0, abs(cs.t0)):
        raise IntegrationError(f"sample_times must start at t0 = {cs.t0}")
    if ts.size > 1 and not np.all(np.diff(ts) > 0):
        raise IntegrationError("sample_times must be strictly increasing")
    if float(ts[-1]) > cs.t_end + 1e-12 * max(1.0, abs(cs.t_end)):
        raise IntegrationError(f"sample_times exceed t_end = {cs.t_end}")
    return ts


def integrate_riccati_direct(cs: CoefficientSet, y0, opts: IntegratorOptions | None = None,
                             sample_times=None) -> Trajectory:
    """Integrate Y' = S(t) - Y P(t) Y - Q(t) Y - Y R(t) from Y(t0) = Y0.

    Declares blow-up when the Frobenius norm of Y exceeds
    ``opts.blowup_norm`` or the accepted step collapses below
    ``opts.h_min``; the escape-time estimate is the last accepted time and
    the report distinguishes the two triggers (a step collapse can also
    signal stiffness).
    """
    opts = opts or IntegratorOptions()
    y0 = as_matrix(y0, "Y0")
    n = cs.n
    if y0.shape[0] != n:
        raise DimensionError(f"Y0 has dimension {y0.shape[0]}, expected {n}")
    ts = _check_samples(cs, sample_times if sample_times is not None
                        else default_sample_times(cs))

    p_at, q_at, r_at, s_at = cs.P.eval, cs.Q.eval, cs.R.eval, cs.S.eval

    def f(t, y):
        ymat = y.reshape(n, n)
        dy = s_at(t) - ymat @ p_at(t) @ ymat - q_at(t) @ ymat - ymat @ r_at(t)
        return dy.ravel()

    def guard(t, y):
        return "norm_cap" if np.linalg.norm(y) > opts.blowup_norm else None

    times, states, reason, t_last = _integrate_sampled(f, ts, y0.ravel(), opts,
                                                       after_step=guard)
    values = np.array(states).reshape(len(states), n, n)
    if reason is None:
        return Trajectory(times=np.array(times), values=values,
                          status="completed", method="direct")
    return Trajectory(times=np.array(times), values=values, status="blow_up",
                      method="direct", t_escape=t_last, blowup_trigger=reason)


def integrate_linear_system(cs: CoefficientSet, y0, opts: IntegratorOptions | None = None,
                            sample_times=None) -> tuple[LinearFlow, Trajectory]:
    """Integrate the block-linear flow and reconstruct Y = Psi Phi^{-1}.

    From Phi(t0) = I, Psi(t0) = Y0. At every sample time a condition
    estimate of the reconstruction, (max(||Phi||, ||Psi||) + atol/rtol) /
    sigma_min(Phi), decides what happens:

    * above the singular cutoff max(0.5/rtol, 2 * recondition_threshold)
      (capped at 1e13) the sample is marked singular and skipped: the
      reconstructed value would carry an error estimate of order one or
      worse. The linear flow itself never blows up and simply continues;
    * above ``opts.recondition_threshold`` (or when the raw magnitude
      exceeds it) the pair is reset to (I, Y(tau)) and the restart
      logged; the reset preserves the numerical ratio Psi Phi^{-1}
      exactly, so it never adds error to the continued flow;
    * otherwise Y is reconstructed and stored (with reconstruction error
      bounded by roughly cond_est * rtol relative to 1 + ||Y||).
    """
    opts = opts or IntegratorOptions()
    y0 = as_matrix(y0, "Y0")
    n = cs.n
    if y0.shape[0] != n:
        raise DimensionError(f"Y0 has dimension {y0.shape[0]}, expected {n}")
    ts = _check_samples(cs, sample_times if sample_times is not None
                        else default_sample_times(cs))
    n2 = n * n
    eye_flat = np.eye(n, dtype=np.complex128).ravel()

    p_at, q_at, r_at, s_at = cs.P.eval, cs.Q.eval, cs.R.eval, cs.S.eval

    def f(t, y):
        phi = y[:n2].reshape(n, n)
        psi = y[n2:].reshape(n, n)
        dphi = r_at(t) @ phi + p_at(t) @ psi
        dpsi = s_at(t) @ phi - q_at(t) @ psi
        return np.concatenate([dphi.ravel(), dpsi.ravel()])

    flow_times: list[float] = []
    phis: list[np.ndarray] = []
    psis: list[np.ndarray] = []
    restarts: list[float] = []
    traj_times: list[float] = []
    traj_vals: list[np.ndarray] = []
    singular: list[float] = []
    floor = opts.atol / opts.rtol
    singular_cutoff = min(_SINGULAR_COND_CEILING,
                          max(0.5 / opts.rtol, 2.0 * opts.recondition_threshold))

    def at_sample(t, y):
        phi = y[:n2].reshape(n, n).copy()
        psi = y[n2:].reshape(n, n).copy()
        smin = float(np.linalg.svd(phi, compute_uv=False)[-1])
        mag = max(float(np.linalg.norm(phi)), float(np.linalg.norm(psi)))
        cond_est = (mag + floor) / smin if smin > 0 else math.inf
        first = not flow_times
        # the first sample is exact (Phi = I, Psi = Y0): never singular
        if cond_est > singular_cutoff and not first:
            singular.append(float(t))
            flow_times.append(float(t))
            phis.append(phi)
            psis.append(psi)
            return y
        ymat = np.linalg.solve(phi.T, psi.T).T
        traj_times.append(float(t))
        traj_vals.append(ymat)
        if cond_est > opts.recondition_threshold or mag > opts.recondition_threshold:
            phi = np.eye(n, dtype=np.complex128)
            psi = ymat
            restarts.append(float(t))
            y = np.concatenate([eye_flat.copy(), ymat.ravel()])
        flow_times.append(float(t))
        phis.append(phi)
        psis.append(psi)
        return y

    state0 = np.concatenate([eye_flat.copy(), y0.ravel()])
    _, _, reason, t_last = _integrate_sampled(f, ts, state0, opts, at_sample=at_sample)
    if reason is not None:
        raise IntegrationError(
            f"linear flow integration stopped at t = {t_last} ({reason}); "
            "the flow is linear and should not collapse at these scales")

    flow = LinearFlow(times=np.array(flow_times),
                      phi=np.array(phis).reshape(len(phis), n, n),
                      psi=np.array(psis).reshape(len(psis), n, n),
                      restarts=restarts)
    values = (np.array(traj_vals).reshape(len(traj_vals), n, n)
              if traj_vals else np.empty((0, n, n), dtype=np.complex128))
    status = "phi_singular" if singular else "completed"
    traj = Trajectory(times=np.array(traj_times), values=values, status=status,
                      method="radon", singular_times=np.array(singular))
    return flow, traj


def integrate_lyapunov_comparison(cs: CoefficientSet, ytilde0,
                                  opts: IntegratorOptions | None = None,
                                  sample_times=None) -> Trajectory:
    """Integrate the linear comparison equation Y' = S - R* Y - Y R.

    Intended under the symmetric-pair hypotheses (P >= 0, S >= 0, R = Q*),
    where the comparison coefficient is taken as A(t) := R(t). Linear,
    hence never blows up on a finite span.
    """
    opts = opts or IntegratorOptions()
    y0 = as_matrix(ytilde0, "Ytilde0")
    n = cs.n
    if y0.shape[0] != n:
        raise DimensionError(f"Ytilde0 has dimension {y0.shape[0]}, expected {n}")
    ts = _check_samples(cs, sample_times if sample_times is not None
                        else default_sample_times(cs))

    r_at, s_at = cs.R.eval, cs.S.eval

    def f(t, y):
        ymat = y.reshape(n, n)
        r = r_at(t)
        return (s_at(t) - r.conj().T @ ymat - ymat @ r).ravel()

    times, states, reason, t_last = _integrate_sampled(f, ts, y0.ravel(), opts)
    if reason is not None:
        raise IntegrationError(
            f"linear comparison integration stopped at t = {t_last} ({reason})")
    return Trajectory(times=np.array(times),
                      values=np.array(states).reshape(len(states), n, n),
                      status="completed", method="lyapunov",
                      notes=["comparison coefficient A(t) := R(t) "
                             "(symmetric-pair hypothesis R = Q*)"])


# ---------------------------------------------------------------------------
# Determinant identity along the linear flow
# ---------------------------------------------------------------------------

def _cumulative_simpson(y: np.ndarray, dx: float) -> np.ndarray:
    """Cumulative integral on a uniform grid, composite Simpson scheme.

    out[0] = 0; out[1] uses the parabola through the first three points;
    out[k] = out[k-2] + Simpson over [k-2, k]. Fourth-order accurate.
    """
    m = y.shape[0]
    out = np.zeros(m, dtype=y.dtype)
    if m == 1:
        return out
    if m == 2:
        out[1] = dx * (y[0] + y[1]) / 2.0
        return out
    out[1] = dx * (5.0 * y[0] + 8.0 * y[1] - y[2]) / 12.0
    for i in range(2, m):
        out[i] = out[i - 2] + dx * (y[i - 2] + 4.0 * y[i - 1] + y[i]) / 3.0
    return out


@dataclass
class LiouvilleReport:
    """Worst relative errors of the determinant identities."""

    max_rel_error: float
    det_form_error: float
    modulus_form_error: float
    spans: list[tuple[float, float]]


def liouville_check(flow: LinearFlow, cs: CoefficientSet, traj: Trajectory) -> LiouvilleReport:
    """Compare det Phi(t) against det Phi(t1) exp{int tr(R + P Y) dtau}.

    The quadrature is composite Simpson on the sample grid. Checked on
    every maximal span free of restarts and singular samples; also checks
    the squared-modulus form with integrand tr(R + R* + P (Y + Y*)).
    Returns the maximum relative error over all checked samples.
    """
    traj_index = {float(t): i for i, t in enumerate(traj.times)}
    restart_set = {float(t) for t in flow.restarts}

    spans: list[list[int]] = []
    current: list[int] = []
    for i, t in enumerate(flow.times):
        t = float(t)
        if t not in traj_index:
            if current:
                spans.append(current)
            current = []
            continue
        if t in restart_set and current:
            spans.append(current)
            current = []
        current.append(i)
    if current:
        spans.append(current)
    spans = [s for s in spans if len(s) >= 1]
    if not spans:
        raise IntegrationError("no singularity-free span available")

    max_det = 0.0
    max_mod = 0.0
    checked: list[tuple[float, float]] = []
    tiny = np.finfo(float).tiny
    for span in spans:
        idx = np.array(span)
        ts = flow.times[idx]
        checked.append((float(ts[0]), float(ts[-1])))
        if len(span) == 1:
            continue  # trivial span: identity holds with error 0 by definition
        dxs = np.diff(ts)
        dx = float(dxs[0])
        if np.max(np.abs(dxs - dx)) > 1e-9 * dx:
            raise IntegrationError("liouville_check requires a uniform sample grid")
        phis = flow.phi[idx]
        dets = np.linalg.det(phis)
        ys = traj.values[[traj_index[float(t)] for t in ts]]

        integrand = np.array([np.trace(cs.R.eval(t) + cs.P.eval(t) @ ys[k])
                              for k, t in enumerate(ts)])
        cum = _cumulative_simpson(integrand, dx)
        rhs = dets[0] * np.exp(cum)
        rel = np.abs(dets - rhs) / np.maximum(np.maximum(np.abs(dets), np.abs(rhs)), tiny)
        max_det = max(max_det, float(np.max(rel)))

        integrand2 = np.array([np.trace(cs.R.eval(t) + cs.R.eval(t).conj().T
                                        + cs.P.eval(t) @ (ys[k] + ys[k].conj().T)).real
                               for k, t in enumerate(ts)])
        cum2 = _cumulative_simpson(integrand2, dx)
        lhs2 = np.abs(dets) ** 2
        rhs2 = (np.abs(dets[0]) ** 2) * np.exp(cum2)
        rel2 = np.abs(lhs2 - rhs2) / np.maximum(np.maximum(lhs2, rhs2), tiny)
        max_mod = max(max_mod, float(np.max(rel2)))

    return LiouvilleReport(max_rel_error=max(max_det, max_mod),
                           det_form_error=max_det, modulus_form_error=max_mod,
                           spans=checked)
