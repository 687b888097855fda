"""Grid checkers for the global-solvability criteria.

Four criteria are supported, addressed by the same wire names the CLI
uses:

* ``theorem3.1``  -- the gauge criterion: P(t) >= 0, the drift mismatch
  R - Q* - P(L* - L) is a scalar multiple mu(t) of the identity, and the
  shifted source S_L + S_L* is positive semidefinite. Together with
  Y0 + Y0* >= L(t0) + L*(t0) this certifies global existence and the
  running bound Y(t) + Y*(t) >= L(t) + L*(t).
* ``cor3.1``      -- the skew-gauge variant: P(t) > 0 and the gauge is
  forced to L0 = P^{-1}(Q* - R + mu I)/2, which must be skew-Hermitian;
  the certified bound becomes Y(t) + Y*(t) >= 0.
* ``cor3.2``      -- the sqrt-frame variant: P(t) > 0, the frame term
  T = (sqrt(P)^{-1}(Q* - R)sqrt(P) + nu I)/2 must be skew-Hermitian and
  sqrt(P)(S + S*)sqrt(P) + 2T^2 + (conj(nu) - nu)T >= 0; the bound is the
  congruence sqrt(P)(Y + Y*)sqrt(P) >= 0.
* ``theorem1.1``  -- the linear-comparison baseline: P >= 0, S >= 0,
  R = Q*, which certifies 0 <= Y(t) <= Ytilde(t) for PSD initial values.

All conditions are verified pointwise on a finite uniform grid; every
report carries a note stating this declared approximation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import coefficients as cf
from .coefficients import CoefficientFunction, CoefficientSet, eval_S_lambda
from .exceptions import DimensionError, NotPositiveDefiniteError
from .matrix_core import (
    DEFAULT_TOL,
    as_matrix,
    check_psd,
    frobenius,
    principal_sqrt,
    psd_band,
    sqrt_derivative,
)

#: Default number of uniform grid points for criterion checks.
DEFAULT_GRID_POINTS = 1001

GRID_NOTE = ("conditions verified pointwise on a finite uniform grid over "
             "[t0, t_end]; the certified statement requires them for every "
             "t >= t0 (declared approximation)")

CRITERION_NAMES = ("theorem3.1", "cor3.1", "cor3.2", "theorem1.1")


@dataclass(frozen=True)
class GridSpec:
    """Uniform time grid covering [t0, t_end]."""

    t0: float
    t_end: float
    num_points: int = DEFAULT_GRID_POINTS

    def __post_init__(self):
        if self.num_points < 2:
            raise ValueError(f"grid needs >= 2 points, got {self.num_points}")
        if not self.t0 < self.t_end:
            raise ValueError(f"need t0 < t_end, got [{self.t0}, {self.t_end}]")

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(self.t0, self.t_end, self.num_points)

    @classmethod
    def for_set(cls, cs: CoefficientSet, num_points: int | None = None) -> "GridSpec":
        return cls(cs.t0, cs.t_end, num_points or DEFAULT_GRID_POINTS)


@dataclass
class ConditionRecord:
    """Verdict for one condition with its worst grid-point witness.

    ``kind`` states how to read ``worst_value``: the minimum eigenvalue
    found ("min_eigenvalue") or the largest residual/defect norm
    ("residual", "skew_defect").
    """

    name: str
    passed: bool
    kind: str
    worst_value: float
    worst_time: float
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "kind": self.kind,
            "worst_value": self.worst_value,
            "worst_time": self.worst_time,
            "note": self.note,
        }


@dataclass
class CriterionReport:
    """Aggregate verdict: holds iff every condition passed."""

    criterion: str
    holds: bool
    conditions: list[ConditionRecord]
    notes: list[str] = field(default_factory=list)
    extracted_mu: cf.SampledFunction | None = None
    extracted_nu: cf.SampledFunction | None = None

    def condition(self, name: str) -> ConditionRecord:
        for rec in self.conditions:
            if rec.name == name:
                return rec
        raise KeyError(name)

    def failed_conditions(self) -> list[ConditionRecord]:
        return [rec for rec in self.conditions if not rec.passed]

    def to_dict(self) -> dict:
        from .serialize import function_to_obj

        out = {
            "criterion": self.criterion,
            "holds": self.holds,
            "conditions": [rec.to_dict() for rec in self.conditions],
            "notes": list(self.notes),
        }
        if self.extracted_mu is not None:
            out["extracted_mu"] = function_to_obj(self.extracted_mu)
        if self.extracted_nu is not None:
            out["extracted_nu"] = function_to_obj(self.extracted_nu)
        return out


def _imaginary_shift_note(fn: CoefficientFunction, grid: GridSpec, tol: float,
                          name: str) -> list[str]:
    """Warn when a scalar gauge has a material imaginary part.

    A purely imaginary shift rotates solutions in the complex plane
    (y' = -i y is the model case) and defeats any lower bound on Y + Y*,
    so certificates are only sound for real shifts. The conditions above
    accept complex shifts by contract; this note records the caveat.
    """
    worst = 0.0
    for t in grid.points:
        z = complex(fn.eval(float(t)))
        worst = max(worst, abs(z.imag) / (1.0 + abs(z)))
    if worst > tol:
        return [f"extracted or supplied {name}(t) has a nonzero imaginary part "
                f"(max relative magnitude {worst:.3e}); the certified lower "
                "bound is established for real shifts only and can fail "
                "otherwise"]
    return []


def _worse_min(cur: tuple[float, float], val: float, t: float) -> tuple[float, float]:
    """Lexicographic worst witness for eigenvalue conditions (min value, then time)."""
    if val < cur[0] or (val == cur[0] and t < cur[1]):
        return (val, t)
    return cur


def _scan_psd(grid: GridSpec, matrix_at, tol: float, name: str, note: str = "",
              strict: bool = False) -> ConditionRecord:
    """PSD (or strict PD) check of ``matrix_at(t)`` over the grid."""
    passed = True
    worst = (np.inf, np.inf)
    max_defect = 0.0
    for t in grid.points:
        h = matrix_at(t)
        band = psd_band(h, tol, tol)
        verdict = check_psd(h, tol_psd=band, tol_herm=tol * (1.0 + frobenius(h)))
        max_defect = max(max_defect, verdict.hermiticity_defect)
        ok = verdict.min_eigenvalue > band if strict else verdict.is_psd
        if strict and verdict.hermiticity_defect > tol * (1.0 + frobenius(h)):
            ok = False
        passed = passed and ok
        worst = _worse_min(worst, verdict.min_eigenvalue, float(t))
    if max_defect > 0 and not passed and not note:
        note = f"max hermiticity defect {max_defect:.3e}"
    return ConditionRecord(name=name, passed=passed, kind="min_eigenvalue",
                           worst_value=worst[0], worst_time=worst[1], note=note)


def check_positivity_condition(cs: CoefficientSet, grid: GridSpec | None = None,
                               tol: float = DEFAULT_TOL) -> ConditionRecord:
    """P(t) >= 0 at every grid point (also enforces Hermiticity of P)."""
    grid = grid or GridSpec.for_set(cs)
    return _scan_psd(grid, cs.P.eval, tol, "coefficient_psd")


def check_scalar_shift_condition(cs: CoefficientSet, lam: CoefficientFunction | None,
                                 grid: GridSpec | None = None, tol: float = DEFAULT_TOL
                                 ) -> tuple[ConditionRecord, cf.SampledFunction]:
    """R - Q* - P(L* - L) must equal mu(t) I for some scalar mu.

    The scalar is extracted as tr(M)/n rather than supplied: at each grid
    point the checker forms M(t), takes mu_hat = tr(M)/n and accepts when
    ||M - mu_hat I||_F <= tol (1 + ||M||_F). Returns the extracted mu_hat
    as a sampled scalar function on the grid.
    """
    grid = grid or GridSpec.for_set(cs)
    lam = lam or cf.zero_matrix_function(cs.n)
    cf._require_matrix_function(lam, cs.n, "lambda")
    eye = np.eye(cs.n)
    passed = True
    worst_val, worst_t, worst_ratio = 0.0, float(grid.points[0]), -np.inf
    mu_vals = []
    for t in grid.points:
        lam_t = lam.eval(t)
        m = cs.R.eval(t) - cs.Q.eval(t).conj().T - cs.P.eval(t) @ (lam_t.conj().T - lam_t)
        mu_hat = np.trace(m) / cs.n
        mu_vals.append(complex(mu_hat))
        resid = float(np.linalg.norm(m - mu_hat * eye))
        scale = 1.0 + float(np.linalg.norm(m))
        if resid > tol * scale:
            passed = False
        ratio = resid / scale
        if ratio > worst_ratio:
            worst_ratio, worst_val, worst_t = ratio, resid, float(t)
    mu_fn = cf.sampled(grid.points, mu_vals, order=1, scalar=True)
    rec = ConditionRecord(name="scalar_shift", passed=passed, kind="residual",
                          worst_value=worst_val, worst_time=worst_t)
    return rec, mu_fn


def check_source_condition(cs: CoefficientSet, lam: CoefficientFunction | None,
                           grid: GridSpec | None = None, tol: float = DEFAULT_TOL
                           ) -> ConditionRecord:
    """S_L(t) + S_L*(t) >= 0 at every grid point."""
    grid = grid or GridSpec.for_set(cs)
    lam = lam or cf.zero_matrix_function(cs.n)

    def shifted_source(t):
        s = eval_S_lambda(cs, lam, t)
        return s + s.conj().T

    return _scan_psd(grid, shifted_source, tol, "shifted_source_psd")


def _initial_bound_record(y0: np.ndarray, lam: CoefficientFunction, t0: float,
                          tol: float) -> ConditionRecord:
    lam0 = lam.eval(t0)
    g0 = y0 + y0.conj().T - lam0 - lam0.conj().T
    verdict = check_psd(g0, tol_psd=psd_band(g0, tol, tol))
    return ConditionRecord(name="initial_lower_bound", passed=verdict.is_psd,
                           kind="min_eigenvalue", worst_value=verdict.min_eigenvalue,
                           worst_time=t0)


def check_gauge_criterion(cs: CoefficientSet, lam: CoefficientFunction | None,
                          y0, grid: GridSpec | None = None,
                          tol: float = DEFAULT_TOL) -> CriterionReport:
    """Full check of the gauge criterion (wire name ``theorem3.1``).

    Runs the three coefficient conditions plus the initial-value clause
    Y0 + Y0* >= L(t0) + L*(t0). When it holds, trajectories from Y0 are
    certified to exist on the whole horizon with
    Y(t) + Y*(t) >= L(t) + L*(t); ``verify.verify_hermitian_bound``
    tests that bound along computed trajectories.
    """
    grid = grid or GridSpec.for_set(cs)
    lam = lam or cf.zero_matrix_function(cs.n)
    y0 = as_matrix(y0, "Y0")
    if y0.shape[0] != cs.n:
        raise DimensionError(f"Y0 has dimension {y0.shape[0]}, expected {cs.n}")
    cond_p = check_positivity_condition(cs, grid, tol)
    cond_shift, mu_fn = check_scalar_shift_condition(cs, lam, grid, tol)
    cond_src = check_source_condition(cs, lam, grid, tol)
    cond_init = _initial_bound_record(y0, lam, cs.t0, tol)
    conditions = [cond_p, cond_shift, cond_src, cond_init]
    notes = [GRID_NOTE]
    notes.extend(_imaginary_shift_note(mu_fn, grid, tol, "mu"))
    return CriterionReport(
        criterion="theorem3.1",
        holds=all(rec.passed for rec in conditions),
        conditions=conditions,
        notes=notes,
        extracted_mu=mu_fn,
    )


# ---------------------------------------------------------------------------
# Skew-gauge variant (wire name cor3.1)
# ---------------------------------------------------------------------------

def _skew_gauge_at(cs: CoefficientSet, mu: CoefficientFunction, t: float):
    """Pointwise gauge L0 = P^{-1}(Q* - R + mu I)/2 and its exact derivative.

    The derivative uses d(P^{-1})/dt = -P^{-1} P' P^{-1}, so no finite
    differences enter the source condition below.
    """
    eye = np.eye(cs.n)
    p = cs.P.eval(t)
    g = cs.Q.eval(t).conj().T - cs.R.eval(t) + complex(mu.eval(t)) * eye
    gdot = (cs.Q.derivative(t).conj().T - cs.R.derivative(t)
            + complex(mu.derivative(t)) * eye)
    band = psd_band(p)
    verdict = check_psd(p, tol_psd=band)
    if verdict.min_eigenvalue <= band:
        raise NotPositiveDefiniteError(
            f"P({t}) is not positive definite (min eigenvalue "
            f"{verdict.min_eigenvalue:.6e}); the skew gauge is undefined",
            min_eigenvalue=verdict.min_eigenvalue)
    lam0 = np.linalg.solve(p, g) / 2.0
    lam0dot = np.linalg.solve(p, gdot / 2.0 - cs.P.derivative(t) @ lam0)
    return lam0, lam0dot


def build_skew_gauge(cs: CoefficientSet, mu: CoefficientFunction | None = None,
                     grid: GridSpec | None = None, tol: float = DEFAULT_TOL
                     ) -> tuple[cf.SampledFunction, ConditionRecord]:
    """Construct L0(t) = P(t)^{-1}[Q*(t) - R(t) + mu(t) I]/2 on the grid.

    Returns the gauge as a sampled function (cubic values, exact node
    derivatives) plus a record of whether it is skew-Hermitian at every
    point. When skewness passes, L0 + L0* is identically zero and the
    certified bound reduces to Y(t) + Y*(t) >= 0.
    """
    grid = grid or GridSpec.for_set(cs)
    mu = mu or cf.zero_scalar_function()
    vals, derivs = [], []
    passed = True
    worst_val, worst_t = 0.0, float(grid.points[0])
    for t in grid.points:
        lam0, lam0dot = _skew_gauge_at(cs, mu, t)
        vals.append(lam0)
        derivs.append(lam0dot)
        defect = float(np.linalg.norm(lam0 + lam0.conj().T))
        if defect > tol * (1.0 + float(np.linalg.norm(lam0))):
            passed = False
        if defect > worst_val:
            worst_val, worst_t = defect, float(t)
    lam0_fn = cf.sampled(grid.points, vals, order=3, node_derivatives=derivs)
    rec = ConditionRecord(name="gauge_skew", passed=passed, kind="skew_defect",
                          worst_value=worst_val, worst_time=worst_t)
    return lam0_fn, rec


def check_skew_gauge_criterion(cs: CoefficientSet, mu: CoefficientFunction | None,
                               y0, grid: GridSpec | None = None,
                               tol: float = DEFAULT_TOL) -> CriterionReport:
    """Criterion with the forced skew gauge (wire name ``cor3.1``)."""
    grid = grid or GridSpec.for_set(cs)
    mu = mu or cf.zero_scalar_function()
    y0 = as_matrix(y0, "Y0")
    if y0.shape[0] != cs.n:
        raise DimensionError(f"Y0 has dimension {y0.shape[0]}, expected {cs.n}")

    cond_pd = _scan_psd(grid, cs.P.eval, tol, "coefficient_pd", strict=True)

    passed_skew = True
    worst_skew, worst_skew_t = 0.0, float(grid.points[0])
    passed_src = True
    worst_src = (np.inf, np.inf)
    for t in grid.points:
        try:
            lam0, lam0dot = _skew_gauge_at(cs, mu, t)
        except NotPositiveDefiniteError:
            # witnessed by cond_pd; the gauge is undefined at this point
            passed_skew = passed_src = False
            continue
        defect = float(np.linalg.norm(lam0 + lam0.conj().T))
        if defect > tol * (1.0 + float(np.linalg.norm(lam0))):
            passed_skew = False
        if defect > worst_skew:
            worst_skew, worst_skew_t = defect, float(t)
        s_l = (cs.S.eval(t) - lam0dot - lam0 @ cs.P.eval(t) @ lam0
               - cs.Q.eval(t) @ lam0 - lam0 @ cs.R.eval(t))
        h = s_l + s_l.conj().T
        verdict = check_psd(h, tol_psd=psd_band(h, tol, tol))
        passed_src = passed_src and verdict.is_psd
        worst_src = _worse_min(worst_src, verdict.min_eigenvalue, float(t))

    cond_skew = ConditionRecord(name="gauge_skew", passed=passed_skew,
                                kind="skew_defect", worst_value=worst_skew,
                                worst_time=worst_skew_t)
    cond_src = ConditionRecord(name="shifted_source_psd", passed=passed_src,
                               kind="min_eigenvalue", worst_value=worst_src[0],
                               worst_time=worst_src[1])
    g0 = y0 + y0.conj().T
    v0 = check_psd(g0, tol_psd=psd_band(g0, tol, tol))
    cond_init = ConditionRecord(name="initial_psd", passed=v0.is_psd,
                                kind="min_eigenvalue",
                                worst_value=v0.min_eigenvalue, worst_time=cs.t0)
    conditions = [cond_pd, cond_skew, cond_src, cond_init]
    notes = [GRID_NOTE,
             "skew gauge cancels in the bound: the certified statement is "
             "Y(t) + Y*(t) >= 0"]
    notes.extend(_imaginary_shift_note(mu, grid, tol, "mu"))
    return CriterionReport(
        criterion="cor3.1",
        holds=all(rec.passed for rec in conditions),
        conditions=conditions,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# Sqrt-frame variant (wire name cor3.2)
# ---------------------------------------------------------------------------

def sqrt_frame_skew_term(cs: CoefficientSet, nu: CoefficientFunction | None,
                         t: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """T(t) = (sqrt(P)^{-1} [Q*(t) - R(t)] sqrt(P) + nu(t) I) / 2."""
    nu = nu or cf.zero_scalar_function()
    sp = principal_sqrt(cs.P.eval(t), tol)
    a = cs.Q.eval(t).conj().T - cs.R.eval(t)
    return (np.linalg.solve(sp, a) @ sp + complex(nu.eval(t)) * np.eye(cs.n)) / 2.0


def sqrt_frame_condition_matrix(cs: CoefficientSet, nu: CoefficientFunction | None,
                                t: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """sqrt(P)(S + S*)sqrt(P) + 2 T^2 + (conj(nu) - nu) T at time t."""
    nu = nu or cf.zero_scalar_function()
    sp = principal_sqrt(cs.P.eval(t), tol)
    s = cs.S.eval(t)
    t_term = sqrt_frame_skew_term(cs, nu, t, tol)
    nu_t = complex(nu.eval(t))
    return sp @ (s + s.conj().T) @ sp + 2.0 * (t_term @ t_term) \
        + (np.conj(nu_t) - nu_t) * t_term


def check_sqrt_frame_criterion(cs: CoefficientSet, nu: CoefficientFunction | None = None,
                               y0=None, grid: GridSpec | None = None,
                               tol: float = DEFAULT_TOL) -> CriterionReport:
    """Criterion in the sqrt(P) frame (wire name ``cor3.2``).

    Passes when P(t) > 0, the frame term T is skew-Hermitian, and the
    condition matrix is PSD at every grid point. When an initial value is
    supplied, sqrt(P(t0))(Y0 + Y0*)sqrt(P(t0)) >= 0 is checked as well.
    """
    grid = grid or GridSpec.for_set(cs)
    nu = nu or cf.zero_scalar_function()

    cond_pd = _scan_psd(grid, cs.P.eval, tol, "coefficient_pd", strict=True)

    passed_skew = True
    worst_skew, worst_skew_t = 0.0, float(grid.points[0])
    passed_cond = True
    worst_cond = (np.inf, np.inf)
    nu_vals = []
    for t in grid.points:
        nu_vals.append(complex(nu.eval(t)))
        try:
            t_term = sqrt_frame_skew_term(cs, nu, t, tol)
        except NotPositiveDefiniteError:
            # already witnessed by cond_pd; skip the dependent conditions here
            passed_skew = passed_cond = False
            continue
        defect = float(np.linalg.norm(t_term + t_term.conj().T))
        if defect > tol * (1.0 + float(np.linalg.norm(t_term))):
            passed_skew = False
        if defect > worst_skew:
            worst_skew, worst_skew_t = defect, float(t)
        sp = principal_sqrt(cs.P.eval(t), tol)
        s = cs.S.eval(t)
        nu_t = nu_vals[-1]
        c = sp @ (s + s.conj().T) @ sp + 2.0 * (t_term @ t_term) \
            + (np.conj(nu_t) - nu_t) * t_term
        verdict = check_psd(c, tol_psd=psd_band(c, tol, tol))
        passed_cond = passed_cond and verdict.is_psd
        worst_cond = _worse_min(worst_cond, verdict.min_eigenvalue, float(t))

    conditions = [
        cond_pd,
        ConditionRecord(name="sqrt_frame_skew", passed=passed_skew, kind="skew_defect",
                        worst_value=worst_skew, worst_time=worst_skew_t),
        ConditionRecord(name="sqrt_frame_psd", passed=passed_cond,
                        kind="min_eigenvalue", worst_value=worst_cond[0],
                        worst_time=worst_cond[1]),
    ]
    if y0 is not None:
        y0 = as_matrix(y0, "Y0")
        if y0.shape[0] != cs.n:
            raise DimensionError(f"Y0 has dimension {y0.shape[0]}, expected {cs.n}")
        if cond_pd.passed:
            sp0 = principal_sqrt(cs.P.eval(cs.t0), tol)
            g0 = sp0 @ (y0 + y0.conj().T) @ sp0
        else:
            g0 = y0 + y0.conj().T
        v0 = check_psd(g0, tol_psd=psd_band(g0, tol, tol))
        conditions.append(ConditionRecord(
            name="initial_psd", passed=v0.is_psd, kind="min_eigenvalue",
            worst_value=v0.min_eigenvalue, worst_time=cs.t0))

    notes = [GRID_NOTE,
             "certified bound is the congruence "
             "sqrt(P(t))(Y(t) + Y*(t))sqrt(P(t)) >= 0, equivalent to "
             "Y(t) + Y*(t) >= 0 while P(t) > 0"]
    notes.extend(_imaginary_shift_note(nu, grid, tol, "nu"))
    return CriterionReport(
        criterion="cor3.2",
        holds=all(rec.passed for rec in conditions),
        conditions=conditions,
        notes=notes,
        extracted_nu=cf.sampled(grid.points, nu_vals, order=1, scalar=True),
    )


def sqrt_frame_factors(cs: CoefficientSet, t: float, tol: float = DEFAULT_TOL
                       ) -> tuple[np.ndarray, np.ndarray]:
    """The unique factors F, L with F sqrt(P) = sqrt(P) Q - sqrt(P)' and
    sqrt(P) L = R sqrt(P) - sqrt(P)'.

    Explicitly F = [sqrt(P) Q - sqrt(P)'] sqrt(P)^{-1} and
    L = sqrt(P)^{-1} [R sqrt(P) - sqrt(P)'].
    """
    p = cs.P.eval(t)
    sp = principal_sqrt(p, tol)
    spdot = sqrt_derivative(p, cs.P.derivative(t), tol)
    rhs_f = sp @ cs.Q.eval(t) - spdot
    f = np.linalg.solve(sp.T, rhs_f.T).T
    l = np.linalg.solve(sp, cs.R.eval(t) @ sp - spdot)
    return f, l


def sqrt_frame_source_term(cs: CoefficientSet, nu: CoefficientFunction | None,
                           t: float, tol: float = DEFAULT_TOL,
                           fd_step: float = 1e-4) -> np.ndarray:
    """Source term D(t) of the frame-shifted quadratic equation:

        D = T' + T^2 + F T + T L - sqrt(P) S sqrt(P).

    T' is exact (zero) for constant data and otherwise approximated by a
    divided difference with step ``fd_step`` (one-sided at the domain
    ends). For skew T the identity
    D + D* = -2 T^2 + (nu - conj(nu)) T - sqrt(P)(S + S*)sqrt(P) holds,
    which ties this term to the condition matrix of the checker above.
    """
    nu = nu or cf.zero_scalar_function()
    t = float(t)
    t_term = sqrt_frame_skew_term(cs, nu, t, tol)
    all_constant = all(g.kind == "constant" for g in (cs.P, cs.Q, cs.R, nu))
    if all_constant:
        tdot = np.zeros((cs.n, cs.n), dtype=np.complex128)
    else:
        ta = max(cs.t0, t - fd_step)
        tb = min(cs.t_end, t + fd_step)
        if tb <= ta:
            raise ValueError("fd_step too large for the domain")
        tdot = (sqrt_frame_skew_term(cs, nu, tb, tol)
                - sqrt_frame_skew_term(cs, nu, ta, tol)) / (tb - ta)
    f, l = sqrt_frame_factors(cs, t, tol)
    sp = principal_sqrt(cs.P.eval(t), tol)
    return tdot + t_term @ t_term + f @ t_term + t_term @ l - sp @ cs.S.eval(t) @ sp


# ---------------------------------------------------------------------------
# Linear-comparison baseline (wire name theorem1.1)
# ---------------------------------------------------------------------------

def check_comparison_hypotheses(cs: CoefficientSet, y0, grid: GridSpec | None = None,
                                tol: float = DEFAULT_TOL) -> CriterionReport:
    """P >= 0, S >= 0, R = Q*, Y0 >= 0 (wire name ``theorem1.1``)."""
    grid = grid or GridSpec.for_set(cs)
    y0 = as_matrix(y0, "Y0")
    if y0.shape[0] != cs.n:
        raise DimensionError(f"Y0 has dimension {y0.shape[0]}, expected {cs.n}")
    cond_p = _scan_psd(grid, cs.P.eval, tol, "coefficient_psd")
    cond_s = _scan_psd(grid, cs.S.eval, tol, "source_psd")

    passed = True
    worst_val, worst_t, worst_ratio = 0.0, float(grid.points[0]), -np.inf
    for t in grid.points:
        r = cs.R.eval(t)
        resid = float(np.linalg.norm(r - cs.Q.eval(t).conj().T))
        scale = 1.0 + float(np.linalg.norm(r))
        if resid > tol * scale:
            passed = False
        if resid / scale > worst_ratio:
            worst_ratio, worst_val, worst_t = resid / scale, resid, float(t)
    cond_sym = ConditionRecord(name="symmetric_pair", passed=passed, kind="residual",
                               worst_value=worst_val, worst_time=worst_t)

    v0 = check_psd(y0, tol_psd=psd_band(y0, tol, tol))
    cond_init = ConditionRecord(name="initial_psd", passed=v0.is_psd,
                                kind="min_eigenvalue",
                                worst_value=v0.min_eigenvalue, worst_time=cs.t0)
    conditions = [cond_p, cond_s, cond_sym, cond_init]
    return CriterionReport(
        criterion="theorem1.1",
        holds=all(rec.passed for rec in conditions),
        conditions=conditions,
        notes=[GRID_NOTE,
               "certified statement: 0 <= Y(t) <= Ytilde(t) with Ytilde the "
               "linear comparison solution (integrate_lyapunov_comparison)"],
    )


def run_criterion(name: str, cs: CoefficientSet, y0,
                  lam: CoefficientFunction | None = None,
                  mu: CoefficientFunction | None = None,
                  nu: CoefficientFunction | None = None,
                  grid: GridSpec | None = None,
                  tol: float = DEFAULT_TOL) -> CriterionReport:
    """Dispatch a criterion check by its wire name."""
    if name == "theorem3.1":
        return check_gauge_criterion(cs, lam, y0, grid, tol)
    if name == "cor3.1":
        return check_skew_gauge_criterion(cs, mu, y0, grid, tol)
    if name == "cor3.2":
        return check_sqrt_frame_criterion(cs, nu, y0, grid, tol)
    if name == "theorem1.1":
        return check_comparison_hypotheses(cs, y0, grid, tol)
    raise ValueError(f"unknown criterion {name!r}; expected one of {CRITERION_NAMES}")
