"""Time-varying coefficient data.

The quadratic matrix equation

    Y' + Y P(t) Y + Q(t) Y + Y R(t) - S(t) = 0

is specified through four matrix-valued functions of time plus an
optional matrix gauge L(t) and scalar gauges mu(t), nu(t). Three
representations are supported so that derivatives are either exact or
carry a documented finite-difference error:

* constant       -- a single value, derivative identically zero;
* polynomial     -- matrix (or scalar) coefficients of t -> sum C_k (t - t_ref)^k,
                    degree <= 8, exact term-by-term derivative;
* sampled        -- values on a strictly increasing grid, linear or cubic
                    interpolation, central-difference node derivatives
                    (second order interior, first order at the ends).

Values are immutable after construction and evaluation is pure, so
functions are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .exceptions import DimensionError, DomainError, NotHermitianError
from .matrix_core import as_matrix, frobenius, hermiticity_defect

#: Highest supported polynomial degree.
MAX_DEGREE = 8


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _as_value(value, scalar: bool, name: str):
    """Normalize one stored value: () for scalar kind, (n, n) otherwise."""
    if scalar:
        v = np.asarray(value, dtype=np.complex128)
        if v.ndim != 0:
            raise DimensionError(f"{name}: expected a scalar value, got shape {v.shape}")
        if not np.isfinite(v.real) or not np.isfinite(v.imag):
            raise ValueError(f"{name}: non-finite scalar value")
        return v.reshape(())
    return as_matrix(value, name)


class CoefficientFunction:
    """Common interface: ``eval(t)``, ``derivative(t)``, ``shape``, ``kind``."""

    #: () for scalar-valued functions, (n, n) for matrix-valued ones.
    shape: tuple

    @property
    def is_scalar(self) -> bool:
        return self.shape == ()

    @property
    def dim(self) -> int | None:
        """Matrix dimension n, or None for scalar-valued functions."""
        return None if self.is_scalar else self.shape[0]

    def eval(self, t: float):
        raise NotImplementedError

    def derivative(self, t: float):
        raise NotImplementedError

    def _out(self, value: np.ndarray):
        if self.is_scalar:
            return complex(value)
        return np.asarray(value, dtype=np.complex128)


class ConstantFunction(CoefficientFunction):
    """A fixed value; derivative is identically zero."""

    kind = "constant"

    def __init__(self, value, scalar: bool = False):
        self.value = _freeze(np.array(_as_value(value, scalar, "constant value")))
        self.shape = self.value.shape

    def eval(self, t: float):
        return self._out(self.value.copy())

    def derivative(self, t: float):
        return self._out(np.zeros(self.shape, dtype=np.complex128))


class PolynomialFunction(CoefficientFunction):
    """t -> sum_k C_k (t - t_ref)^k, evaluated by Horner's scheme."""

    kind = "polynomial"

    def __init__(self, coefficients, t_ref: float = 0.0, scalar: bool = False):
        coeffs = [_as_value(c, scalar, f"polynomial coefficient {k}")
                  for k, c in enumerate(coefficients)]
        if not coeffs:
            raise ValueError("polynomial needs at least one coefficient")
        if len(coeffs) - 1 > MAX_DEGREE:
            raise ValueError(f"polynomial degree {len(coeffs) - 1} exceeds cap {MAX_DEGREE}")
        shape = coeffs[0].shape
        for k, c in enumerate(coeffs):
            if c.shape != shape:
                raise DimensionError(f"polynomial coefficient {k} has shape {c.shape}, expected {shape}")
        self.coefficients = _freeze(np.stack(coeffs))
        self.t_ref = float(t_ref)
        self.shape = shape
        # Term-by-term derivative coefficients, precomputed once.
        d = len(coeffs) - 1
        if d == 0:
            deriv = np.zeros((1,) + shape, dtype=np.complex128)
        else:
            ks = np.arange(1, d + 1, dtype=np.float64).reshape((-1,) + (1,) * len(shape))
            deriv = self.coefficients[1:] * ks
        self._deriv_coefficients = _freeze(deriv)

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    @staticmethod
    def _horner(coeffs: np.ndarray, dt: float) -> np.ndarray:
        acc = coeffs[-1].copy()
        for k in range(coeffs.shape[0] - 2, -1, -1):
            acc = acc * dt + coeffs[k]
        return acc

    def eval(self, t: float):
        return self._out(self._horner(self.coefficients, float(t) - self.t_ref))

    def derivative(self, t: float):
        return self._out(self._horner(self._deriv_coefficients, float(t) - self.t_ref))


class SampledFunction(CoefficientFunction):
    """Values on a strictly increasing time grid.

    ``order`` selects linear (1) or natural cubic spline (3) interpolation
    of the values. Node derivatives default to central differences on the
    grid (one-sided at the endpoints; error O(h^2) interior, O(h) at the
    ends) and are interpolated linearly between nodes. Exact node
    derivatives may be supplied instead when the caller knows them.
    """

    kind = "sampled"

    def __init__(self, times, values, order: int = 3, scalar: bool = False,
                 node_derivatives=None):
        times = np.asarray(times, dtype=np.float64)
        if times.ndim != 1 or times.size < 2:
            raise ValueError("sampled grid needs at least 2 time points")
        if not np.all(np.diff(times) > 0):
            raise ValueError("sampled grid times must be strictly increasing")
        if order not in (1, 3):
            raise ValueError(f"interpolation order must be 1 or 3, got {order}")
        vals = np.stack([_as_value(v, scalar, f"sampled value {k}")
                         for k, v in enumerate(values)])
        if vals.shape[0] != times.size:
            raise DimensionError(
                f"sampled grid has {times.size} times but {vals.shape[0]} values")
        self.times = _freeze(times.copy())
        self.values = _freeze(vals)
        self.order = int(order)
        self.shape = vals.shape[1:]
        if node_derivatives is not None:
            nd = np.stack([_as_value(v, scalar, f"node derivative {k}")
                           for k, v in enumerate(node_derivatives)])
            if nd.shape != vals.shape:
                raise DimensionError("node_derivatives shape mismatch")
            self._node_derivs = _freeze(nd)
        else:
            self._node_derivs = _freeze(np.gradient(vals, times, axis=0, edge_order=1))
        # Natural cubic spline needs a few points; degrade gracefully below.
        self._spline = None
        if self.order == 3 and times.size >= 3:
            self._spline = CubicSpline(times, vals, axis=0, bc_type="natural")

    def _clip_t(self, t: float) -> float:
        t = float(t)
        lo, hi = float(self.times[0]), float(self.times[-1])
        slack = 1e-9 * max(1.0, hi - lo)
        if t < lo - slack or t > hi + slack:
            raise DomainError(f"t = {t} outside sampled domain [{lo}, {hi}]")
        return min(max(t, lo), hi)

    def _linear(self, stacked: np.ndarray, t: float) -> np.ndarray:
        i = int(np.searchsorted(self.times, t, side="right") - 1)
        i = min(max(i, 0), self.times.size - 2)
        t0, t1 = self.times[i], self.times[i + 1]
        w = (t - t0) / (t1 - t0)
        return (1.0 - w) * stacked[i] + w * stacked[i + 1]

    def eval(self, t: float):
        t = self._clip_t(t)
        if self._spline is not None:
            return self._out(self._spline(t))
        return self._out(self._linear(self.values, t))

    def derivative(self, t: float):
        t = self._clip_t(t)
        return self._out(self._linear(self._node_derivs, t))


def constant(value, scalar: bool = False) -> ConstantFunction:
    return ConstantFunction(value, scalar=scalar)


def polynomial(coefficients, t_ref: float = 0.0, scalar: bool = False) -> PolynomialFunction:
    return PolynomialFunction(coefficients, t_ref=t_ref, scalar=scalar)


def sampled(times, values, order: int = 3, scalar: bool = False,
            node_derivatives=None) -> SampledFunction:
    return SampledFunction(times, values, order=order, scalar=scalar,
                           node_derivatives=node_derivatives)


def zero_matrix_function(n: int) -> ConstantFunction:
    return ConstantFunction(np.zeros((n, n)), scalar=False)


def zero_scalar_function() -> ConstantFunction:
    return ConstantFunction(0.0, scalar=True)


def _require_matrix_function(f: CoefficientFunction, n: int, name: str) -> None:
    if f.is_scalar:
        raise DimensionError(f"{name} must be matrix-valued")
    if f.dim != n:
        raise DimensionError(f"{name} has dimension {f.dim}, expected {n}")


@dataclass(frozen=True)
class CoefficientSet:
    """The data (P, Q, R, S) of the quadratic equation on [t0, t_end].

    P must be Hermitian-valued; this is probed at construction on a few
    points and enforced pointwise by every grid check that evaluates P.
    """

    n: int
    t0: float
    t_end: float
    P: CoefficientFunction
    Q: CoefficientFunction
    R: CoefficientFunction
    S: CoefficientFunction
    notes: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not 1 <= self.n <= 64:
            raise DimensionError(f"dimension n = {self.n} outside supported range 1..64")
        if not self.t0 < self.t_end:
            raise ValueError(f"need t0 < t_end, got [{self.t0}, {self.t_end}]")
        for name in ("P", "Q", "R", "S"):
            _require_matrix_function(getattr(self, name), self.n, name)
        for t in (self.t0, 0.5 * (self.t0 + self.t_end), self.t_end):
            p = self.P.eval(t)
            if hermiticity_defect(p) > 1e-8 * (1.0 + frobenius(p)):
                raise NotHermitianError(f"P({t}) is not Hermitian")

    @property
    def span(self) -> float:
        return self.t_end - self.t0


def eval_S_lambda(cs: CoefficientSet, lam: CoefficientFunction, t: float) -> np.ndarray:
    """S(t) - L'(t) - L(t)P(t)L(t) - Q(t)L(t) - L(t)R(t) for the gauge L."""
    _require_matrix_function(lam, cs.n, "lambda")
    lam_t = lam.eval(t)
    return (cs.S.eval(t) - lam.derivative(t) - lam_t @ cs.P.eval(t) @ lam_t
            - cs.Q.eval(t) @ lam_t - lam_t @ cs.R.eval(t))


def eval_Q_lambda(cs: CoefficientSet, lam: CoefficientFunction, t: float) -> np.ndarray:
    """Q(t) + L(t)P(t)."""
    _require_matrix_function(lam, cs.n, "lambda")
    return cs.Q.eval(t) + lam.eval(t) @ cs.P.eval(t)


def eval_R_lambda(cs: CoefficientSet, lam: CoefficientFunction, t: float) -> np.ndarray:
    """R(t) + P(t)L(t)."""
    _require_matrix_function(lam, cs.n, "lambda")
    return cs.R.eval(t) + cs.P.eval(t) @ lam.eval(t)
