import numpy as np
import pytest
from numpy.testing import assert_allclose

from riccati_cert import coefficients as cf
from riccati_cert.coefficients import (
    CoefficientSet,
    eval_Q_lambda,
    eval_R_lambda,
    eval_S_lambda,
)
from riccati_cert.exceptions import DimensionError, DomainError, NotHermitianError


def scalar_set(t_end=2.0, p=1.0, q=0.0, r=0.0, s=1.0):
    return CoefficientSet(n=1, t0=0.0, t_end=t_end,
                          P=cf.constant([[p]]), Q=cf.constant([[q]]),
                          R=cf.constant([[r]]), S=cf.constant([[s]]))


class TestEval:
    def test_constant(self):
        f = cf.constant(np.eye(2))
        for t in (-1.0, 0.0, 17.3):
            assert_allclose(f.eval(t), np.eye(2))
        assert_allclose(f.derivative(5.0), np.zeros((2, 2)))

    def test_polynomial_linear(self):
        f = cf.polynomial([np.zeros((2, 2)), np.eye(2)], t_ref=1.0)
        assert_allclose(f.eval(3.0), 2 * np.eye(2))
        assert_allclose(f.derivative(3.0), np.eye(2))

    def test_sampled_linear_midpoint(self):
        f = cf.sampled([0.0, 1.0], [np.zeros((2, 2)), np.eye(2)], order=1)
        assert_allclose(f.eval(0.5), 0.5 * np.eye(2))

    def test_sampled_outside_domain(self):
        f = cf.sampled([0.0, 1.0], [np.zeros((1, 1)), np.eye(1)], order=1)
        with pytest.raises(DomainError):
            f.eval(2.0)
        with pytest.raises(DomainError):
            f.derivative(-0.5)

    def test_scalar_kind(self):
        f = cf.polynomial([1.0, 2.0j], scalar=True)
        assert f.eval(2.0) == pytest.approx(1.0 + 4.0j)
        assert f.derivative(2.0) == pytest.approx(2.0j)

    def test_polynomial_degree_cap(self):
        with pytest.raises(ValueError):
            cf.polynomial([np.eye(1)] * 10)


class TestDerivative:
    def test_sampled_grid_derivative_oracle(self):
        # values of t^2 I on an h = 0.01 grid; exact derivative at t = 1 is 2I
        ts = np.arange(0.5, 1.5 + 1e-12, 0.01)
        f = cf.sampled(ts, [t * t * np.eye(2) for t in ts], order=3)
        assert np.linalg.norm(f.derivative(1.0) - 2 * np.eye(2)) < 1e-3

    def test_sampled_cubic_values(self):
        ts = np.linspace(0.0, 2.0, 41)
        f = cf.sampled(ts, [np.array([[np.sin(t)]]) for t in ts], order=3)
        assert abs(f.eval(1.234)[0, 0] - np.sin(1.234)) < 1e-5

    def test_polynomial_matches_central_differences(self):
        # halving h shrinks the discrepancy by >= 3.5x (second order)
        rng = np.random.default_rng(11)
        coeffs = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
                  for _ in range(3)]
        coeffs.append(np.eye(2) + rng.standard_normal((2, 2)))  # nonzero third derivative
        f = cf.polynomial(coeffs, t_ref=0.0)
        t = 0.7
        exact = f.derivative(t)

        def fd_err(h):
            fd = (f.eval(t + h) - f.eval(t - h)) / (2 * h)
            return np.linalg.norm(fd - exact)

        assert fd_err(1e-2) / fd_err(5e-3) >= 3.5


class TestGaugeAlgebra:
    def test_zero_gauge_is_bit_identical_to_S(self):
        rng = np.random.default_rng(12)
        s_val = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        cs = CoefficientSet(n=3, t0=0.0, t_end=1.0,
                            P=cf.constant(np.eye(3)), Q=cf.constant(s_val + s_val.conj().T),
                            R=cf.constant(np.zeros((3, 3))), S=cf.constant(s_val))
        lam = cf.zero_matrix_function(3)
        got = eval_S_lambda(cs, lam, 0.3)
        assert np.array_equal(got, cs.S.eval(0.3))

    def test_scalar_constant_example(self):
        # S = 2, L = 1, P = 1, Q = R = 0: S_L = 2 - 0 - 1 - 0 - 0 = 1
        cs = scalar_set(p=1.0, s=2.0)
        lam = cf.constant([[1.0]])
        assert eval_S_lambda(cs, lam, 0.5)[0, 0] == pytest.approx(1.0)

    def test_time_dependent_gauge_example(self):
        # L(t) = t, P = 1, Q = R = S = 0 at t = 1: 0 - 1 - t^2 = -2
        cs = scalar_set(p=1.0, s=0.0)
        lam = cf.polynomial([[[0.0]], [[1.0]]], t_ref=0.0)
        assert eval_S_lambda(cs, lam, 1.0)[0, 0] == pytest.approx(-2.0)

    def test_shifted_coefficients(self):
        cs = scalar_set(p=3.0, q=1.0, r=1.0, s=0.0)
        lam = cf.constant([[2.0]])
        assert eval_Q_lambda(cs, lam, 0.1)[0, 0] == pytest.approx(7.0)  # 1 + 2*3
        assert eval_R_lambda(cs, lam, 0.1)[0, 0] == pytest.approx(7.0)  # 1 + 3*2

    def test_zero_gauge_passthrough(self):
        cs = scalar_set(q=4.0, r=-2.0)
        lam = cf.zero_matrix_function(1)
        assert eval_Q_lambda(cs, lam, 0.0)[0, 0] == pytest.approx(4.0)
        assert eval_R_lambda(cs, lam, 0.0)[0, 0] == pytest.approx(-2.0)

    def test_dimension_mismatch_fails_loudly(self):
        cs = scalar_set()
        with pytest.raises(DimensionError):
            eval_S_lambda(cs, cf.zero_matrix_function(2), 0.5)


class TestCoefficientSet:
    def test_rejects_bad_horizon(self):
        with pytest.raises(ValueError):
            scalar_set(t_end=0.0)

    def test_rejects_non_hermitian_P(self):
        with pytest.raises(NotHermitianError):
            CoefficientSet(n=2, t0=0.0, t_end=1.0,
                           P=cf.constant([[0.0, 1.0], [0.0, 0.0]]),
                           Q=cf.constant(np.zeros((2, 2))),
                           R=cf.constant(np.zeros((2, 2))),
                           S=cf.constant(np.zeros((2, 2))))

    def test_rejects_mixed_dimensions(self):
        with pytest.raises(DimensionError):
            CoefficientSet(n=2, t0=0.0, t_end=1.0,
                           P=cf.constant(np.eye(2)), Q=cf.constant(np.zeros((3, 3))),
                           R=cf.constant(np.zeros((2, 2))), S=cf.constant(np.zeros((2, 2))))

    def test_rejects_scalar_function_slot(self):
        with pytest.raises(DimensionError):
            CoefficientSet(n=1, t0=0.0, t_end=1.0,
                           P=cf.constant(1.0, scalar=True), Q=cf.constant([[0.0]]),
                           R=cf.constant([[0.0]]), S=cf.constant([[0.0]]))
