import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from riccati_cert import coefficients as cf
from riccati_cert.coefficients import CoefficientSet
from riccati_cert.instances import InstanceSpec, canonical_catalog, gen_comparison
from riccati_cert.integrate import (
    Trajectory,
    integrate_lyapunov_comparison,
    integrate_riccati_direct,
)
from riccati_cert.verify import (
    eigen_monitor,
    residual_check,
    residual_series,
    verify_hermitian_bound,
    verify_sandwich,
)

CAT = canonical_catalog()


def tanh_trajectory(t_end=3.0, num=61):
    e = CAT["tanh"]
    cs = CoefficientSet(n=1, t0=0.0, t_end=t_end, P=e.cs.P, Q=e.cs.Q, R=e.cs.R, S=e.cs.S)
    ts = np.linspace(0.0, t_end, num)
    return cs, integrate_riccati_direct(cs, e.y0, sample_times=ts)


class TestHermitianBound:
    def test_tanh_touches_zero_at_start(self):
        _, traj = tanh_trajectory()
        rep = verify_hermitian_bound(traj, None, tol=1e-6)
        assert rep.passed
        assert rep.min_value == pytest.approx(0.0, abs=1e-12)
        assert rep.t_min == 0.0

    def test_zero_trajectory_boundary(self):
        traj = Trajectory(times=np.linspace(0, 1, 5),
                          values=np.zeros((5, 1, 1), dtype=complex),
                          status="completed", method="direct")
        rep = verify_hermitian_bound(traj)
        assert rep.passed and rep.min_value == 0.0

    def test_negative_tan_fails(self):
        # on [0, 1] the -tan solution reaches 2 * (-tan 1) ~ -3.1148
        e = CAT["tan_blowup"]
        cs = CoefficientSet(n=1, t0=0.0, t_end=1.0, P=e.cs.P, Q=e.cs.Q, R=e.cs.R, S=e.cs.S)
        ts = np.linspace(0.0, 1.0, 21)
        traj = integrate_riccati_direct(cs, e.y0, sample_times=ts)
        assert traj.status == "completed"
        rep = verify_hermitian_bound(traj, None, tol=1e-6)
        assert not rep.passed
        assert rep.min_value == pytest.approx(-2 * math.tan(1.0), abs=1e-6)
        assert rep.t_min == pytest.approx(1.0)

    def test_gauge_offset(self):
        # constant gauge shifts the required floor
        _, traj = tanh_trajectory()
        lam = cf.constant([[0.25]])
        rep = verify_hermitian_bound(traj, lam, tol=1e-6)
        assert not rep.passed  # 2 tanh(0) - 0.5 < 0 at t = 0
        assert rep.min_value == pytest.approx(-0.5, abs=1e-9)


class TestEigenMonitor:
    def test_tanh_series(self):
        _, traj = tanh_trajectory()
        lam_series = eigen_monitor(traj)
        expected = 2 * np.tanh(traj.times)
        assert np.max(np.abs(lam_series - expected)) <= 1e-8
        assert np.all(np.diff(lam_series) >= -1e-12)  # increasing from 0

    def test_zero_series(self):
        traj = Trajectory(times=np.linspace(0, 1, 4),
                          values=np.zeros((4, 2, 2), dtype=complex),
                          status="completed", method="direct")
        assert_allclose(eigen_monitor(traj), np.zeros(4))

    def test_block_decoupling(self):
        # diag(tanh, tanh) has least gap eigenvalue 2 tanh(t)
        cs = CoefficientSet(n=2, t0=0.0, t_end=2.0,
                            P=cf.constant(np.eye(2)), Q=cf.constant(np.zeros((2, 2))),
                            R=cf.constant(np.zeros((2, 2))), S=cf.constant(np.eye(2)))
        ts = np.linspace(0.0, 2.0, 21)
        traj = integrate_riccati_direct(cs, np.zeros((2, 2)), sample_times=ts)
        series = eigen_monitor(traj)
        assert np.max(np.abs(series - 2 * np.tanh(ts))) <= 1e-8


class TestSandwich:
    def test_tanh_under_linear(self):
        cs = CAT["tanh"].cs
        ts = np.linspace(0.0, 3.0, 31)
        y = integrate_riccati_direct(cs, CAT["tanh"].y0, sample_times=ts)
        yt = integrate_lyapunov_comparison(cs, CAT["tanh"].y0, sample_times=ts)
        rep = verify_sandwich(y, yt, tol=1e-6)
        assert rep.passed
        assert rep.lower_min == pytest.approx(0.0, abs=1e-9)

    def test_equality_case_linear_instance(self):
        # P = 0 and R = Q* = 0 make the equation linear: Y == Ytilde
        cs = CAT["linear"].cs
        ts = np.linspace(0.0, 3.0, 31)
        y = integrate_riccati_direct(cs, CAT["linear"].y0, sample_times=ts)
        yt = integrate_lyapunov_comparison(cs, CAT["linear"].y0, sample_times=ts)
        rep = verify_sandwich(y, yt, tol=1e-6)
        assert rep.passed
        assert abs(rep.upper_min) <= 1e-9

    def test_comparison_instance_property(self):
        for seed in (1, 2, 3):
            cs, y0 = gen_comparison(InstanceSpec(n=3, seed=seed, target="comparison"))
            ts = np.linspace(cs.t0, cs.t_end, 51)
            y = integrate_riccati_direct(cs, y0, sample_times=ts)
            yt = integrate_lyapunov_comparison(cs, y0, sample_times=ts)
            assert verify_sandwich(y, yt, tol=1e-6).passed

    def test_grid_mismatch_rejected(self):
        cs = CAT["tanh"].cs
        y = integrate_riccati_direct(cs, CAT["tanh"].y0,
                                     sample_times=np.linspace(0, 3, 11))
        yt = integrate_lyapunov_comparison(cs, CAT["tanh"].y0,
                                           sample_times=np.linspace(0, 3, 13))
        with pytest.raises(ValueError):
            verify_sandwich(y, yt)


class TestResidual:
    def test_equilibrium_is_exact(self):
        # Y = 0 solves the equation with S = 0 exactly
        cs0 = CoefficientSet(n=2, t0=0.0, t_end=3.0,
                             P=cf.constant(np.eye(2)), Q=cf.constant(np.zeros((2, 2))),
                             R=cf.constant(np.zeros((2, 2))), S=cf.constant(np.zeros((2, 2))))
        traj = Trajectory(times=np.linspace(0, 3, 31),
                          values=np.zeros((31, 2, 2), dtype=complex),
                          status="completed", method="direct")
        assert residual_check(traj, cs0) <= 1e-12

    def test_tanh_fd_floor(self):
        # h = 1e-3 leaves only the O(h^2) differencing floor
        cs, traj = tanh_trajectory(t_end=1.0, num=1001)
        assert residual_check(traj, cs) <= 1e-5

    def test_corruption_detector(self):
        cs, traj = tanh_trajectory(t_end=1.0, num=1001)
        values = traj.values.copy()
        values[500] += 1e-2
        bad = Trajectory(times=traj.times, values=values, status="completed",
                         method="direct")
        assert residual_check(bad, cs) > 1.0

    def test_needs_three_samples(self):
        cs = CAT["tanh"].cs
        traj = Trajectory(times=np.array([0.0, 1.0]),
                          values=np.zeros((2, 1, 1), dtype=complex),
                          status="completed", method="direct")
        with pytest.raises(ValueError):
            residual_series(traj, cs)


class TestGuaranteeSoundness:
    def test_certified_instances_hold_bound(self):
        # reduced-size version of the acceptance batch
        from riccati_cert.instances import gen_satisfying

        for seed in range(5):
            for n in (1, 2, 3):
                cs, lam, mu, y0 = gen_satisfying(InstanceSpec(n=n, seed=seed))
                ts = np.linspace(cs.t0, cs.t_end, 51)
                traj = integrate_riccati_direct(cs, y0, sample_times=ts)
                assert traj.status == "completed"
                assert verify_hermitian_bound(traj, lam, tol=1e-6).passed

    def test_strict_initial_margin_stays_positive(self):
        # pushing Y0 up by delta I keeps the monitored gap strictly positive
        from riccati_cert.instances import gen_satisfying

        delta = 0.1
        for seed in range(5):
            cs, lam, mu, y0 = gen_satisfying(InstanceSpec(n=2, seed=seed))
            ts = np.linspace(cs.t0, cs.t_end, 51)
            traj = integrate_riccati_direct(cs, y0 + delta * np.eye(2), sample_times=ts)
            assert traj.status == "completed"
            series = eigen_monitor(traj, lam)
            assert np.min(series) > 0.0

    def test_certified_instances_keep_flow_regular(self):
        # no phi_singular status on certified instances
        from riccati_cert.instances import gen_satisfying
        from riccati_cert.integrate import integrate_linear_system

        for seed in range(5):
            cs, lam, mu, y0 = gen_satisfying(InstanceSpec(n=2, seed=seed))
            flow, traj = integrate_linear_system(cs, y0,
                                                 sample_times=np.linspace(cs.t0, cs.t_end, 51))
            assert traj.status == "completed"
            assert traj.singular_times.size == 0
