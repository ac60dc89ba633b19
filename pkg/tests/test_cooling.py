import math
import warnings

import numpy as np
import pytest

from draws import random_points
from oracles import covariance_by_integration

from levicool import (
    InstabilityError, NumericalError, build_couplings, cool, linearize, reference_parameters,
    phonon_numbers, solve_lyapunov,
)
from levicool.cooling import lyapunov_residual

# theta = pi/4 work point, from the time-integration oracle
N_PI4 = [0.2794299738129695, 0.3471573796791554, 0.2285141231508181,
         0.3643767497550545, 0.6107962053648377, 0.4693028561409338]


def test_identity_drift_unit_noise():
    cov = solve_lyapunov(-np.eye(4), np.eye(4))
    np.testing.assert_allclose(cov.V, np.eye(4) / 2, atol=1e-15)


def test_diagonal_system():
    a = np.array([1.0, 2.0, 5.0])
    q = np.array([3.0, 1.0, 0.5])
    cov = solve_lyapunov(-np.diag(a), np.diag(q))
    np.testing.assert_allclose(cov.V, np.diag(q / (2 * a)), rtol=1e-14)


def test_damped_oscillator_equipartition():
    # dq = w p, dp = -w q - g p + noise with D = g (2n+1): <q^2> = <p^2> = n + 1/2
    w, gam, n = 3.0, 0.1, 4.0
    A = np.array([[-gam, -w], [w, 0.0]])
    Q = np.diag([gam * (2 * n + 1), 0.0])
    V = solve_lyapunov(A, Q).V
    np.testing.assert_allclose(np.diag(V), n + 0.5, rtol=1e-12)


def test_unstable_drift_raises():
    with pytest.raises(InstabilityError):
        solve_lyapunov(np.diag([-1.0, 0.1]), np.eye(2))


def test_reference_point_against_frozen_oracle():
    res = cool(reference_parameters(theta=math.pi / 4))
    np.testing.assert_allclose(res.n_bar, N_PI4, rtol=1e-6)
    assert res.V.relative_residual < 1e-10


def test_lyapunov_against_time_integration():
    for _, cp, sysm in random_points(20, seed=3):
        cov = solve_lyapunov(sysm.A, sysm.Q)
        W = covariance_by_integration(sysm.A, sysm.Q)
        assert np.max(np.abs(cov.V - W)) <= 1e-6 * np.max(np.abs(W))
        assert cov.relative_residual < 1e-10


def test_residual_is_extended_precision():
    sysm = linearize(build_couplings(reference_parameters()).g)
    cov = solve_lyapunov(sysm.A, sysm.Q)
    R = lyapunov_residual(sysm.A, cov.V_ext, sysm.Q)
    assert float(np.max(np.abs(R))) == pytest.approx(cov.residual, rel=1e-6, abs=1e-300)


def test_decoupled_limit_returns_bath_occupation():
    cp = build_couplings(reference_parameters(n_th=[1e3, 2e3, 3e3, 4e3, 5e3, 6e3]))
    z4 = np.zeros(4)
    g = cp.g.replace(G=np.zeros(6, complex), G_a=z4, G_bind=np.zeros(3), G_xy=np.zeros((2, 2)),
                     R_disp=z4, Omega_tilde=0j)
    sysm = linearize(g)
    n = phonon_numbers(solve_lyapunov(sysm.A, sysm.Q))
    np.testing.assert_allclose(n, g.n_th, rtol=1e-9)


def test_zero_temperature_decoupled_is_ground_state():
    cp = build_couplings(reference_parameters(n_th=0.0))
    z4 = np.zeros(4)
    g = cp.g.replace(G=np.zeros(6, complex), G_a=z4, G_bind=np.zeros(3), G_xy=np.zeros((2, 2)),
                     R_disp=z4, Omega_tilde=0j)
    sysm = linearize(g)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        n = phonon_numbers(solve_lyapunov(sysm.A, sysm.Q))
    assert np.all(np.abs(n) < 1e-9)


def test_phonon_clamp_and_error():
    V = np.eye(14) / 2
    V[8, 8] -= 1e-12
    with pytest.warns(UserWarning):
        n = phonon_numbers(V)
    assert n[0] == 0
    V[8, 8] -= 1e-3
    with pytest.raises(NumericalError):
        phonon_numbers(V)


def test_cool_raises_when_unstable():
    # anti-damping at negative detuning heats the modes without bound
    with pytest.raises(InstabilityError):
        cool(reference_parameters(detuning=-0.7))


def test_result_metadata():
    res = cool(reference_parameters(theta=math.pi / 4))
    assert set(res.as_dict()) == {"x1", "x2", "y1", "y2", "z1", "z2"}
    m = res.metadata
    assert m["Delta_tilde"] == pytest.approx(0.7 * m["omega_1x"], rel=1e-14)
    assert m["steady_state_residual"] < 1e-10
