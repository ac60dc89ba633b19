"""Semiclassical steady state and the linearized fluctuation dynamics.

State ordering of the 14-dimensional fluctuation vector::

    0 X_a, 1 Y_a, 2..7 p (x1 x2 y1 y2 z1 z2), 8..13 q (same order)

Displacements are in units of ``sqrt(2)`` zero-point lengths, the natural
coordinates of the Langevin equations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .couplings import GSet
from .errors import ConvergenceError, NumericalError, ParameterError

STATE_LABELS = (
    "X_a", "Y_a",
    "p_x1", "p_x2", "p_y1", "p_y2", "p_z1", "p_z2",
    "q_x1", "q_x2", "q_y1", "q_y2", "q_z1", "q_z2",
)

#: sign with which each static force enters the momentum equations
_DRIVE_SIGN = np.array([-1.0, 1.0, -1.0, 1.0])


def mechanical_coupling_matrix(g: GSet) -> np.ndarray:
    """6x6 position block of the momentum equations, ``dp/dt = K q + ...``."""
    K = -np.diag(g.omega)
    Gx, Gy, Gz = g.G_bind
    (x1y1, x1y2), (x2y1, x2y2) = g.G_xy
    K[0, 1] = K[1, 0] = Gx
    K[2, 3] = K[3, 2] = Gy
    K[4, 5] = K[5, 4] = Gz
    K[0, 2] = K[2, 0] = -x1y1
    K[0, 3] = K[3, 0] = x1y2
    K[1, 2] = K[2, 1] = x2y1
    K[1, 3] = K[3, 1] = -x2y2
    return K


@dataclass(frozen=True)
class SteadyState:
    """Stationary mean values of the cavity amplitude and displacements.

    ``residual_norm`` is the largest absolute residual (rad/s) of the eight
    real stationarity equations and ``relative_residual`` the same divided
    by the largest term appearing in them.  ``Delta_prime`` is the detuning
    that, shifted by the trilinear terms, gives the input ``Delta_tilde``.
    """

    a_ss: complex
    mu_ss: np.ndarray
    residual_norm: float
    relative_residual: float
    iterations: int
    Delta_prime: float

    @property
    def p_ss(self):
        return np.zeros(6)


def _static_force(g: GSet) -> np.ndarray:
    r = np.zeros(6)
    r[:4] = _DRIVE_SIGN * g.R_disp
    return r


def stationarity_residual(g: GSet, a: complex, q: np.ndarray) -> np.ndarray:
    """Residuals of the eight real stationarity equations.

    Ordering: Re and Im of the cavity equation, then the six mechanical
    equations.
    """
    q = np.asarray(q, dtype=float)
    cav = ((-1j * g.Delta_tilde - g.kappa) * a
           - 1j * np.dot(np.conj(g.G[:4]), q[:4])
           - np.dot(np.conj(g.G[4:]), q[4:])
           - 1j * np.conj(g.Omega_tilde))
    mech = mechanical_coupling_matrix(g) @ q + _static_force(g)
    mech[:4] -= g.G_a * abs(a) ** 2 + 2 * np.real(g.G[:4] * a)
    mech[4:] += 2 * np.imag(g.G[4:] * a)
    return np.concatenate([[cav.real, cav.imag], mech])


def _residual_scale(g: GSet, a, q):
    terms = [
        abs(g.Omega_tilde),
        (abs(g.Delta_tilde) + g.kappa) * abs(a),
        np.max(np.abs(g.R_disp)),
        np.max(g.omega * np.abs(q)),
        np.max(np.abs(g.G)) * max(abs(a), np.max(np.abs(q))),
        np.max(np.abs(g.G_a)) * abs(a) ** 2,
    ]
    scale = max(terms)
    return scale if scale > 0 else 1.0


def _jacobian(g: GSet, a: complex, K: np.ndarray) -> np.ndarray:
    J = np.zeros((8, 8))
    c = -1j * g.Delta_tilde - g.kappa
    J[0, 0], J[1, 0] = c.real, c.imag
    J[0, 1], J[1, 1] = (1j * c).real, (1j * c).imag
    dq = np.concatenate([-1j * np.conj(g.G[:4]), -np.conj(g.G[4:])])
    J[0, 2:], J[1, 2:] = dq.real, dq.imag
    G = g.G
    J[2:6, 0] = -2 * g.G_a * a.real - 2 * G[:4].real
    J[2:6, 1] = -2 * g.G_a * a.imag + 2 * G[:4].imag
    J[6:8, 0] = 2 * G[4:].imag
    J[6:8, 1] = 2 * G[4:].real
    J[2:, 2:] = K
    return J


def initial_guess(g: GSet):
    """Decoupled-cavity amplitude and the displacements it induces."""
    a0 = -1j * np.conj(g.Omega_tilde) / (1j * g.Delta_tilde + g.kappa)
    K = mechanical_coupling_matrix(g)
    force = _static_force(g)
    force[:4] -= g.G_a * abs(a0) ** 2 + 2 * np.real(g.G[:4] * a0)
    force[4:] += 2 * np.imag(g.G[4:] * a0)
    q0 = np.linalg.solve(K, -force)
    return complex(a0), q0


def solve_steady_state(g: GSet, tol: float = 1e-12, max_iter: int = 50) -> SteadyState:
    """Newton iteration on the eight real stationarity equations.

    Parameters
    ----------
    g : GSet
    tol : float
        Target for the relative residual.
    max_iter : int

    Raises
    ------
    ConvergenceError
        When the relative residual does not drop below ``max(tol, 1e-10)``.
    """
    if not g.kappa > 0:
        raise ParameterError("kappa must be positive")
    K = mechanical_coupling_matrix(g)
    a, q = initial_guess(g)
    x = np.concatenate([[a.real, a.imag], q])
    best = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        a = complex(x[0], x[1])
        F = stationarity_residual(g, a, x[2:])
        rel = np.max(np.abs(F)) / _residual_scale(g, a, x[2:])
        if rel < tol:
            break
        # stagnation at the rounding floor: no further progress possible
        if rel >= best and rel < 1e-10:
            break
        best = min(best, rel)
        try:
            step = np.linalg.solve(_jacobian(g, a, K), -F)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"singular steady-state Jacobian: {exc}") from exc
        x = x + step
    a = complex(x[0], x[1])
    q = x[2:].copy()
    F = stationarity_residual(g, a, q)
    res = float(np.max(np.abs(F)))
    rel = res / _residual_scale(g, a, q)
    if not rel < max(tol, 1e-10):
        raise ConvergenceError(f"steady state not converged after {it} iterations", residual=rel)
    if np.any(np.abs(q) > 1e6):
        warnings.warn("very large steady-state displacement; linearization questionable", stacklevel=2)
    q.setflags(write=False)
    return SteadyState(
        a_ss=a,
        mu_ss=q,
        residual_norm=res,
        relative_residual=float(rel),
        iterations=it,
        Delta_prime=float(g.Delta_tilde - np.dot(g.G_a, q[:4])),
    )


@dataclass(frozen=True)
class LinearizedSystem:
    A: np.ndarray
    Q: np.ndarray
    stable: bool
    spectral_abscissa: float
    steady_state: SteadyState
    as_printed: bool = False
    ordering: tuple = STATE_LABELS


def build_drift_matrix(g: GSet, ss: SteadyState, as_printed: bool = False) -> np.ndarray:
    """14x14 drift matrix of the fluctuations.

    By default the cavity quadratures are both damped at ``-kappa``, the
    y-mode coefficients carry the mean cavity amplitude in the same way as
    the x-mode ones, and both z columns of the ``X_a`` row carry ``-2 F_j``.
    ``as_printed=True`` instead reproduces the literal published matrix:
    ``+kappa`` in the ``Y_a`` diagonal, ``C_j = Im(G'_ay - G'_y)``,
    ``D_j = Re(G'_ay + G'_y)`` and z columns ``(+2 F_1, -2 F_2)``.
    """
    a = ss.a_ss
    Gp = g.G / math.sqrt(2)
    Gap = g.G_a / math.sqrt(2)
    A = np.zeros((14, 14))
    A[0, 0] = -g.kappa
    A[0, 1] = g.Delta_tilde
    A[1, 0] = -g.Delta_tilde
    A[1, 1] = g.kappa if as_printed else -g.kappa

    amp = np.full(4, a, dtype=complex)
    if as_printed:
        amp[2:] = 1.0
    Im_part = np.imag(Gap * amp - Gp[:4])  # A_j, C_j
    Re_part = np.real(Gap * amp + Gp[:4])  # B_j, D_j
    E, F = Gp[4:].imag, Gp[4:].real
    for m in range(4):
        A[2 + m, 0] = -2 * Re_part[m]
        A[2 + m, 1] = -2 * Im_part[m]
        A[0, 8 + m] = 2 * Im_part[m]
        A[1, 8 + m] = -2 * Re_part[m]
    zsign = np.array([1.0, -1.0]) if as_printed else np.array([-1.0, -1.0])
    for n in range(2):
        m = 4 + n
        A[2 + m, 0] = 2 * E[n]
        A[2 + m, 1] = 2 * F[n]
        A[0, 8 + m] = zsign[n] * 2 * F[n]
        A[1, 8 + m] = 2 * E[n]
    A[2:8, 2:8] = -np.diag(g.gamma)
    A[2:8, 8:14] = mechanical_coupling_matrix(g)
    A[8:14, 2:8] = np.diag(g.omega)
    return A


def build_noise_matrix(g: GSet) -> np.ndarray:
    """Diagonal symmetrized noise correlation matrix."""
    d = np.concatenate([[g.kappa, g.kappa], g.gamma * (2 * g.n_th + 1), np.zeros(6)])
    return np.diag(d)


def check_stability(A) -> tuple[bool, float]:
    """Stability verdict and spectral abscissa (largest real eigenvalue part)."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError("drift matrix must be square")
    if not np.all(np.isfinite(A)):
        raise NumericalError("drift matrix contains non-finite entries")
    try:
        eig = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue solver failed: {exc}") from exc
    abscissa = float(np.max(eig.real))
    return abscissa < 0, abscissa


def linearize(g: GSet, as_printed: bool = False, ss: SteadyState | None = None) -> LinearizedSystem:
    """Steady state, drift and noise matrices and stability in one call."""
    ss = ss if ss is not None else solve_steady_state(g)
    A = build_drift_matrix(g, ss, as_printed=as_printed)
    stable, abscissa = check_stability(A)
    return LinearizedSystem(
        A=A, Q=build_noise_matrix(g), stable=stable, spectral_abscissa=abscissa,
        steady_state=ss, as_printed=as_printed,
    )
