"""Stationary covariance matrix and final phonon numbers.

The Lyapunov equation ``A V + V A^T = -Q`` is solved by vectorization with a
dense LU factorization.  Uncooled modes have variances of order the bath
occupation while the damping rates are ~1e-9 of the frequencies, so a plain
double-precision solve leaves residuals far above the rounding level of
``Q``.  The factorization is therefore reused for a few steps of iterative
refinement in which the solution and its residual are accumulated in
extended precision.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import InstabilityError, NumericalError
from .linearized import LinearizedSystem, check_stability, linearize
from .model import build_couplings
from .params import MODE_LABELS, PhysicalParameters

#: phonon numbers in [-PHONON_FLOOR, 0) are reported as zero
PHONON_FLOOR = 1e-9


@dataclass(frozen=True)
class CovarianceMatrix:
    """Solution of the Lyapunov equation.

    ``V`` is the double-precision result; ``V_ext`` the extended-precision
    accumulator it was rounded from.  ``residual`` is
    ``max|A V_ext + V_ext A^T + Q|`` and ``relative_residual`` that divided
    by ``max|Q|``.
    """

    V: np.ndarray
    residual: float
    relative_residual: float
    refinement_steps: int
    V_ext: np.ndarray = field(repr=False, default=None)


def _pow2_scale(x: float) -> float:
    # exact rescaling: multiplying by a power of two does not round
    return 2.0 ** round(math.log2(x)) if x > 0 else 1.0


def lyapunov_residual(A, V, Q):
    """``A V + V A^T + Q`` evaluated in extended precision."""
    A = np.asarray(A, dtype=np.longdouble)
    V = np.asarray(V, dtype=np.longdouble)
    return A @ V + V @ A.T + np.asarray(Q, dtype=np.longdouble)


def solve_lyapunov(A, Q, check: bool = True, max_refine: int = 8, rtol: float = 1e-14) -> CovarianceMatrix:
    """Stationary covariance of ``du = A u dt + noise`` with diffusion ``Q``.

    Parameters
    ----------
    A, Q : (n, n) array_like
    check : bool
        Verify stability before solving.
    max_refine : int
        Maximum number of iterative-refinement steps.
    rtol : float
        Refinement stops once the residual falls below ``rtol * max|Q|``.

    Raises
    ------
    InstabilityError
        If ``A`` has an eigenvalue with non-negative real part.
    NumericalError
        If the vectorized system is singular.
    """
    A = np.asarray(A, dtype=float)
    Q = np.asarray(Q, dtype=float)
    n = A.shape[0]
    if check:
        stable, abscissa = check_stability(A)
        if not stable:
            raise InstabilityError("no stationary state: drift matrix is unstable", abscissa)
    s = _pow2_scale(float(np.max(np.abs(A))))
    As, Qs = A / s, Q / s
    eye = np.eye(n)
    K = np.kron(As, eye) + np.kron(eye, As)
    with warnings.catch_warnings():
        warnings.simplefilter("error", category=Warning)
        try:
            lu = lu_factor(K, check_finite=True)
        except Exception as exc:  # LinAlgWarning on exact singularity
            raise NumericalError(f"singular Lyapunov system: {exc}") from exc
    if np.any(np.diag(lu[0]) == 0):
        raise NumericalError("singular Lyapunov system")

    Qs_ext = Qs.astype(np.longdouble)
    As_ext = As.astype(np.longdouble)
    V = lu_solve(lu, -Qs.ravel()).reshape(n, n).astype(np.longdouble)
    qmax = float(np.max(np.abs(Qs))) or 1.0
    steps = 0
    for steps in range(1, max_refine + 1):
        R = -(As_ext @ V + V @ As_ext.T + Qs_ext)
        if float(np.max(np.abs(R))) < rtol * qmax:
            steps -= 1
            break
        V = V + lu_solve(lu, R.astype(float).ravel()).reshape(n, n)
    V = (V + V.T) / 2
    res = float(np.max(np.abs(lyapunov_residual(A, V, Q))))
    qnorm = float(np.max(np.abs(Q))) or 1.0
    return CovarianceMatrix(
        V=V.astype(float), residual=res, relative_residual=res / qnorm,
        refinement_steps=steps, V_ext=V,
    )


def phonon_numbers(V) -> np.ndarray:
    """Mean phonon numbers ``(<q^2> + <p^2> - 1)/2`` of the six modes.

    Accepts a bare array or a :class:`CovarianceMatrix`.  Values slightly
    below zero (down to ``-PHONON_FLOOR``) are set to zero with a warning.
    """
    if isinstance(V, CovarianceMatrix):
        V = V.V_ext if V.V_ext is not None else V.V
    V = np.asarray(V)
    idx = np.arange(6)
    n = (V[8 + idx, 8 + idx] + V[2 + idx, 2 + idx] - 1) / 2
    n = np.asarray(n, dtype=float)
    if np.any(n < -PHONON_FLOOR):
        raise NumericalError(f"negative phonon number {n.min():.3g}: inconsistent A or Q")
    if np.any(n < 0):
        warnings.warn("phonon numbers slightly below zero clamped to 0", stacklevel=2)
        n = np.maximum(n, 0.0)
    return n


@dataclass(frozen=True)
class CoolingResult:
    n_bar: np.ndarray
    stable: bool
    spectral_abscissa: float
    V: CovarianceMatrix
    system: LinearizedSystem
    metadata: dict

    def as_dict(self):
        return dict(zip(MODE_LABELS, self.n_bar.tolist()))


def cool(p: PhysicalParameters, as_printed: bool = False) -> CoolingResult:
    """Full pipeline from physical parameters to final phonon numbers.

    Raises
    ------
    InstabilityError
        If the linearized dynamics has no stationary state.
    """
    cp = build_couplings(p)
    sysm = linearize(cp.g, as_printed=as_printed)
    if not sysm.stable:
        raise InstabilityError("no stationary state: drift matrix is unstable", sysm.spectral_abscissa)
    cov = solve_lyapunov(sysm.A, sysm.Q, check=False)
    n = phonon_numbers(cov)
    w = cp.model.omega_1x
    ss = sysm.steady_state
    meta = {
        "omega_1x": w,
        "omega_tilde": cp.model.omega_tilde.tolist(),
        "Delta_tilde": cp.g.Delta_tilde,
        "Delta_prime": ss.Delta_prime,
        "Delta_laser": ss.Delta_prime - cp.model.cavity_shift,
        "kappa": cp.g.kappa,
        "G": [complex(x) for x in cp.g.G],
        "G_a": cp.g.G_a.tolist(),
        "G_bind": cp.g.G_bind.tolist(),
        "G_xy": cp.g.G_xy.tolist(),
        "a_ss": ss.a_ss,
        "q_ss": ss.mu_ss.tolist(),
        "steady_state_residual": ss.relative_residual,
        "lyapunov_residual": cov.relative_residual,
        "calibrated_waists": p.calibrated,
    }
    return CoolingResult(
        n_bar=n, stable=True, spectral_abscissa=sysm.spectral_abscissa, V=cov,
        system=sysm, metadata=meta,
    )
