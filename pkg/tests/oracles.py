"""Independent reference computations used by the tests.

Nothing here calls into the package's solvers: each oracle re-derives its
quantity by a different route.

* ``keyed_*``: coupling coefficients re-typed from the closed forms, scalar
  by scalar, in a different arrangement from the package.
* ``fixed_point_steady_state``: Picard iteration on the nonlinearity instead of Newton.
* ``covariance_by_integration``: exact one-step propagation of
  ``dV/dt = A V + V A^T + Q`` (Van Loan block exponential) followed by
  repeated time doubling until the transient has died out.
* ``hamiltonian_drift``: the conservative part of the drift matrix from finite
  differences of the full classical Hamiltonian at the steady state.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import expm

HBAR = 6.62607015e-34 / (2 * math.pi)


# ---------------------------------------------------------------- couplings

def keyed_couplings(p, c):
    """Every closed-form coefficient, keyed in independently.  Returns a dict."""
    al, ec, k, kt, D, th = c.alpha_pol, c.eps_cav, c.k, c.k_tw, p.D, p.theta
    e1, e2 = c.eps_tw1, c.eps_tw2
    nf, nft = c.eta_f_cav, c.eta_f_tw
    cs, sn = math.cos(th), math.sin(th)
    (x1, y1), (x2, y2) = p.focal_coordinates
    out = {}

    ph = [k * x1 * cs + k * y1 * sn, k * x2 * cs + k * y2 * sn]
    out["omega_sh"] = [-(al / HBAR) * ec**2 * math.cos(f) ** 2 for f in ph]
    out["g_ax"] = [(al / HBAR) * ec**2 * k * cs * math.sin(2 * f) for f in ph]
    out["g_ay"] = [(al / HBAR) * ec**2 * k * sn * math.sin(2 * f) for f in ph]

    eps = [e1, e2]
    out["Omega_j"] = [-al / (2 * HBAR) * ec * eps[j] * cs * math.cos(ph[j]) for j in range(2)]
    out["g_x"] = [al / (2 * HBAR) * ec * eps[j] * k * cs**2 * math.sin(ph[j]) for j in range(2)]
    out["g_y"] = [al / (4 * HBAR) * ec * eps[j] * k * math.sin(2 * th) * math.sin(ph[j]) for j in range(2)]
    out["g_z"] = [-al / (2 * HBAR) * ec * eps[j] * kt * cs * math.cos(ph[j]) for j in range(2)]

    P = al * nft * e1 * e2
    C1, S1 = math.cos(kt * D), math.sin(kt * D)
    out["R_alpha"] = P * (C1 * cs**3 / D + kt * S1 * cs**3 - 2 * cs * sn**2 * C1 / D) / HBAR
    out["R_beta"] = P * (C1 * (2 * sn**3 - 2 * sn) / D + kt * math.sin(k * D) * cs**2 * sn
                         + cs**2 * sn * C1 / D) / HBAR
    out["v_x"] = P * cs**2 * C1 / (p.A_x * p.W_t) ** 2
    out["v_y"] = P * cs**2 * C1 / (p.A_y * p.W_t) ** 2
    out["v_z"] = P * cs**2 * C1 / (2 * c.z_R**2)
    out["k_x"] = P * (kt**2 * C1 * cs**4
                      + C1 * (12 * cs**2 * sn**2 - 2 * sn**2 - 3 * cs**4 + cs**2) / D**2
                      + kt * S1 * (4 * cs**2 * sn**2 - 3 * cs**4 + cs**2) / D)
    out["k_y"] = P * (C1 * (12 * sn**4 - 14 * sn**2 - 3 * cs**2 * sn**2 + cs**2 + 2) / D**2
                      + kt * S1 * (4 * sn**4 - 4 * sn**2 - 3 * sn**2 * cs**2 + cs**2) / D
                      + kt**2 * C1 * sn**2 * cs**2)
    out["k_z"] = P * (kt**2 * C1 * cs**2 + kt * S1 * cs**2 / D + C1 * cs**2 / D**2
                      + 2 * sn**2 * C1 / D**2)
    out["k_xy"] = P * (C1 * (-5 * cs * sn**3 + 3 * sn * cs - 3 * cs**3 * sn) / D**2
                       + kt * S1 * (4 * cs * sn**3 - 3 * cs**3 * sn - 2 * sn * cs) / D
                       + kt**2 * C1 * cs * sn)

    ck, sk, ch, sh = math.cos(k * D), math.sin(k * D), math.cos(k * D / 2), math.sin(k * D / 2)
    pre = 4 * al * ec**2 * nf
    out["cav_shift_energy"] = -pre * ck * ch**2
    out["g_alpha"] = pre * ((ck / D + k * sk) * cs * ch**2 + k * cs * ck * sk / 2) / HBAR
    out["g_beta"] = pre * ((ck / D + k * sk) * ch**2 + k * ck * sk / 2) * sn / HBAR

    S = e1 + e2
    q = al * ec * nf / (2 * HBAR)
    out["Omega_alpha"] = -al * ec * nf * S * cs * ck * ch / (2 * HBAR)
    out["g_alpha_x"] = [
        q * (S * ck * ch * math.cos(2 * th) / D + S * k * sk * ch * cs**2 + e2 * ck * k * sh * cs**2),
        -q * (S * ck * ch * math.cos(2 * th) / D + S * k * sk * ch * cs**2 + e1 * ck * k * sh * cs**2),
    ]
    out["g_alpha_y"] = [
        q * (S * ck * ch * math.sin(2 * th) / D + S * k * sk * ch * cs * sn + e2 * ck * k * sh * cs * sn),
        -q * (S * ck * ch * math.sin(2 * th) / D + S * k * sk * ch * cs * sn + e1 * ck * k * sh * cs * sn),
    ]
    out["g_alpha_z"] = [-al * ec * nf * e * kt * ck * ch * cs / (2 * HBAR) for e in eps]

    ph_b = complex(math.cos(kt * D), -math.sin(kt * D))
    r = al * ec * nft * ph_b / (2 * HBAR)
    out["Omega_beta"] = -al * ec * nft * S * cs * ch * ph_b / (2 * HBAR)
    out["g_beta_x"] = [
        r * (S * math.cos(2 * th) * ch / D + 1j * kt * S * cs**2 * ch + e2 * k * cs**2 * sh),
        -r * (S * math.cos(2 * th) * ch / D + 1j * kt * S * cs**2 * ch + e1 * k * cs**2 * sh),
    ]
    out["g_beta_y"] = [
        r * (2 * S * sn * cs * ch / D + 1j * kt * S * sn * cs * ch + e2 * k * sn * cs * sh),
        -r * (2 * S * sn * cs * ch / D + 1j * kt * S * sn * cs * ch + e1 * k * sn * cs * sh),
    ]
    out["g_beta_z"] = [-al * ec * nf * e * kt * cs * ch * ph_b / (2 * HBAR) for e in eps]
    return out


# ------------------------------------------------------------- steady state

def fixed_point_steady_state(g, tol=1e-15, max_iter=5000):
    """Picard iteration on the trilinear force only.

    The cavity equation is linear in ``(a, q)``, so ``a = a0 + c . q`` is
    eliminated by hand.  What remains is the linear mechanical problem with
    the radiation-pressure force ``G_a |a|^2`` lagged by one iteration.
    """
    K = _mech_matrix(g)
    den = 1j * g.Delta_tilde + g.kappa
    a0 = -1j * np.conj(g.Omega_tilde) / den
    c = np.concatenate([-1j * np.conj(g.G[:4]), -np.conj(g.G[4:])]) / den
    sign = np.array([-1.0, 1.0, -1.0, 1.0])
    # mechanical force on mode m, linear part: L @ q + f_lin
    L = np.zeros((6, 6))
    f_lin = np.zeros(6)
    for m in range(4):
        L[m] = -2 * (g.G[m] * c).real
        f_lin[m] = sign[m] * g.R_disp[m] - 2 * (g.G[m] * a0).real
    for m in (4, 5):
        L[m] = 2 * (g.G[m] * c).imag
        f_lin[m] = 2 * (g.G[m] * a0).imag
    M = K + L
    q = np.zeros(6)
    for _ in range(max_iter):
        a = a0 + c @ q
        f = f_lin.copy()
        f[:4] -= g.G_a * abs(a) ** 2
        q_new = np.linalg.solve(M, -f)
        change = np.max(np.abs(q_new - q)) / max(np.max(np.abs(q_new)), 1.0)
        q = q_new
        if change < tol:
            break
    else:
        raise RuntimeError("fixed-point iteration did not converge")
    return complex(a0 + c @ q), q


def _mech_matrix(g):
    Gx, Gy, Gz = g.G_bind
    G = g.G_xy
    K = np.array([
        [0, Gx, -G[0, 0], G[0, 1], 0, 0],
        [Gx, 0, G[1, 0], -G[1, 1], 0, 0],
        [-G[0, 0], G[1, 0], 0, Gy, 0, 0],
        [G[0, 1], -G[1, 1], Gy, 0, 0, 0],
        [0, 0, 0, 0, 0, Gz],
        [0, 0, 0, 0, Gz, 0],
    ], dtype=float)
    return K - np.diag(g.omega)


# --------------------------------------------------------------- covariance

def covariance_by_integration(A, Q, h=None, max_doublings=200):
    """Stationary covariance by propagating ``V(t)`` from ``V(0) = 0``.

    One step of length ``h`` is done exactly with the Van Loan block
    exponential; afterwards ``(M, W) -> (M^2, W + M W M^T)`` doubles the
    elapsed time until ``M`` has decayed.  Doubling is accumulated in
    extended precision.
    """
    A = np.asarray(A, float)
    Q = np.asarray(Q, float)
    n = A.shape[0]
    if h is None:
        h = 0.5 / np.max(np.abs(A))
    big = np.zeros((2 * n, 2 * n))
    big[:n, :n] = -A
    big[:n, n:] = Q
    big[n:, n:] = A.T
    F = expm(big * h)
    M = F[n:, n:].T
    W = M @ F[:n, n:]
    M = M.astype(np.longdouble)
    W = W.astype(np.longdouble)
    for _ in range(max_doublings):
        W = W + M @ W @ M.T
        M = M @ M
        if np.max(np.abs(M)) < 1e-30:
            break
    else:
        raise RuntimeError("transient did not decay")
    W = (W + W.T) / 2
    return np.asarray(W, dtype=float)


# ------------------------------------------------------------- Hamiltonian

def classical_hamiltonian(g, Delta_prime, u):
    """Energy (rad/s) of the full nonlinear model at phase-space point ``u``.

    ``u = (X, Y, p_1..p_6, q_1..q_6)`` with ``a = (X + iY)/sqrt(2)``.
    """
    X, Y = u[0], u[1]
    p, q = u[2:8], u[8:14]
    a = (X + 1j * Y) / math.sqrt(2)
    n = abs(a) ** 2
    H = Delta_prime * n
    H += 0.5 * np.sum(g.omega * (p**2 + q**2))
    H += g.R_disp[0] * q[0] - g.R_disp[1] * q[1] + g.R_disp[2] * q[2] - g.R_disp[3] * q[3]
    H += 2 * (g.Omega_tilde * a).real
    for m in range(4):
        H += 2 * (g.G[m] * a).real * q[m] + g.G_a[m] * n * q[m]
    for m in (4, 5):
        H += (1j * (g.G[m] * a - np.conj(g.G[m]) * np.conj(a))).real * q[m]
    Gx, Gy, Gz = g.G_bind
    H += -Gx * q[0] * q[1] - Gy * q[2] * q[3] - Gz * q[4] * q[5]
    H += g.G_xy[0, 0] * q[0] * q[2] + g.G_xy[1, 1] * q[1] * q[3]
    H += -g.G_xy[0, 1] * q[0] * q[3] - g.G_xy[1, 0] * q[1] * q[2]
    return H


def hamiltonian_drift(g, a_ss, q_ss, Delta_prime, step=None):
    """``J @ Hessian(H)`` at the steady state by central differences.

    The Hamiltonian is a cubic polynomial, so second differences are exact
    up to rounding for any step; a large step keeps rounding small.
    """
    u0 = np.zeros(14)
    u0[0] = math.sqrt(2) * a_ss.real
    u0[1] = math.sqrt(2) * a_ss.imag
    u0[8:] = q_ss
    scale = max(1.0, np.max(np.abs(u0)))
    h = step if step is not None else 1e-2 * scale
    f = lambda u: classical_hamiltonian(g, Delta_prime, u)  # noqa: E731
    Hs = np.zeros((14, 14))
    E = np.eye(14) * h
    f0 = f(u0)
    for i in range(14):
        Hs[i, i] = (f(u0 + E[i]) - 2 * f0 + f(u0 - E[i])) / h**2
        for j in range(i + 1, 14):
            Hs[i, j] = Hs[j, i] = (f(u0 + E[i] + E[j]) - f(u0 + E[i] - E[j])
                                   - f(u0 - E[i] + E[j]) + f(u0 - E[i] - E[j])) / (4 * h**2)
    J = np.zeros((14, 14))
    J[0, 1], J[1, 0] = 1.0, -1.0
    for m in range(6):
        J[8 + m, 2 + m] = 1.0
        J[2 + m, 8 + m] = -1.0
    return J @ Hs
