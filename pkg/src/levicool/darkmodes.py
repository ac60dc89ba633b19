"""Dark-mode diagnostics of the rotating-wave optomechanical network.

Within the rotating-wave approximation the linearized system is a single
cavity mode coupled to six mechanical modes, ``H = a^dag H_a a + a^dag C b +
h.c. + b^dag H_b b``.  Diagonalizing ``H_b`` turns the coupling row into an
arrowhead.  A normal mode is dark when its coupling vanishes, and a cluster
of ``l`` degenerate normal modes with nonzero couplings contains one bright
and ``l - 1`` dark combinations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .couplings import EffectiveModel, GSet
from .linearized import SteadyState

ZERO_COUPLING = "zero-coupling"
DEGENERACY = "degeneracy (l-1 rule)"

#: default relative tolerances.  The degeneracy window must exceed the
#: avoided-crossing gap opened by the direct x-y binding (about 2e-3 of the
#: x1 frequency at the reference geometry), otherwise crossings of the bare
#: x and y frequencies never register as degenerate.
TOL_COUPLING = 1e-8
TOL_DEGENERACY = 5e-3


@dataclass(frozen=True)
class ArrowheadSystem:
    """``H_a`` (cavity detuning), ``C_ab`` (coefficients of ``a^dag b_s``), ``H_b``."""

    H_a: float
    C_ab: np.ndarray
    H_b: np.ndarray
    omega_1x: float

    def matrix(self):
        """Full 7x7 Hermitian coefficient matrix."""
        M = np.zeros((7, 7), dtype=complex)
        M[0, 0] = self.H_a
        M[0, 1:] = self.C_ab
        M[1:, 0] = np.conj(self.C_ab)
        M[1:, 1:] = self.H_b
        return M


def mechanical_block(g: GSet) -> np.ndarray:
    """Rotating-wave mechanical Hamiltonian in the x1 x2 y1 y2 z1 z2 basis."""
    H = np.diag(g.omega).astype(float)
    Gx, Gy, Gz = g.G_bind
    (x1y1, x1y2), (x2y1, x2y2) = g.G_xy
    H[0, 1] = H[1, 0] = -Gx / 2
    H[2, 3] = H[3, 2] = -Gy / 2
    H[4, 5] = H[5, 4] = -Gz / 2
    H[0, 2] = H[2, 0] = x1y1 / 2
    H[0, 3] = H[3, 0] = -x1y2 / 2
    H[1, 2] = H[2, 1] = -x2y1 / 2
    H[1, 3] = H[3, 1] = x2y2 / 2
    return H


def build_arrowhead(em: EffectiveModel | None, g: GSet, ss: SteadyState | None = None) -> ArrowheadSystem:
    """Cavity-mechanics coupling row and mechanical block.

    The linearized coupling of mode ``s`` is ``G_s + G_a,s <a>^*`` for the
    x and y modes and ``G_s`` for the z modes.  Without a steady state the
    trilinear part is added without the mean amplitude, as in the literal
    definition of the composite couplings.  ``C_ab[s]`` is the coefficient
    of ``a^dag b_s``.
    """
    a = np.conj(ss.a_ss) if ss is not None else 1.0
    K = np.array(g.G, dtype=complex)
    K[:4] = K[:4] + g.G_a * a
    C = np.conj(K) / math.sqrt(2)
    C[4:] = -1j * C[4:]
    w1x = em.omega_1x if em is not None else g.omega_1x
    return ArrowheadSystem(H_a=g.Delta_tilde, C_ab=C, H_b=mechanical_block(g), omega_1x=w1x)


def diagonalize_mech(H_b) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonal ``U_b`` (rows are normal modes) and ascending frequencies.

    ``U_b @ H_b @ U_b.T`` is diagonal.  Each row is signed so that its
    largest-magnitude component is positive.
    """
    H_b = np.asarray(H_b, dtype=float)
    w, vecs = np.linalg.eigh((H_b + H_b.T) / 2)
    U = vecs.T.copy()
    for row in U:
        k = np.argmax(np.abs(row))
        if row[k] < 0:
            row *= -1
    return U, w


@dataclass(frozen=True)
class DarkModeReport:
    normal_freqs: np.ndarray
    U_b: np.ndarray
    C_AB: np.ndarray
    dark_count: int
    dark_indices: frozenset
    mechanisms: dict
    clusters: list = field(default_factory=list)
    dark_vectors: np.ndarray = None  # rows v with D = sum_s v_s b_s; dark means vdot(v, C_ab) ~ 0

    def scaled_freqs(self, omega_1x):
        return self.normal_freqs / omega_1x


def _clusters(w, tol_abs):
    groups, current = [], [0]
    for s in range(1, len(w)):
        if w[s] - w[s - 1] < tol_abs:
            current.append(s)
        else:
            groups.append(current)
            current = [s]
    groups.append(current)
    return groups


def detect_dark_modes(sys: ArrowheadSystem, tol_coupling: float = TOL_COUPLING,
                      tol_degeneracy: float = TOL_DEGENERACY) -> DarkModeReport:
    """Count dark normal modes.

    Parameters
    ----------
    sys : ArrowheadSystem
    tol_coupling : float
        A normal-mode coupling below ``tol_coupling * max |C_AB|`` is zero.
    tol_degeneracy : float
        Adjacent normal frequencies closer than ``tol_degeneracy * omega_1x``
        belong to one degenerate cluster.
    """
    for name, t in (("tol_coupling", tol_coupling), ("tol_degeneracy", tol_degeneracy)):
        if not 0 < t < 1:
            raise ValueError(f"{name} must lie in (0, 1)")
    U, w = diagonalize_mech(sys.H_b)
    C_AB = U @ sys.C_ab
    mag = np.abs(C_AB)
    cmax = mag.max()
    zero = mag < tol_coupling * cmax if cmax > 0 else np.ones(6, dtype=bool)

    mechanisms, dark_vecs, clusters = {}, [], []
    for group in _clusters(w, tol_degeneracy * sys.omega_1x):
        if len(group) > 1:
            clusters.append(group)
        live = [s for s in group if not zero[s]]
        for s in group:
            if zero[s]:
                mechanisms[s] = ZERO_COUPLING
                dark_vecs.append(U[s])
        if len(live) > 1:
            # one bright combination; the orthogonal complement is dark
            c = C_AB[live]
            bright = np.conj(c) / np.linalg.norm(c)
            _, _, vh = np.linalg.svd(bright[None, :])
            keep = max(live, key=lambda s: mag[s])
            for s in live:
                if s != keep:
                    mechanisms[s] = DEGENERACY
            for row in vh[1:]:
                dark_vecs.append(np.conj(row) @ U[live])
    dark_vectors = np.array(dark_vecs) if dark_vecs else np.zeros((0, 6))
    return DarkModeReport(
        normal_freqs=w,
        U_b=U,
        C_AB=C_AB,
        dark_count=len(mechanisms),
        dark_indices=frozenset(mechanisms),
        mechanisms=mechanisms,
        clusters=clusters,
        dark_vectors=dark_vectors,
    )


def dark_mode_report(g: GSet, ss: SteadyState | None = None, em: EffectiveModel | None = None,
                     tol_coupling: float = TOL_COUPLING, tol_degeneracy: float = TOL_DEGENERACY) -> DarkModeReport:
    return detect_dark_modes(build_arrowhead(em, g, ss), tol_coupling, tol_degeneracy)
