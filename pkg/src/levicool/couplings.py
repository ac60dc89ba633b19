"""Interaction coefficients of the two-particle coherent-scattering model.

Each ``*_couplings`` / ``*_binding`` function evaluates one family of
closed-form coefficients for the current geometry.  They are combined by
:func:`assemble_effective` into the coefficients of the seven-mode
Hamiltonian, and :func:`dimensionless_couplings` rescales those by the
zero-point motions into the rates that enter the Langevin equations.

Phases of the standing wave are evaluated at the focal points, so a particle
at cavity-frame coordinate ``X`` sees ``k X``.  Closed forms that only depend
on the separation use ``k D`` directly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, TrapDestabilizedError
from .params import HBAR, DerivedConstants, PhysicalParameters, trap_frequencies


@dataclass(frozen=True)
class GreensTensor:
    tensor: np.ndarray
    k0: float
    R0: np.ndarray


def greens_far_field(R0, k0, c: DerivedConstants | None = None, eta_f=None, D=None) -> GreensTensor:
    """Far-field dyadic propagator, already multiplied by the polarizability.

    ``alpha G(R0) = exp(i k0 R0) eta_f (D / R0**3) (R0**2 I - R0 R0)``.
    ``eta_f`` and ``D`` default to the cavity-wavelength far-field constant
    and the separation ``|R0|``.
    """
    R0 = np.asarray(R0, dtype=float)
    R = float(np.linalg.norm(R0))
    if R == 0:
        raise ParameterError("Green's function needs a nonzero separation")
    if k0 * R < 10:
        warnings.warn(f"k0*R0 = {k0 * R:.3g}: far-field approximation is poor", stacklevel=2)
    if D is None:
        D = R
    if eta_f is None:
        if c is None:
            raise ParameterError("need DerivedConstants or eta_f")
        eta_f = c.alpha_pol * k0**2 / (4 * math.pi * 8.8541878128e-12 * D)
    tensor = np.exp(1j * k0 * R) * eta_f * (D / R**3) * (R**2 * np.eye(3) - np.outer(R0, R0))
    return GreensTensor(tensor=tensor, k0=k0, R0=R0)


def standing_wave_phases(p: PhysicalParameters, c: DerivedConstants) -> np.ndarray:
    """``k (x_j0 cos(theta) + y_j0 sin(theta))`` for both particles."""
    ct, st = math.cos(p.theta), math.sin(p.theta)
    return np.array([c.k * (x * ct + y * st) for x, y in p.focal_coordinates])


@dataclass(frozen=True)
class CavitySelf:
    omega_sh: np.ndarray
    g_ax: np.ndarray
    g_ay: np.ndarray


def cavity_self_couplings(p: PhysicalParameters, c: DerivedConstants) -> CavitySelf:
    """Frequency shift and radiation-pressure couplings from ``E_cav**2``."""
    ph = standing_wave_phases(p, c)
    pref = c.alpha_pol * c.eps_cav**2 / HBAR
    return CavitySelf(
        omega_sh=-pref * np.cos(ph) ** 2,
        g_ax=pref * c.k * math.cos(p.theta) * np.sin(2 * ph),
        g_ay=pref * c.k * math.sin(p.theta) * np.sin(2 * ph),
    )


@dataclass(frozen=True)
class CoherentScattering:
    Omega: np.ndarray
    g_x: np.ndarray
    g_y: np.ndarray
    g_z: np.ndarray


def coherent_scattering_couplings(p: PhysicalParameters, c: DerivedConstants) -> CoherentScattering:
    """Drive and linear couplings from the tweezer-cavity cross term."""
    ph = standing_wave_phases(p, c)
    th = p.theta
    pref = c.alpha_pol * c.eps_cav * np.array(c.eps_tw) / HBAR
    return CoherentScattering(
        Omega=-pref / 2 * math.cos(th) * np.cos(ph),
        g_x=pref / 2 * c.k * math.cos(th) ** 2 * np.sin(ph),
        g_y=pref / 4 * c.k * math.sin(2 * th) * np.sin(ph),
        g_z=-pref / 2 * c.k_tw * math.cos(th) * np.cos(ph),
    )


@dataclass(frozen=True)
class TweezerBinding:
    R_alpha: float
    R_beta: float
    v: np.ndarray       # (v_x, v_y, v_z), N/m
    k_bind: np.ndarray  # (k_x, k_y, k_z), N/m
    k_xy: float


def tweezer_binding(p: PhysicalParameters, c: DerivedConstants) -> TweezerBinding:
    """Optical binding through the field scattered from the other tweezer."""
    th, D, kt = p.theta, p.D, c.k_tw
    C, S = math.cos(th), math.sin(th)
    T = c.alpha_pol * c.eta_f_tw * c.eps_tw1 * c.eps_tw2
    cw, sw = math.cos(kt * D), math.sin(kt * D)
    R_alpha = T * (cw * C**3 / D + kt * sw * C**3 - 2 * C * S**2 * cw / D) / HBAR
    # the k*D argument in the middle term is kept as printed
    R_beta = T * (
        cw * (2 * S**3 - 2 * S) / D + kt * math.sin(c.k * D) * C**2 * S + C**2 * S * cw / D
    ) / HBAR
    v = T * C**2 * cw * np.array(
        [1 / (p.A_x * p.W_t) ** 2, 1 / (p.A_y * p.W_t) ** 2, 1 / (2 * c.z_R**2)]
    )
    k_x = T * (
        kt**2 * cw * C**4
        + cw * (12 * C**2 * S**2 - 2 * S**2 - 3 * C**4 + C**2) / D**2
        + kt * sw * (4 * C**2 * S**2 - 3 * C**4 + C**2) / D
    )
    k_y = T * (
        cw * (12 * S**4 - 14 * S**2 - 3 * C**2 * S**2 + C**2 + 2) / D**2
        + kt * sw * (4 * S**4 - 4 * S**2 - 3 * S**2 * C**2 + C**2) / D
        + kt**2 * cw * S**2 * C**2
    )
    k_z = T * (kt**2 * cw * C**2 + kt * sw * C**2 / D + cw * C**2 / D**2 + 2 * S**2 * cw / D**2)
    k_xy = T * (
        cw * (-5 * C * S**3 + 3 * S * C - 3 * C**3 * S) / D**2
        + kt * sw * (4 * C * S**3 - 3 * C**3 * S - 2 * S * C) / D
        + kt**2 * cw * C * S
    )
    return TweezerBinding(R_alpha, R_beta, v, np.array([k_x, k_y, k_z]), k_xy)


@dataclass(frozen=True)
class CavityBinding:
    shift_energy: float  # J, multiplies a^dag a
    g_alpha: float
    g_beta: float


def cavity_binding(p: PhysicalParameters, c: DerivedConstants) -> CavityBinding:
    """Binding through the cavity light scattered by the other particle."""
    th, D, k = p.theta, p.D, c.k
    pref = 4 * c.alpha_pol * c.eps_cav**2 * c.eta_f_cav
    ck, sk, ch = math.cos(k * D), math.sin(k * D), math.cos(k * D / 2)
    bracket = (ck / D + k * sk) * ch**2 + k * ck * sk / 2
    return CavityBinding(
        shift_energy=-pref * ck * ch**2,
        g_alpha=pref * bracket * math.cos(th) / HBAR,
        g_beta=pref * bracket * math.sin(th) / HBAR,
    )


@dataclass(frozen=True)
class ScatteredDrive:
    """Drive and couplings mediated by one scattered field (real or complex)."""

    Omega: complex
    g_x: np.ndarray
    g_y: np.ndarray
    g_z: np.ndarray


def tw_gcav_couplings(p: PhysicalParameters, c: DerivedConstants) -> ScatteredDrive:
    """Tweezer light at one particle against cavity light scattered by the other."""
    th, D, k, kt = p.theta, p.D, c.k, c.k_tw
    C, S = math.cos(th), math.sin(th)
    e1, e2 = c.eps_tw
    Ssum = e1 + e2
    pref = c.alpha_pol * c.eps_cav * c.eta_f_cav / (2 * HBAR)
    ck, sk = math.cos(k * D), math.sin(k * D)
    ch, sh = math.cos(k * D / 2), math.sin(k * D / 2)

    def x_term(e_other):
        return (Ssum * ck * ch * math.cos(2 * th) / D + Ssum * k * sk * ch * C**2
                + e_other * ck * k * sh * C**2)

    def y_term(e_other):
        return (Ssum * ck * ch * math.sin(2 * th) / D + Ssum * k * sk * ch * C * S
                + e_other * ck * k * sh * C * S)

    return ScatteredDrive(
        Omega=-pref * Ssum * C * ck * ch,
        g_x=pref * np.array([x_term(e2), -x_term(e1)]),
        g_y=pref * np.array([y_term(e2), -y_term(e1)]),
        g_z=-pref * np.array([e1, e2]) * kt * ck * ch * C,
    )


def cav_gtw_couplings(p: PhysicalParameters, c: DerivedConstants) -> ScatteredDrive:
    """Cavity light at one particle against tweezer light scattered by the other."""
    th, D, k, kt = p.theta, p.D, c.k, c.k_tw
    C, S = math.cos(th), math.sin(th)
    e1, e2 = c.eps_tw
    Ssum = e1 + e2
    phase = np.exp(-1j * kt * D)
    pref = c.alpha_pol * c.eps_cav * c.eta_f_tw * phase / (2 * HBAR)
    ch, sh = math.cos(k * D / 2), math.sin(k * D / 2)

    def x_term(e_other):
        return (Ssum * math.cos(2 * th) * ch / D + 1j * kt * Ssum * C**2 * ch
                + e_other * k * C**2 * sh)

    def y_term(e_other):
        return (2 * Ssum * S * C * ch / D + 1j * kt * Ssum * S * C * ch
                + e_other * k * S * C * sh)

    # the z coupling carries the cavity far-field constant as printed
    pref_z = c.alpha_pol * c.eps_cav * c.eta_f_cav * phase / (2 * HBAR)
    return ScatteredDrive(
        Omega=-pref * Ssum * C * ch,
        g_x=pref * np.array([x_term(e2), -x_term(e1)]),
        g_y=pref * np.array([y_term(e2), -y_term(e1)]),
        g_z=-pref_z * np.array([e1, e2]) * kt * C * ch,
    )


@dataclass(frozen=True)
class EffectiveModel:
    """Coefficients of the seven-mode Hamiltonian.

    Arrays over the two particles are indexed ``[j]``; ``omega_bare`` and
    ``omega_tilde`` are ``[j, (x, y, z)]``.  ``g_tilde`` is ``[(x, y, z), j]``.
    """

    omega_bare: np.ndarray
    omega_tilde: np.ndarray
    cavity_shift: float  # detuning shift: Delta' = Delta + cavity_shift
    Omega_tilde: complex
    R_tilde_x: float
    R_tilde_y: float
    g_tilde: np.ndarray
    g_tilde_ax: np.ndarray
    g_tilde_ay: np.ndarray
    k_bind: np.ndarray
    k_xy: float
    v: np.ndarray
    cavity_self: CavitySelf
    coherent: CoherentScattering
    tw_binding: TweezerBinding
    cav_binding: CavityBinding
    tw_gcav: ScatteredDrive
    cav_gtw: ScatteredDrive
    m: float

    @property
    def omega_1x(self):
        return float(self.omega_tilde[0, 0])


def assemble_effective(
    p: PhysicalParameters,
    c: DerivedConstants,
    cavity_self=None,
    coherent=None,
    tw_bind=None,
    cav_bind=None,
    tw_gcav=None,
    cav_gtw=None,
) -> EffectiveModel:
    """Combine all coefficient families into the effective Hamiltonian.

    Any family not supplied is evaluated from ``p`` and ``c``.
    """
    cs = cavity_self or cavity_self_couplings(p, c)
    co = coherent or coherent_scattering_couplings(p, c)
    tb = tw_bind or tweezer_binding(p, c)
    cb = cav_bind or cavity_binding(p, c)
    ta = tw_gcav or tw_gcav_couplings(p, c)
    cg = cav_gtw or cav_gtw_couplings(p, c)

    omega_bare = trap_frequencies(p, c)
    radicand = omega_bare**2 + (2 * tb.v + tb.k_bind)[None, :] / c.m
    if np.any(radicand <= 0):
        raise TrapDestabilizedError("trap destabilized by binding terms")
    omega_tilde = np.sqrt(radicand)

    C = math.cos(p.theta)
    cavity_shift = float(np.sum(cs.omega_sh)) + C**2 * cb.shift_energy / HBAR
    g_tilde = np.array([
        co.g_x + ta.g_x + cg.g_x,
        co.g_y + ta.g_y + cg.g_y,
        co.g_z + ta.g_z + cg.g_z,
    ], dtype=complex)
    sign = np.array([1.0, -1.0])  # -(-1)**j for j = 1, 2
    return EffectiveModel(
        omega_bare=omega_bare,
        omega_tilde=omega_tilde,
        cavity_shift=cavity_shift,
        Omega_tilde=complex(np.sum(co.Omega) + ta.Omega + cg.Omega),
        R_tilde_x=tb.R_alpha + cb.g_alpha / 2,
        R_tilde_y=tb.R_beta + cb.g_beta / 2,
        g_tilde=g_tilde,
        g_tilde_ax=cs.g_ax + sign * cb.g_alpha,
        g_tilde_ay=cs.g_ay + sign * cb.g_beta,
        k_bind=tb.k_bind,
        k_xy=tb.k_xy,
        v=tb.v,
        cavity_self=cs,
        coherent=co,
        tw_binding=tb,
        cav_binding=cb,
        tw_gcav=ta,
        cav_gtw=cg,
        m=c.m,
    )


@dataclass(frozen=True)
class GSet:
    """Rates (rad/s) of the linearized model, in mode order x1 x2 y1 y2 z1 z2.

    ``G_a`` are the trilinear rates of x1 x2 y1 y2; ``R_disp`` the static
    forces on the same four modes (entering with signs -, +, -, +).
    ``G_xy[j, j2]`` couples ``x_j`` with ``y_j2``.
    """

    omega: np.ndarray
    zpf: np.ndarray
    G: np.ndarray
    G_a: np.ndarray
    G_bind: np.ndarray
    G_xy: np.ndarray
    R_disp: np.ndarray
    Omega_tilde: complex
    Delta_tilde: float
    kappa: float
    gamma: np.ndarray
    n_th: np.ndarray

    @property
    def omega_1x(self):
        return float(self.omega[0])

    def replace(self, **changes):
        from dataclasses import replace
        return replace(self, **changes)


def mode_order(per_particle: np.ndarray) -> np.ndarray:
    """``[j, (x, y, z)]`` array to the flat x1 x2 y1 y2 z1 z2 order."""
    return np.asarray(per_particle).T.reshape(6)


def dimensionless_couplings(em: EffectiveModel, p: PhysicalParameters, c: DerivedConstants | None = None) -> GSet:
    """Scale the Hamiltonian coefficients by zero-point motions.

    ``p`` must carry ``kappa``, ``gamma`` and ``Delta_tilde``.
    """
    if p.kappa is None or p.gamma is None or p.Delta_tilde is None:
        raise ParameterError("kappa, gamma and Delta_tilde must be set before linearizing")
    omega = mode_order(em.omega_tilde)
    zpf = np.sqrt(HBAR / (2 * em.m * omega))
    s2 = math.sqrt(2)
    G = s2 * em.g_tilde.reshape(6) * zpf
    x_zpf, y_zpf = zpf[0:2], zpf[2:4]
    G_a = s2 * np.concatenate([em.g_tilde_ax * x_zpf, em.g_tilde_ay * y_zpf])
    G_bind = 2 * em.k_bind * zpf[0::2] * zpf[1::2] / HBAR
    G_xy = 2 * em.k_xy * np.outer(x_zpf, y_zpf) / HBAR
    R_disp = s2 * np.concatenate([em.R_tilde_x * x_zpf, em.R_tilde_y * y_zpf])
    return GSet(
        omega=omega,
        zpf=zpf,
        G=G,
        G_a=G_a,
        G_bind=G_bind,
        G_xy=G_xy,
        R_disp=R_disp,
        Omega_tilde=em.Omega_tilde,
        Delta_tilde=float(p.Delta_tilde),
        kappa=float(p.kappa),
        gamma=np.asarray(p.gamma, dtype=float),
        n_th=np.asarray(p.n_th, dtype=float),
    )
