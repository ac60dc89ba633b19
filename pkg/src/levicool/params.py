"""Raw physical inputs and the constants derived from them.

SI units throughout. Frequencies are angular (rad/s) unless a name says
otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy import constants

from .errors import CalibrationError, ParameterError

EPS0 = constants.epsilon_0
HBAR = constants.hbar
C_LIGHT = constants.c

#: mechanical mode order used by every array in the package
MODE_LABELS = ("x1", "x2", "y1", "y2", "z1", "z2")

#: trap frequencies (Hz) quoted for particle 1 at the calibration power
TARGET_FREQS_HZ = (406e3, 439e3, 154e3)
CALIBRATION_POWER = 0.8
#: geometry in which the default calibration holds: (P_tw2, theta, D / lambda)
REFERENCE_GEOMETRY = (0.6, math.pi / 8, 2.65)


def _six(value, name):
    arr = np.broadcast_to(np.asarray(value, dtype=float), (6,)).copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PhysicalParameters:
    """Experimental inputs for two tweezer-trapped particles in one cavity.

    ``W_t``, ``A_x`` and ``A_y`` default to ``None``, in which case they are
    calibrated with :func:`calibrate_effective`, so that particle 1 at
    :data:`CALIBRATION_POWER` has the effective (binding-shifted) frequencies
    :data:`TARGET_FREQS_HZ` in the reference geometry.  ``kappa``, ``gamma`` and
    ``Delta_tilde`` are absolute angular rates; see
    :func:`levicool.model.reference_parameters` for the usual way of setting them
    relative to the effective x1 frequency.

    The focal coordinates ``x10 .. y20`` default to placing both foci on the
    cavity axis at cavity-frame positions ``+D/2`` (particle 1) and ``-D/2``
    (particle 2).
    """

    r0: float = 70e-9
    rho: float = 2200.0
    eps_r: float = 2.07
    lambda_tw: float = 1064e-9
    P_tw1: float = 0.8
    P_tw2: float = 0.6
    W_t: Optional[float] = None
    A_x: Optional[float] = None
    A_y: Optional[float] = None
    L_cav: float = 1.07e-2
    w_cav: float = 41.1e-6
    theta: float = math.pi / 8
    D: float = 2.65 * 1064e-9
    x10: Optional[float] = None
    x20: Optional[float] = None
    y10: Optional[float] = None
    y20: Optional[float] = None
    kappa: Optional[float] = None
    gamma: Sequence[float] | float | None = None
    n_th: Sequence[float] | float = 1e7
    Delta_tilde: Optional[float] = None
    calibrated: bool = field(default=False, compare=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "theta", float(self.theta) % (2 * math.pi))
        set_(self, "n_th", _six(self.n_th, "n_th"))
        if self.gamma is not None:
            set_(self, "gamma", _six(self.gamma, "gamma"))
        self.validate()
        if self.W_t is None or self.A_x is None or self.A_y is None:
            W_t, A_x, A_y = calibrate_effective(
                self.r0, self.rho, self.eps_r, self.lambda_tw, self.L_cav, self.w_cav
            )
            set_(self, "W_t", self.W_t if self.W_t is not None else W_t)
            set_(self, "A_x", self.A_x if self.A_x is not None else A_x)
            set_(self, "A_y", self.A_y if self.A_y is not None else A_y)
            set_(self, "calibrated", True)

    def validate(self):
        positive = {
            "r0": self.r0, "rho": self.rho, "lambda_tw": self.lambda_tw,
            "L_cav": self.L_cav, "w_cav": self.w_cav, "D": self.D,
        }
        for name in ("W_t", "A_x", "A_y", "kappa", "Delta_tilde"):
            value = getattr(self, name)
            if value is not None and name != "Delta_tilde":
                positive[name] = value
        for name, value in positive.items():
            if not (value > 0 and math.isfinite(value)):
                raise ParameterError(f"{name} must be positive and finite, got {value!r}")
        if not self.eps_r > 1:
            raise ParameterError(f"eps_r must exceed 1, got {self.eps_r!r}")
        for name in ("P_tw1", "P_tw2"):
            if not getattr(self, name) >= 0:
                raise ParameterError(f"{name} must be non-negative")
        if self.gamma is not None and not np.all(self.gamma > 0):
            raise ParameterError("all gamma must be positive")
        if not np.all(self.n_th >= 0):
            raise ParameterError("all n_th must be non-negative")

    def replace(self, **changes) -> "PhysicalParameters":
        """Copy with fields changed, re-running validation.

        Calibrated waists are kept as they are; pass ``W_t=None`` etc. to
        recalibrate.
        """
        return replace(self, **changes)

    @property
    def focal_coordinates(self):
        """Tweezer-frame focal points ``((x10, y10), (x20, y20))``."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        half = self.D / 2
        default = ((half * c, half * s), (-half * c, -half * s))
        x10 = default[0][0] if self.x10 is None else self.x10
        y10 = default[0][1] if self.y10 is None else self.y10
        x20 = default[1][0] if self.x20 is None else self.x20
        y20 = default[1][1] if self.y20 is None else self.y20
        return (x10, y10), (x20, y20)


@dataclass(frozen=True)
class DerivedConstants:
    alpha_pol: float
    m: float
    V_np: float
    eps_tw1: float
    eps_tw2: float
    eps_cav: float
    k: float
    k_tw: float
    z_R: float
    eta_f_cav: float
    eta_f_tw: float
    V_cav: float
    omega_cav: float

    @property
    def eps_tw(self):
        return (self.eps_tw1, self.eps_tw2)


def polarizability(r0, eps_r):
    volume = 4 * math.pi * r0**3 / 3
    return EPS0 * 3 * (eps_r - 1) / (eps_r + 2) * volume


def tweezer_amplitude(power, W_t, A_x, A_y):
    """Peak field of an elliptical Gaussian focus carrying ``power`` watts."""
    return math.sqrt(4 * power / (math.pi * EPS0 * C_LIGHT * W_t**2 * A_x * A_y))


def far_field_constant(alpha_pol, k0, D):
    return alpha_pol * k0**2 / (4 * math.pi * EPS0 * D)


def derive_constants(p: PhysicalParameters) -> DerivedConstants:
    """Evaluate polarizability, mass, field amplitudes and wave numbers.

    The cavity wave number is taken equal to the tweezer wave number; the
    laser-cavity detuning is many orders of magnitude below the optical
    frequency.
    """
    p.validate()
    if p.W_t is None:
        raise ParameterError("W_t is not set")
    V_np = 4 * math.pi * p.r0**3 / 3
    alpha_pol = polarizability(p.r0, p.eps_r)
    m = p.rho * V_np
    k_tw = 2 * math.pi / p.lambda_tw
    k = k_tw
    omega_cav = C_LIGHT * k
    V_cav = math.pi / 4 * p.w_cav**2 * p.L_cav
    eps_cav = math.sqrt(HBAR * omega_cav / (2 * EPS0 * V_cav))
    return DerivedConstants(
        alpha_pol=alpha_pol,
        m=m,
        V_np=V_np,
        eps_tw1=tweezer_amplitude(p.P_tw1, p.W_t, p.A_x, p.A_y),
        eps_tw2=tweezer_amplitude(p.P_tw2, p.W_t, p.A_x, p.A_y),
        eps_cav=eps_cav,
        k=k,
        k_tw=k_tw,
        z_R=math.pi * p.W_t**2 / p.lambda_tw,
        eta_f_cav=far_field_constant(alpha_pol, k, p.D),
        eta_f_tw=far_field_constant(alpha_pol, k_tw, p.D),
        V_cav=V_cav,
        omega_cav=omega_cav,
    )


def trap_frequencies(p: PhysicalParameters, c: DerivedConstants) -> np.ndarray:
    """Bare harmonic trap frequencies, shape ``(2, 3)`` as ``[j, (x, y, z)]``."""
    lam = 2 * math.pi / c.k_tw
    out = np.empty((2, 3))
    for j, eps in enumerate(c.eps_tw):
        scale = math.sqrt(c.alpha_pol * eps**2 / (2 * c.m * p.W_t**2))
        out[j] = scale * np.array(
            [math.sqrt(2) / p.A_x, math.sqrt(2) / p.A_y, lam / (math.pi * p.W_t)]
        )
    return out


def calibrate_waists(target_freqs, power, c):
    """Invert the trap-frequency formulas for ``(W_t, A_x, A_y)``.

    Parameters
    ----------
    target_freqs : sequence of 3 floats
        Angular trap frequencies ``(omega_x, omega_y, omega_z)`` in rad/s.
    power : float
        Tweezer power (W) at which the targets hold.
    c : DerivedConstants or PhysicalParameters
        Anything exposing the particle polarizability and mass (directly or
        through ``r0``, ``rho`` and ``eps_r``) and the tweezer wave number.

    Returns
    -------
    (W_t, A_x, A_y) : tuple of float
    """
    wx, wy, wz = (float(f) for f in target_freqs)
    if not (wx > 0 and wy > 0 and wz > 0):
        raise CalibrationError(f"target frequencies must be positive, got {target_freqs!r}")
    if not power > 0:
        raise CalibrationError("calibration power must be positive")
    if isinstance(c, DerivedConstants):
        alpha_over_m, lam = c.alpha_pol / c.m, 2 * math.pi / c.k_tw
    else:
        alpha_over_m = polarizability(c.r0, c.eps_r) / (c.rho * 4 * math.pi * c.r0**3 / 3)
        lam = c.lambda_tw
    # omega_x^2 = 2K / (W^4 A_x^3 A_y) with K = 2 alpha P / (m pi eps0 c)
    K = 2 * alpha_over_m * power / (math.pi * EPS0 * C_LIGHT)
    L = lam * wx / (math.sqrt(2) * math.pi * wz)
    A_x = (2 * K * wy / (L**4 * wx**3)) ** 0.125
    A_y = A_x * wx / wy
    W_t = A_x * L
    if W_t <= lam / math.pi:
        raise CalibrationError(
            f"targets need a focal waist {W_t:.3g} m below lambda/pi; "
            "omega_z/omega_x is outside the paraxial range"
        )
    return W_t, A_x, A_y


@lru_cache(maxsize=64)
def calibrate_effective(r0, rho, eps_r, lambda_tw, L_cav, w_cav, tol=1e-13, max_iter=50):
    """Waists for which the *effective* particle-1 frequencies hit the targets.

    The effective frequencies include the static shift ``(2 v_mu + k_mu)/m``
    of the tweezer-mediated binding, evaluated in :data:`REFERENCE_GEOMETRY`.
    The bare targets are corrected by that shift and re-inverted with
    :func:`calibrate_waists` until the waist stops moving.
    """
    from .couplings import tweezer_binding  # couplings imports this module

    targets = np.array([2 * math.pi * f for f in TARGET_FREQS_HZ])
    P2, theta, D_over_lambda = REFERENCE_GEOMETRY
    base = dict(r0=r0, rho=rho, eps_r=eps_r, lambda_tw=lambda_tw, L_cav=L_cav,
                w_cav=w_cav, P_tw1=CALIBRATION_POWER, P_tw2=P2, theta=theta,
                D=D_over_lambda * lambda_tw)
    bare = targets.copy()
    W_t = A_x = A_y = None
    for _ in range(max_iter):
        W_new, A_x, A_y = calibrate_waists(bare, CALIBRATION_POWER, PhysicalParameters(
            W_t=1.0, A_x=1.0, A_y=1.0, **base))
        p = PhysicalParameters(W_t=W_new, A_x=A_x, A_y=A_y, **base)
        c = derive_constants(p)
        tb = tweezer_binding(p, c)
        radicand = targets**2 - (2 * tb.v + tb.k_bind) / c.m
        if np.any(radicand <= 0):
            raise CalibrationError("binding shift exceeds the target frequencies")
        bare = np.sqrt(radicand)
        if W_t is not None and abs(W_new - W_t) <= tol * W_t:
            return W_new, A_x, A_y
        W_t = W_new
    raise CalibrationError("effective calibration did not converge")
