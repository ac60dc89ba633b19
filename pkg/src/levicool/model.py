"""Convenience construction of parameter sets and coupling sets.

Rates such as the cavity linewidth are usually quoted relative to the
effective x1 frequency of the same configuration; :func:`reference_parameters`
resolves those ratios into absolute angular rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .couplings import EffectiveModel, GSet, assemble_effective, dimensionless_couplings
from .params import DerivedConstants, PhysicalParameters, derive_constants

#: default ratios to the effective x1 frequency
DEFAULT_RATIOS = {"detuning": 0.7, "kappa": 0.2, "gamma": 0.5e-9}


def omega_1x(p: PhysicalParameters) -> float:
    """Effective x1 frequency (rad/s) of a parameter set."""
    c = derive_constants(p)
    return assemble_effective(p, c).omega_1x


def with_ratios(p: PhysicalParameters, detuning=None, kappa=None, gamma=None) -> PhysicalParameters:
    """Set ``Delta_tilde``, ``kappa`` and ``gamma`` as multiples of the x1 frequency.

    Arguments left as ``None`` take the values of :data:`DEFAULT_RATIOS`.
    """
    w = omega_1x(p)
    r = dict(DEFAULT_RATIOS)
    for key, value in (("detuning", detuning), ("kappa", kappa), ("gamma", gamma)):
        if value is not None:
            r[key] = value
    return p.replace(Delta_tilde=r["detuning"] * w, kappa=r["kappa"] * w, gamma=r["gamma"] * w)


def reference_parameters(
    theta: float = math.pi / 8,
    D_over_lambda: float = 2.65,
    P_tw2: float = 0.6,
    detuning: float = 0.7,
    kappa: float = 0.2,
    gamma: float = 0.5e-9,
    n_th: float = 1e7,
    **overrides,
) -> PhysicalParameters:
    """Reference parameter set with rates given relative to the x1 frequency.

    ``overrides`` are passed to :class:`PhysicalParameters` unchanged.
    """
    lam = overrides.get("lambda_tw", 1064e-9)
    base = PhysicalParameters(theta=theta, D=D_over_lambda * lam, P_tw2=P_tw2, n_th=n_th, **overrides)
    return with_ratios(base, detuning=detuning, kappa=kappa, gamma=gamma)


@dataclass(frozen=True)
class Couplings:
    params: PhysicalParameters
    constants: DerivedConstants
    model: EffectiveModel
    g: GSet


def build_couplings(p: PhysicalParameters) -> Couplings:
    """Derived constants, effective model and rates for one parameter set."""
    c = derive_constants(p)
    em = assemble_effective(p, c)
    return Couplings(p, c, em, dimensionless_couplings(em, p, c))
