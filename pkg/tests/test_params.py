import math

import numpy as np
import pytest

from levicool import (
    CalibrationError, ParameterError, PhysicalParameters, calibrate_effective, calibrate_waists,
    derive_constants, trap_frequencies,
)
from levicool.couplings import assemble_effective
from levicool.params import CALIBRATION_POWER, TARGET_FREQS_HZ, polarizability

# computed independently from rho * 4/3 pi r^3 and the Clausius-Mossotti form
M_REF = 3.160861088531811e-18
ALPHA_REF = 1.003326036486297e-32


def test_mass_and_polarizability_frozen():
    c = derive_constants(PhysicalParameters())
    assert c.m == pytest.approx(M_REF, rel=1e-14)
    assert c.alpha_pol == pytest.approx(ALPHA_REF, rel=1e-9)


def test_polarizability_vanishes_for_vacuum_like_particle():
    assert polarizability(70e-9, 1.0) == 0.0


def test_frequencies_scale_with_sqrt_power():
    p = PhysicalParameters(P_tw1=0.8, P_tw2=0.2)
    w = trap_frequencies(p, derive_constants(p))
    np.testing.assert_allclose(w[1] / w[0], math.sqrt(0.2 / 0.8), rtol=1e-14)


def test_bare_calibration_round_trip():
    targets = 2 * math.pi * np.array(TARGET_FREQS_HZ)
    p0 = PhysicalParameters(W_t=1.0, A_x=1.0, A_y=1.0)
    W, Ax, Ay = calibrate_waists(targets, CALIBRATION_POWER, p0)
    p = PhysicalParameters(W_t=W, A_x=Ax, A_y=Ay, P_tw1=CALIBRATION_POWER)
    w = trap_frequencies(p, derive_constants(p))[0]
    np.testing.assert_allclose(w, targets, rtol=1e-9)


def test_effective_calibration_hits_targets():
    p = PhysicalParameters()
    assert p.calibrated
    em = assemble_effective(p, derive_constants(p))
    np.testing.assert_allclose(em.omega_tilde[0] / (2 * math.pi), TARGET_FREQS_HZ, rtol=1e-10)
    assert calibrate_effective(p.r0, p.rho, p.eps_r, p.lambda_tw, p.L_cav, p.w_cav) == (p.W_t, p.A_x, p.A_y)


def test_calibration_rejects_zero_axial_frequency():
    with pytest.raises(CalibrationError):
        calibrate_waists([1e6, 1e6, 0.0], 0.8, PhysicalParameters(W_t=1.0, A_x=1.0, A_y=1.0))


def test_calibration_rejects_non_paraxial_target():
    # omega_z above omega_x needs a waist below lambda/pi
    with pytest.raises(CalibrationError):
        calibrate_waists([1e6, 1e6, 3e6], 0.8, PhysicalParameters(W_t=1.0, A_x=1.0, A_y=1.0))


@pytest.mark.parametrize("field,value", [("r0", -1e-9), ("D", 0.0), ("eps_r", 0.9), ("P_tw2", -0.1),
                                         ("kappa", -1.0), ("n_th", -1.0)])
def test_invalid_parameters_raise(field, value):
    with pytest.raises(ParameterError):
        PhysicalParameters(**{field: value})


def test_theta_is_normalized():
    assert PhysicalParameters(theta=2 * math.pi).theta == 0.0
    assert PhysicalParameters(theta=-math.pi / 2).theta == pytest.approx(3 * math.pi / 2)


def test_default_foci_on_axis():
    p = PhysicalParameters(theta=0.3)
    (x1, y1), (x2, y2) = p.focal_coordinates
    assert math.hypot(x1 - x2, y1 - y2) == pytest.approx(p.D, rel=1e-14)
    # both foci project onto the cavity axis at +-D/2
    c, s = math.cos(p.theta), math.sin(p.theta)
    assert x1 * c + y1 * s == pytest.approx(p.D / 2, rel=1e-14)
    assert x2 * c + y2 * s == pytest.approx(-p.D / 2, rel=1e-14)
