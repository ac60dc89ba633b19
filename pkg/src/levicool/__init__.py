"""Cooling of two levitated nanoparticles coupled to one cavity mode.

The pipeline runs from raw physical inputs to final phonon numbers:

>>> from levicool import reference_parameters, cool
>>> result = cool(reference_parameters(theta=0.785398))
>>> bool((result.n_bar < 1).all())
True
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CalibrationError, ConfigError, ConvergenceError, InstabilityError, LevicoolError,
    NumericalError, ParameterError, SweepError, TrapDestabilizedError,
)
from .params import (  # noqa: E402
    MODE_LABELS, DerivedConstants, PhysicalParameters, calibrate_effective, calibrate_waists,
    derive_constants, trap_frequencies,
)
from .couplings import (  # noqa: E402
    EffectiveModel, GreensTensor, GSet, assemble_effective, cav_gtw_couplings, cavity_binding,
    cavity_self_couplings, coherent_scattering_couplings, dimensionless_couplings,
    greens_far_field, tw_gcav_couplings, tweezer_binding,
)
from .model import build_couplings, reference_parameters, with_ratios  # noqa: E402
from .linearized import (  # noqa: E402
    STATE_LABELS, LinearizedSystem, SteadyState, build_drift_matrix, build_noise_matrix,
    check_stability, linearize, solve_steady_state,
)
from .cooling import CoolingResult, CovarianceMatrix, cool, phonon_numbers, solve_lyapunov  # noqa: E402
from .darkmodes import (  # noqa: E402
    ArrowheadSystem, DarkModeReport, build_arrowhead, detect_dark_modes, diagonalize_mech,
)
from .config import SimulationConfig, parse_config, load_config  # noqa: E402
from .sweep import SweepRow, emit_csv, run_sweep  # noqa: E402
