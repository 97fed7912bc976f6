"""Photon content of classical 1D transmission-line voltage pulses.

A bipolar voltage pulse on an ideal line is a coherent state of a single
photon mode; this package computes that mode's coefficient functions, its
mean photon number by three independent routes, validity and divergence
diagnostics, and detection-theoretic measures of how localized the mode is.
"""

__version__ = "0.1.0"

from .errors import (
    EvaluationAtSingularity,
    NonDecayingInput,
    NotConverged,
    OverlappingSubPulses,
    PulseError,
    PulseFileError,
    QuadratureFailure,
    RepresentationDoesNotExist,
    TooShort,
    UnipolarPulse,
)
from .line import NATURAL_UNITS, LineParams
from .waveform import (
    Bipolarity,
    FieldPair,
    MoverDecomposition,
    PiecewiseConstantWaveform,
    PiecewiseLinearWaveform,
    SampledWaveform,
    bipolarity_check,
    cumulative,
    decompose_lr,
    evolve,
    fields_from_snapshot,
    net_area,
    right_mover_fields,
)
from .transforms import (
    CoefficientFunctions,
    HilbertEvaluation,
    coefficient_functions_general,
    coefficient_functions_rightmover,
    fourier,
    fourier_pcw,
    fourier_plw,
    fourier_sampled,
    hilbert_pcw,
    hilbert_plw,
    hilbert_sampled,
)
from .kgrid import KGrid, default_energy_grid, default_mode_grid
from .photon_content import (
    DIVERGENT,
    NOT_APPLICABLE,
    ModeAmplitude,
    PhotonReport,
    analyze_pulse,
    beta2_general,
    beta2_ir_cutoff,
    beta2_logkernel,
    beta2_rightmover,
    canonical_pulse,
    fit_log_slope,
    ir_divergence_coefficient,
    mode_amplitude,
    naive_photon_estimate,
    split_pulse,
    split_pulse_sweep,
)
from .mode_oracle import (
    DiscretizationSpec,
    default_spec,
    energy_classical,
    energy_modes,
    oracle_beta2,
    oracle_beta2_levels,
    oracle_hilbert,
    oracle_time_invariance,
)
from .detection import (
    CouplerReport,
    SupportCheck,
    WindowedCoupler,
    bogoliubov_components,
    capture_scan,
    fit_exponential,
    fit_power_law,
    integrate_norm_density,
    norm_density,
    quadrature_support_check,
)
