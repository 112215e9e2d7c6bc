"""Simulation and parameter estimation for super-resolved single-photon
interferometry: forward fringe synthesis, nonlinear least-squares extraction
of chromatic dispersion, and Monte Carlo uncertainty analysis."""

from qlni._core import (
    CdEstimate,
    ConversionKind,
    ConversionSpec,
    Error,
    FiberUnderTest,
    FitModel,
    FitOptions,
    FitResult,
    Interferogram,
    McSummary,
    NoiseConfig,
    ParametricProcess,
    ProcessKind,
    PropertyCheck,
    ScenarioConfig,
    SweepGrid,
    SynthesisModel,
    Wavelength,
    acceptance,
    add_noise,
    arm_efficiency_ratio,
    beta2_from_d,
    calibrate,
    classical_phase,
    coherent_fock,
    d_from_beta2,
    delta_k,
    detection_probability,
    detuning_from_degeneracy,
    envelope_product,
    expected_fringe_count,
    extract_cd,
    fit,
    fringe_period,
    half_max_argument,
    harmonic_phase_map,
    idler_wavelength,
    initial_guess,
    make_sweep,
    monte_carlo,
    omega_to_wavelength,
    quantum_like_phase,
    run_property_suite,
    scan_visibility,
    shg_suppression,
    slope_from_fwhm,
    synthesize,
    taylor_phase,
    visibility_from_efficiency,
    wavelength_to_omega,
)

__version__ = "0.1.0"
