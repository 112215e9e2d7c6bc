#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qlni/errors.hpp"

namespace qlni {

/// Truncated Fock-basis expansion of a single optical mode.
struct FockVector {
    std::vector<std::complex<double>> coefficients;  // index n = 0..n_max

    double norm_squared() const;
    double mean_photon_number() const;
};

enum class ConversionKind {
    HarmonicN,      // N photons of the input mode merge into one upconverted photon
    SumFrequency,   // one signal + one idler photon merge; phase is their sum
};

/// Parametric conversion placed in each interferometer arm.
struct ConversionSpec {
    ConversionKind kind = ConversionKind::HarmonicN;
    unsigned harmonic_order = 1;     // N >= 1, used by HarmonicN
    double efficiency_ratio = 0.5;   // eta in [0,1], relative conversion efficiency of the arms

    void validate() const;
};

/// Single upconverted photon delocalized over the short (reference) and long
/// (sample) arms.
struct PathState {
    std::complex<double> amp_short;
    std::complex<double> amp_long;

    double norm_squared() const;
};

struct ProbabilityPair {
    double p_plus = 0.0;
    double p_minus = 0.0;
};

/// Coherent-state Fock coefficients c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!),
/// evaluated in log space so large n never overflows. The truncation must
/// satisfy |alpha|^2 <= n_max / 4, which keeps the discarded tail mass
/// negligible; otherwise TruncationError is raised.
FockVector coherent_fock(std::complex<double> alpha, std::size_t n_max);

/// Stimulated N-th harmonic conversion acting on a coherent amplitude:
/// the output phase is N times the input phase; the magnitude maps through a
/// conversion gain (default 1, it cancels in normalized fringes).
std::complex<double> harmonic_phase_map(std::complex<double> alpha_in, unsigned harmonic_order,
                                        double conversion_gain = 1.0);

/// State at the output coupler before detection: amp_short = sqrt(eta),
/// amp_long = sqrt(1-eta) e^{i N phi} for HarmonicN or sqrt(1-eta) e^{i phi}
/// for SumFrequency, where phi is then the summed signal+idler phase.
PathState interferometer_state(double phi, const ConversionSpec& spec);

/// Probabilities at the two outputs of the closing balanced beam-splitter:
/// p_pm = |amp_short +- amp_long|^2 / 2. They sum to one for a normalized state.
ProbabilityPair detection_probability(const PathState& state);

/// Fringe period of p_plus as a function of phi, measured by fitting a cosine
/// to a dense phi scan. Equals 2 pi / N. HarmonicN only.
double fringe_period(const ConversionSpec& spec);

/// Fringe contrast of p_plus over a phi scan, (max-min)/(max+min).
/// Equals 2 sqrt(eta (1-eta)).
double scan_visibility(const ConversionSpec& spec);

}  // namespace qlni
