#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qlni/dispersion.hpp"
#include "qlni/interferogram.hpp"

namespace qlni {

/// Parameters of the fringe model
///   I(lambda) = offset + amplitude * E(lambda) * (1 + V cos(beta2L dw^2 + phi0)) / 2
/// where E is the product of the frozen acceptance envelopes and dw the
/// detuning from the reference wavelength. beta2L is the L*beta2 product;
/// phi0 absorbs the constant phase 2 L beta0 (mod 2 pi, never unwrapped).
struct FitModel {
    double amplitude = 1.0;
    double offset = 0.0;
    double visibility = 1.0;
    double beta2L = 0.0;  // s^2
    double phi0 = 0.0;    // rad
    ParametricProcess dfg;
    ParametricProcess sfg;

    void validate() const;
};

struct FitOptions {
    int max_iterations = 200;
    double rss_rel_tol = 1e-10;
    bool fit_envelope = false;   // unfreeze envelope center/slope parameters
    bool try_both_signs = true;  // run from both (beta2L, phi0) sign hypotheses
};

struct FitResult {
    FitModel model;
    std::vector<std::string> free_names;  // order of the covariance rows
    std::vector<double> covariance;       // row-major, rss/(n-p) * (JtJ)^-1
    double rss = 0.0;
    double residual_std = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> rss_history;  // non-increasing across accepted steps

    double variance_of(const std::string& name) const;
};

/// Data-driven starting point: the intensity is resampled onto a uniform grid
/// in the dw^2 coordinate, where the fringe becomes a single tone whose
/// spectral peak gives beta2L (sign left positive; the fit resolves it).
/// Offset and amplitude come from robust 2%/98% quantiles, the visibility
/// from the envelope-normalized contrast, phi0 from the projection onto the
/// estimated tone. Raises EstimationError when no dominant fringe exists.
FitModel initial_guess(const Interferogram& trace, Wavelength reference,
                       const ParametricProcess& dfg, const ParametricProcess& sfg);

/// Damped Gauss-Newton fit of the fringe model. Free parameters: amplitude,
/// offset, visibility, beta2L, phi0 (envelope parameters optionally
/// unfrozen). Never throws on divergence: a non-converged result carries its
/// diagnostics instead.
FitResult fit(const Interferogram& trace, Wavelength reference, const FitModel& guess,
              const FitOptions& options = {});

struct CdEstimate {
    DispersionParameter d;
    double sigma_d_ps_nm_km = 0.0;
    double beta2_s2_m = 0.0;
    double sigma_beta2_s2_m = 0.0;
};

/// beta2 = beta2L / L converted to D at the reference wavelength, with the
/// 1-sigma uncertainty propagated from the fit covariance. Refuses
/// non-converged fits.
CdEstimate extract_cd(const FitResult& result, double fiber_length_m, Wavelength lambda0);

struct McSummary {
    std::size_t n_requested = 0;
    std::size_t n_scans = 0;  // converged scans; equals cd_values.size()
    std::vector<double> cd_values;
    std::vector<std::uint64_t> failed_scans;
    double mean = 0.0;
    double std_dev = 0.0;
    double sem = 0.0;                // std_dev / sqrt(n_scans)
    double rel_error_percent = 0.0;  // 100 * sem / |mean|
    bool valid = false;              // false when more than 5% of scans failed
    double truth_d_ps_nm_km = 0.0;

    // Freedman-Diaconis histogram with a normal-pdf overlay at bin centers
    std::vector<double> bin_edges;
    std::vector<std::size_t> bin_counts;
    std::vector<double> bin_density;
    std::vector<double> gauss_overlay;
};

/// Synthesizes n_scans independently noisy traces (per-scan streams derived
/// from master_seed), fits each one and aggregates the extracted CD values.
/// Scans may run in parallel; results are ordered by scan index so the
/// summary is independent of the execution order.
McSummary monte_carlo(const SynthesisModel& model, const NoiseConfig& noise,
                      std::size_t n_scans, std::uint64_t master_seed, int threads = 1,
                      const FitOptions& options = {});

}  // namespace qlni
