#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qlni/dispersion.hpp"
#include "qlni/phase_matching.hpp"
#include "qlni/spectral.hpp"

namespace qlni {

/// Detected intensity versus swept laser wavelength, with the calibrated
/// wavelength axis attached. Immutable after creation; meta carries
/// provenance (synthesis parameters, seed, warnings).
struct Interferogram {
    std::vector<double> time_s;
    std::vector<double> lambda_nm;
    std::vector<double> intensity;
    nlohmann::json meta = nlohmann::json::object();

    std::size_t size() const { return intensity.size(); }
    void validate() const;  // equal lengths >= 2, strictly monotonic lambda, finite intensity
};

struct NoiseConfig {
    double additive_sigma = 0.0;    // Gaussian sigma as a fraction of full scale
    double shot_scale = 0.0;        // electrons per unit intensity; 0 disables shot noise
    double drift_rad_per_s = 0.0;   // slow drift of the fringe phase
    std::uint64_t seed = 0;

    void validate() const;
};

/// Complete forward-model description of one scan.
struct SynthesisModel {
    FiberUnderTest fiber;
    ParametricProcess dfg;
    ParametricProcess sfg;
    SweepGrid sweep;
    double amplitude = 1.0;
    double offset = 0.0;
    double visibility = 1.0;

    void validate() const;
    nlohmann::json to_json() const;
    static SynthesisModel from_json(const nlohmann::json& j);
};

/// Noiseless trace:
///   I(lambda) = offset + amplitude * a_dfg * a_sfg * (1 + V cos(phase)) / 2
/// with phase the summed signal+idler dispersion phase of the fiber at the
/// detuning of each sweep point. Flags a warning in meta when the sweep
/// misses the SFG acceptance main lobe (the pattern would be unmeasurable).
Interferogram synthesize(const SynthesisModel& model);
Interferogram synthesize(const FiberUnderTest& fiber, const ParametricProcess& dfg,
                         const ParametricProcess& sfg, const SweepGrid& sweep, double amplitude,
                         double offset, double visibility = 1.0);

/// Attach the wavelength axis lambda(t) = lambda_start + speed * (t - t0) to a
/// raw (time, intensity) acquisition. Rejects traces whose duration disagrees
/// with the sweep by more than duration_tolerance (relative).
Interferogram calibrate(const std::vector<std::pair<double, double>>& time_trace,
                        const SweepGrid& sweep, double duration_tolerance = 0.01);

/// Noisy copy of a clean trace. Per sample: additive Gaussian noise with
/// sigma = additive_sigma * max(clean), then optional signal-dependent noise
/// with variance intensity/shot_scale. A nonzero drift perturbs the fringe
/// phase by drift * (scan_start + t) and requires synthesis metadata on the
/// input trace. Deterministic for fixed (seed, scan_index).
Interferogram add_noise(const Interferogram& clean, const NoiseConfig& cfg,
                        std::uint64_t scan_index = 0, double scan_start_s = 0.0);

/// One-call noisy synthesis used by Monte Carlo scans.
Interferogram synthesize_noisy(const SynthesisModel& model, const NoiseConfig& cfg,
                               std::uint64_t scan_index, double scan_start_s);

/// Fringes between the sweep endpoints, |phase(start) - phase(stop)| / 2 pi,
/// from the summed-phase model.
double expected_fringe_count(const FiberUnderTest& fiber, const SweepGrid& sweep);

}  // namespace qlni
