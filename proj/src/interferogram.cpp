#include "qlni/interferogram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlni/rng.hpp"

namespace qlni {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

nlohmann::json process_to_json(const ParametricProcess& p) {
    const char* kind = nullptr;
    switch (p.kind) {
        case ProcessKind::Dfg: kind = "dfg"; break;
        case ProcessKind::SfgArm1: kind = "sfg1"; break;
        case ProcessKind::SfgArm2: kind = "sfg2"; break;
        case ProcessKind::Shg: kind = "shg"; break;
    }
    return {{"kind", kind},
            {"center_nm", p.center.nm()},
            {"slope_rad_m_per_rad_s", p.mismatch_slope},
            {"length_m", p.crystal_length_m}};
}

ParametricProcess process_from_json(const nlohmann::json& j) {
    ParametricProcess p;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dfg") p.kind = ProcessKind::Dfg;
    else if (kind == "sfg1") p.kind = ProcessKind::SfgArm1;
    else if (kind == "sfg2") p.kind = ProcessKind::SfgArm2;
    else if (kind == "shg") p.kind = ProcessKind::Shg;
    else throw ConfigError("unknown process kind: " + kind);
    p.center = Wavelength::from_nm(j.at("center_nm").get<double>());
    p.mismatch_slope = j.at("slope_rad_m_per_rad_s").get<double>();
    p.crystal_length_m = j.at("length_m").get<double>();
    return p;
}

// noiseless intensity with an optional extra fringe-phase term per sample
void evaluate_model(const SynthesisModel& m, const std::vector<SweepPoint>& points,
                    double drift_rad_per_s, double scan_start_s, std::vector<double>& out) {
    out.resize(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Detuning dw = detuning_from_reference(points[k].lambda, m.fiber.reference);
        const double envelope = envelope_product(m.dfg, m.sfg, points[k].lambda);
        double phase = quantum_like_phase(m.fiber, dw);
        if (drift_rad_per_s != 0.0)
            phase += drift_rad_per_s * (scan_start_s + points[k].time_s);
        out[k] = m.offset +
                 m.amplitude * envelope * 0.5 * (1.0 + m.visibility * std::cos(phase));
    }
}

bool sweep_hits_main_lobe(const ParametricProcess& sfg, const std::vector<SweepPoint>& points) {
    for (const auto& pt : points) {
        if (std::abs(delta_k(sfg, pt.lambda)) * sfg.crystal_length_m / 2.0 < std::numbers::pi)
            return true;
    }
    return false;
}

void apply_noise(std::vector<double>& intensity, double full_scale, const NoiseConfig& cfg,
                 CounterRng& rng) {
    const double sigma_add = cfg.additive_sigma * full_scale;
    for (double& v : intensity) {
        const double clean = v;
        if (cfg.additive_sigma > 0.0) v += sigma_add * rng.next_gaussian();
        if (cfg.shot_scale > 0.0)
            v += std::sqrt(std::max(clean, 0.0) / cfg.shot_scale) * rng.next_gaussian();
    }
}

}  // namespace

void Interferogram::validate() const {
    const std::size_t n = intensity.size();
    if (n < 2 || time_s.size() != n || lambda_nm.size() != n)
        throw DomainError("interferogram: axes must have equal length >= 2");
    const bool ascending = lambda_nm[1] > lambda_nm[0];
    for (std::size_t k = 1; k < n; ++k) {
        const bool step_up = lambda_nm[k] > lambda_nm[k - 1];
        if (step_up != ascending || lambda_nm[k] == lambda_nm[k - 1])
            throw DomainError("interferogram: wavelength axis must be strictly monotonic");
    }
    for (double v : intensity)
        if (!std::isfinite(v)) throw DomainError("interferogram: intensity must be finite");
}

void NoiseConfig::validate() const {
    if (!(additive_sigma >= 0.0) || !std::isfinite(additive_sigma))
        throw ConfigError("noise: additive_sigma must be >= 0");
    if (!(shot_scale >= 0.0) || !std::isfinite(shot_scale))
        throw ConfigError("noise: shot_scale must be >= 0");
    if (!std::isfinite(drift_rad_per_s)) throw ConfigError("noise: drift must be finite");
}

void SynthesisModel::validate() const {
    fiber.validate();
    dfg.validate();
    sfg.validate();
    sweep.validate();
    if (!(std::isfinite(amplitude) && amplitude > 0.0))
        throw DomainError("synthesis: amplitude must be positive");
    if (!(std::isfinite(offset) && offset >= 0.0))
        throw DomainError("synthesis: offset must be >= 0");
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw DomainError("synthesis: visibility must lie in [0, 1]");
}

nlohmann::json SynthesisModel::to_json() const {
    return {{"fiber",
             {{"length_m", fiber.length_m},
              {"beta0_rad_m", fiber.beta0},
              {"beta1_s_m", fiber.beta1},
              {"beta2_s2_m", fiber.beta2},
              {"beta3_s3_m", fiber.beta3},
              {"reference_nm", fiber.reference.nm()}}},
            {"dfg", process_to_json(dfg)},
            {"sfg", process_to_json(sfg)},
            {"sweep",
             {{"lambda_start_nm", sweep.lambda_start.nm()},
              {"lambda_stop_nm", sweep.lambda_stop.nm()},
              {"n_samples", sweep.n_samples},
              {"speed_nm_s", sweep.speed_nm_per_s}}},
            {"amplitude", amplitude},
            {"offset", offset},
            {"visibility", visibility}};
}

SynthesisModel SynthesisModel::from_json(const nlohmann::json& j) {
    SynthesisModel m;
    const auto& f = j.at("fiber");
    m.fiber.length_m = f.at("length_m").get<double>();
    m.fiber.beta0 = f.at("beta0_rad_m").get<double>();
    m.fiber.beta1 = f.at("beta1_s_m").get<double>();
    m.fiber.beta2 = f.at("beta2_s2_m").get<double>();
    m.fiber.beta3 = f.at("beta3_s3_m").get<double>();
    m.fiber.reference = Wavelength::from_nm(f.at("reference_nm").get<double>());
    m.dfg = process_from_json(j.at("dfg"));
    m.sfg = process_from_json(j.at("sfg"));
    const auto& s = j.at("sweep");
    m.sweep.lambda_start = Wavelength::from_nm(s.at("lambda_start_nm").get<double>());
    m.sweep.lambda_stop = Wavelength::from_nm(s.at("lambda_stop_nm").get<double>());
    m.sweep.n_samples = s.at("n_samples").get<std::size_t>();
    m.sweep.speed_nm_per_s = s.at("speed_nm_s").get<double>();
    m.amplitude = j.at("amplitude").get<double>();
    m.offset = j.at("offset").get<double>();
    m.visibility = j.at("visibility").get<double>();
    m.validate();
    return m;
}

Interferogram synthesize(const SynthesisModel& model) {
    model.validate();
    const std::vector<SweepPoint> points = make_sweep(model.sweep);

    Interferogram trace;
    trace.time_s.reserve(points.size());
    trace.lambda_nm.reserve(points.size());
    for (const auto& pt : points) {
        trace.time_s.push_back(pt.time_s);
        trace.lambda_nm.push_back(pt.lambda.nm());
    }
    evaluate_model(model, points, 0.0, 0.0, trace.intensity);

    trace.meta["synthesis"] = model.to_json();
    trace.meta["warnings"] = nlohmann::json::array();
    if (!sweep_hits_main_lobe(model.sfg, points))
        trace.meta["warnings"].push_back(
            "sweep lies outside the SFG acceptance main lobe; pattern unmeasurable");
    return trace;
}

Interferogram synthesize(const FiberUnderTest& fiber, const ParametricProcess& dfg,
                         const ParametricProcess& sfg, const SweepGrid& sweep, double amplitude,
                         double offset, double visibility) {
    return synthesize({fiber, dfg, sfg, sweep, amplitude, offset, visibility});
}

Interferogram calibrate(const std::vector<std::pair<double, double>>& time_trace,
                        const SweepGrid& sweep, double duration_tolerance) {
    sweep.validate();
    if (time_trace.size() < 2) throw CalibrationError("calibrate: need at least 2 samples");
    const double t0 = time_trace.front().first;
    const double duration = time_trace.back().first - t0;
    const double expected = sweep.duration_s();
    if (!(duration > 0.0)) throw CalibrationError("calibrate: time axis must be increasing");
    if (std::abs(duration - expected) > duration_tolerance * expected)
        throw CalibrationError("calibrate: trace duration " + std::to_string(duration) +
                               " s disagrees with the sweep ramp (" + std::to_string(expected) +
                               " s)");

    Interferogram trace;
    trace.time_s.reserve(time_trace.size());
    trace.lambda_nm.reserve(time_trace.size());
    trace.intensity.reserve(time_trace.size());
    for (const auto& [t, intensity] : time_trace) {
        trace.time_s.push_back(t);
        trace.lambda_nm.push_back(sweep.lambda_start.nm() +
                                  sweep.speed_nm_per_s * (t - t0));
        trace.intensity.push_back(intensity);
    }
    trace.validate();
    trace.meta["calibration"] = {{"lambda_start_nm", sweep.lambda_start.nm()},
                                 {"speed_nm_s", sweep.speed_nm_per_s},
                                 {"duration_s", duration}};
    return trace;
}

Interferogram add_noise(const Interferogram& clean, const NoiseConfig& cfg,
                        std::uint64_t scan_index, double scan_start_s) {
    cfg.validate();
    clean.validate();

    Interferogram noisy = clean;
    if (cfg.drift_rad_per_s != 0.0) {
        if (!clean.meta.contains("synthesis"))
            throw ConfigError("add_noise: phase drift needs synthesis metadata on the trace");
        const SynthesisModel model = SynthesisModel::from_json(clean.meta.at("synthesis"));
        evaluate_model(model, make_sweep(model.sweep), cfg.drift_rad_per_s, scan_start_s,
                       noisy.intensity);
    }

    const double full_scale = *std::max_element(noisy.intensity.begin(), noisy.intensity.end());
    CounterRng rng(cfg.seed, scan_index);
    apply_noise(noisy.intensity, full_scale, cfg, rng);

    noisy.meta["noise"] = {{"additive_sigma", cfg.additive_sigma},
                           {"shot_scale", cfg.shot_scale},
                           {"drift_rad_per_s", cfg.drift_rad_per_s},
                           {"seed", cfg.seed},
                           {"scan_index", scan_index},
                           {"scan_start_s", scan_start_s}};
    return noisy;
}

Interferogram synthesize_noisy(const SynthesisModel& model, const NoiseConfig& cfg,
                               std::uint64_t scan_index, double scan_start_s) {
    return add_noise(synthesize(model), cfg, scan_index, scan_start_s);
}

double expected_fringe_count(const FiberUnderTest& fiber, const SweepGrid& sweep) {
    sweep.validate();
    const double phase_start =
        quantum_like_phase(fiber, detuning_from_reference(sweep.lambda_start, fiber.reference));
    const double phase_stop =
        quantum_like_phase(fiber, detuning_from_reference(sweep.lambda_stop, fiber.reference));
    return std::abs(phase_start - phase_stop) / kTwoPi;
}

}  // namespace qlni
