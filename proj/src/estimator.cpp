#include "qlni/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

#include "qlni/fft.hpp"
#include "qlni/nls.hpp"
#include "qlni/spectral.hpp"

namespace qlni {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double quantile(std::vector<double> sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

double wrap_phase(double phi) {
    phi = std::fmod(phi, kTwoPi);
    if (phi > std::numbers::pi) phi -= kTwoPi;
    if (phi <= -std::numbers::pi) phi += kTwoPi;
    return phi;
}

struct TraceGeometry {
    std::vector<Wavelength> lambdas;
    std::vector<double> u;  // dw^2 per sample
};

TraceGeometry trace_geometry(const Interferogram& trace, Wavelength reference) {
    TraceGeometry g;
    g.lambdas.reserve(trace.size());
    g.u.reserve(trace.size());
    for (double nm : trace.lambda_nm) {
        const Wavelength lambda = Wavelength::from_nm(nm);
        const double dw = detuning_from_reference(lambda, reference).rad_per_s;
        g.lambdas.push_back(lambda);
        g.u.push_back(dw * dw);
    }
    return g;
}

}  // namespace

void FitModel::validate() const {
    if (!(std::isfinite(amplitude) && amplitude > 0.0))
        throw DomainError("fit model: amplitude must be positive");
    if (!(std::isfinite(offset) && offset >= 0.0))
        throw DomainError("fit model: offset must be >= 0");
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw DomainError("fit model: visibility must lie in [0, 1]");
    if (!std::isfinite(beta2L) || !std::isfinite(phi0))
        throw DomainError("fit model: beta2L and phi0 must be finite");
    dfg.validate();
    sfg.validate();
}

double FitResult::variance_of(const std::string& name) const {
    for (std::size_t i = 0; i < free_names.size(); ++i)
        if (free_names[i] == name) return covariance[i * free_names.size() + i];
    throw EstimationError("fit result: unknown parameter " + name);
}

namespace {

struct ToneEstimate {
    bool ok = false;
    std::string why;
    double amplitude = 0.0;
    double offset = 0.0;
    double visibility = 0.0;
    double beta2L = 0.0;
    double phi0 = 0.0;
};

// Data-driven fringe localization: envelope-normalize, resample uniformly in
// u = dw^2 (the fringe becomes a single tone there) and take the dominant
// nonzero spectral peak.
ToneEstimate spectral_tone(const Interferogram& trace, const TraceGeometry& geom,
                           const ParametricProcess& dfg, const ParametricProcess& sfg) {
    ToneEstimate tone;
    const std::size_t n = trace.size();
    if (n < 64) {
        tone.why = "too few samples";
        return tone;
    }

    std::vector<double> sorted_i = trace.intensity;
    std::sort(sorted_i.begin(), sorted_i.end());
    const double q02 = quantile(sorted_i, 0.02);
    const double q98 = quantile(sorted_i, 0.98);
    tone.offset = std::max(q02, 0.0);
    tone.amplitude = q98 - q02;
    if (!(tone.amplitude > 0.0)) {
        tone.why = "no fringes detected (flat trace)";
        return tone;
    }

    // envelope-normalized fringe samples, sorted by u
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return geom.u[a] < geom.u[b]; });

    std::vector<double> u_sorted(n), fringe(n);
    std::vector<double> contrast;
    contrast.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t idx = order[k];
        const double env = envelope_product(dfg, sfg, geom.lambdas[idx]);
        u_sorted[k] = geom.u[idx];
        const double denom = std::max(tone.amplitude * env, 1e-300);
        fringe[k] = (trace.intensity[idx] - tone.offset) / denom;
        if (env > 1e-3) contrast.push_back(fringe[k]);
    }
    if (contrast.size() < 16) {
        tone.why = "sweep misses the acceptance envelopes";
        return tone;
    }
    std::sort(contrast.begin(), contrast.end());
    const double k02 = quantile(contrast, 0.02);
    const double k98 = quantile(contrast, 0.98);
    tone.visibility =
        std::clamp((k98 - k02) / std::max(k98 + k02, 1e-12), 0.05, 1.0);

    // resample onto a uniform grid in u; 4096 points resolve any fringe count
    // the sweep can carry
    const std::size_t m = std::min<std::size_t>(n, 4096);
    const double u_lo = u_sorted.front();
    const double span = u_sorted.back() - u_lo;
    if (!(span > 0.0)) {
        tone.why = "degenerate detuning span";
        return tone;
    }
    const double du = span / static_cast<double>(m - 1);

    std::vector<double> uniform(m);
    double mean = 0.0;
    for (std::size_t k = 0, seg = 0; k < m; ++k) {
        const double u = u_lo + du * static_cast<double>(k);
        while (seg + 2 < n && u_sorted[seg + 1] < u) ++seg;
        const double width = u_sorted[seg + 1] - u_sorted[seg];
        const double frac = width > 0.0 ? std::clamp((u - u_sorted[seg]) / width, 0.0, 1.0) : 0.0;
        uniform[k] = fringe[seg] * (1.0 - frac) + fringe[seg + 1] * frac;
        mean += uniform[k];
    }
    mean /= static_cast<double>(m);

    // Hann window, zero-padded FFT, dominant nonzero peak
    const std::size_t padded = next_power_of_two(2 * m);
    std::vector<std::complex<double>> spectrum(padded, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double w =
            0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(m - 1));
        spectrum[k] = (uniform[k] - mean) * w;
    }
    fft_radix2(spectrum);

    // the candidate must carry at least 4 fringes across the span
    const std::size_t k_min = static_cast<std::size_t>(
        std::ceil(4.0 * static_cast<double>(padded) / static_cast<double>(m - 1)));
    const std::size_t k_max = padded / 2;
    if (k_min + 2 >= k_max) {
        tone.why = "trace too short";
        return tone;
    }

    double full_power = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) full_power += std::norm(spectrum[k]);
    double peak_power = 0.0;
    std::size_t peak_bin = 0;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        const double p = std::norm(spectrum[k]);
        if (p > peak_power) {
            peak_power = p;
            peak_bin = k;
        }
    }
    double rms = 0.0;
    for (std::size_t k = 0; k < m; ++k) rms += (uniform[k] - mean) * (uniform[k] - mean);
    rms = std::sqrt(rms / static_cast<double>(m));
    // a genuine fringe tone dominates the whole (DC-free) spectrum; envelope
    // residue and broadband noise do not
    if (rms < 1e-4 || peak_bin == 0 || peak_power < 0.25 * full_power) {
        tone.why = "no fringes detected";
        return tone;
    }

    // parabolic refinement on the log magnitude
    double bin = static_cast<double>(peak_bin);
    if (peak_bin > k_min && peak_bin < k_max) {
        const double m0 = 0.5 * std::log(std::norm(spectrum[peak_bin - 1]) + 1e-300);
        const double m1 = 0.5 * std::log(peak_power + 1e-300);
        const double m2 = 0.5 * std::log(std::norm(spectrum[peak_bin + 1]) + 1e-300);
        const double denom = m0 - 2.0 * m1 + m2;
        if (denom < 0.0) bin += 0.5 * (m0 - m2) / denom;
    }
    tone.beta2L = kTwoPi * bin / (static_cast<double>(padded) * du);

    // phase by projection onto the estimated tone
    double proj_cos = 0.0, proj_sin = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double arg = tone.beta2L * u_sorted[k];
        const double centered = fringe[k] - 0.5;
        proj_cos += centered * std::cos(arg);
        proj_sin += centered * std::sin(arg);
    }
    tone.phi0 = std::atan2(-proj_sin, proj_cos);
    tone.ok = true;
    return tone;
}

}  // namespace

FitModel initial_guess(const Interferogram& trace, Wavelength reference,
                       const ParametricProcess& dfg, const ParametricProcess& sfg) {
    trace.validate();
    const TraceGeometry geom = trace_geometry(trace, reference);
    const ToneEstimate tone = spectral_tone(trace, geom, dfg, sfg);
    if (!tone.ok) throw EstimationError("initial_guess: " + tone.why);

    FitModel guess;
    guess.amplitude = tone.amplitude;
    guess.offset = tone.offset;
    guess.visibility = tone.visibility;
    guess.beta2L = tone.beta2L;  // positive candidate; sign resolved by the fit
    guess.phi0 = tone.phi0;
    guess.dfg = dfg;
    guess.sfg = sfg;
    return guess;
}

namespace {

struct FitWorkspace {
    const Interferogram& trace;
    const TraceGeometry& geom;
    const FitModel& base;
    bool fit_envelope;
    std::vector<double> frozen_envelope;

    std::vector<std::string> names() const {
        std::vector<std::string> out = {"amplitude", "offset", "visibility", "beta2L", "phi0"};
        if (fit_envelope) {
            out.insert(out.end(),
                       {"dfg_center_nm", "dfg_slope", "sfg_center_nm", "sfg_slope"});
        }
        return out;
    }

    std::vector<double> pack(const FitModel& m) const {
        std::vector<double> p = {m.amplitude, m.offset, m.visibility, m.beta2L, m.phi0};
        if (fit_envelope) {
            p.push_back(m.dfg.center.nm());
            p.push_back(m.dfg.mismatch_slope);
            p.push_back(m.sfg.center.nm());
            p.push_back(m.sfg.mismatch_slope);
        }
        return p;
    }

    FitModel unpack(const std::vector<double>& p) const {
        FitModel m = base;
        m.amplitude = p[0];
        m.offset = p[1];
        m.visibility = p[2];
        m.beta2L = p[3];
        m.phi0 = p[4];
        if (fit_envelope) {
            m.dfg.center = Wavelength::from_nm(p[5]);
            m.dfg.mismatch_slope = p[6];
            m.sfg.center = Wavelength::from_nm(p[7]);
            m.sfg.mismatch_slope = p[8];
        }
        return m;
    }

    void operator()(const std::vector<double>& p, std::vector<double>& r,
                    std::vector<double>& jac) const {
        const std::size_t n = trace.size();
        const std::size_t np = p.size();
        const double amplitude = p[0], offset = p[1], visibility = p[2];
        const double beta2L = p[3], phi0 = p[4];

        FitModel current;
        if (fit_envelope) current = unpack(p);

        for (std::size_t k = 0; k < n; ++k) {
            const double env = fit_envelope
                                   ? envelope_product(current.dfg, current.sfg, geom.lambdas[k])
                                   : frozen_envelope[k];
            const double arg = beta2L * geom.u[k] + phi0;
            const double c = std::cos(arg), s = std::sin(arg);
            const double half = 0.5 * (1.0 + visibility * c);
            r[k] = offset + amplitude * env * half - trace.intensity[k];
            double* row = &jac[k * np];
            row[0] = env * half;
            row[1] = 1.0;
            row[2] = amplitude * env * 0.5 * c;
            row[3] = -amplitude * env * 0.5 * visibility * s * geom.u[k];
            row[4] = -amplitude * env * 0.5 * visibility * s;
        }
        if (fit_envelope) {
            // envelope columns by central differences; they are frozen by default
            std::vector<double> plus(n), minus(n), jac_unused;
            for (std::size_t i = 5; i < np; ++i) {
                const double h = std::max(std::abs(p[i]) * 1e-6, 1e-12);
                std::vector<double> pp = p, pm = p;
                pp[i] += h;
                pm[i] -= h;
                const FitModel mp = unpack(pp), mm = unpack(pm);
                for (std::size_t k = 0; k < n; ++k) {
                    const double ep = envelope_product(mp.dfg, mp.sfg, geom.lambdas[k]);
                    const double em = envelope_product(mm.dfg, mm.sfg, geom.lambdas[k]);
                    const double arg = beta2L * geom.u[k] + phi0;
                    const double half = 0.5 * (1.0 + visibility * std::cos(arg));
                    jac[k * np + i] = amplitude * half * (ep - em) / (2.0 * h);
                }
            }
        }
    }
};

NlsResult run_single_fit(const FitWorkspace& ws, const FitModel& start,
                         const FitOptions& options, double rss_floor) {
    NlsOptions nls;
    nls.max_iterations = options.max_iterations;
    nls.rss_rel_tol = options.rss_rel_tol;
    nls.rss_abs_floor = rss_floor;
    const std::vector<std::string> names = ws.names();
    return levenberg_marquardt([&ws](const std::vector<double>& p, std::vector<double>& r,
                                     std::vector<double>& jac) { ws(p, r, jac); },
                               ws.pack(start), ws.trace.size(), nls, &names);
}

}  // namespace

FitResult fit(const Interferogram& trace, Wavelength reference, const FitModel& guess,
              const FitOptions& options) {
    trace.validate();
    guess.validate();
    const std::size_t n = trace.size();
    const TraceGeometry geom = trace_geometry(trace, reference);

    FitWorkspace ws{trace, geom, guess, options.fit_envelope, {}};
    if (!options.fit_envelope) {
        ws.frozen_envelope.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            ws.frozen_envelope[k] = envelope_product(guess.dfg, guess.sfg, geom.lambdas[k]);
    }

    const double full_scale =
        *std::max_element(trace.intensity.begin(), trace.intensity.end());
    const double rss_floor =
        (1e-12 * std::max(std::abs(full_scale), 1e-300)) *
        (1e-12 * std::max(std::abs(full_scale), 1e-300)) * static_cast<double>(n);

    auto keep_better = [](NlsResult& best, NlsResult&& alt) {
        // the model is even under a joint beta2L/phi0 sign flip, so ties go
        // to the incumbent (the guess sign)
        const double tie_band = 1e-6 * std::max({best.rss, alt.rss, 1e-300});
        const bool strictly_better =
            (alt.converged && !best.converged) ||
            (alt.converged == best.converged && alt.rss < best.rss - tie_band);
        if (strictly_better) best = std::move(alt);
    };

    NlsResult best = run_single_fit(ws, guess, options, rss_floor);
    if (options.try_both_signs) {
        FitModel mirrored = guess;
        mirrored.beta2L = -guess.beta2L;
        mirrored.phi0 = -guess.phi0;
        keep_better(best, run_single_fit(ws, mirrored, options, rss_floor));
    }

    // A beta2L guess off by more than a fraction of a fringe across the sweep
    // parks the fit in a contrast-collapsed local minimum (visibility -> 0).
    // Restart from the trace's own spectral tone when that happens.
    const double guess_contrast = std::abs(guess.amplitude * guess.visibility);
    const double fitted_contrast = std::abs(best.params[0] * best.params[2]);
    if (!best.converged || fitted_contrast < 0.5 * guess_contrast) {
        const ToneEstimate tone = spectral_tone(trace, geom, guess.dfg, guess.sfg);
        if (tone.ok) {
            FitModel restart = guess;
            restart.amplitude = tone.amplitude;
            restart.offset = tone.offset;
            restart.visibility = tone.visibility;
            const double sign = guess.beta2L < 0.0 ? -1.0 : 1.0;
            restart.beta2L = sign * tone.beta2L;
            restart.phi0 = sign * tone.phi0;
            keep_better(best, run_single_fit(ws, restart, options, rss_floor));
        }
    }

    FitResult result;
    result.model = ws.unpack(best.params);
    result.model.visibility = std::clamp(result.model.visibility, 0.0, 1.0);
    result.model.phi0 = wrap_phase(result.model.phi0);
    result.free_names = ws.names();
    result.covariance = std::move(best.covariance);
    result.rss = best.rss;
    result.iterations = best.iterations;
    result.converged = best.converged;
    result.rss_history = std::move(best.rss_history);
    const std::size_t p = result.free_names.size();
    result.residual_std = std::sqrt(best.rss / static_cast<double>(n > p ? n - p : 1));
    return result;
}

CdEstimate extract_cd(const FitResult& result, double fiber_length_m, Wavelength lambda0) {
    if (!result.converged)
        throw EstimationError("extract_cd: refusing a non-converged fit");
    if (!(fiber_length_m > 0.0) || !std::isfinite(fiber_length_m))
        throw DomainError("extract_cd: fiber length must be positive");

    CdEstimate out;
    out.beta2_s2_m = result.model.beta2L / fiber_length_m;
    out.sigma_beta2_s2_m = std::sqrt(std::max(result.variance_of("beta2L"), 0.0)) / fiber_length_m;
    out.d = d_from_beta2(out.beta2_s2_m, lambda0);
    // |dD/dbeta2| propagation; d_from_beta2 is linear in beta2
    const double slope = std::abs(d_from_beta2(1.0, lambda0).ps_per_nm_km);
    out.sigma_d_ps_nm_km = slope * out.sigma_beta2_s2_m;
    return out;
}

namespace {

void summarize(McSummary& summary) {
    const std::vector<double>& values = summary.cd_values;
    const std::size_t m = values.size();
    summary.n_scans = m;
    if (m == 0) return;

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var = m > 1 ? var / static_cast<double>(m - 1) : 0.0;
    summary.mean = mean;
    summary.std_dev = std::sqrt(var);
    summary.sem = summary.std_dev / std::sqrt(static_cast<double>(m));
    summary.rel_error_percent = 100.0 * summary.sem / std::max(std::abs(mean), 1e-300);

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front(), hi = sorted.back();
    std::size_t n_bins = 1;
    if (hi > lo) {
        const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
        const double h = 2.0 * iqr / std::cbrt(static_cast<double>(m));
        n_bins = h > 0.0 ? static_cast<std::size_t>(std::ceil((hi - lo) / h)) : 1;
        n_bins = std::clamp<std::size_t>(n_bins, 1, 400);
    }
    const double width = hi > lo ? (hi - lo) / static_cast<double>(n_bins) : 1.0;
    const double left = hi > lo ? lo : lo - 0.5;

    summary.bin_edges.resize(n_bins + 1);
    for (std::size_t b = 0; b <= n_bins; ++b)
        summary.bin_edges[b] = left + width * static_cast<double>(b);
    summary.bin_counts.assign(n_bins, 0);
    for (double v : values) {
        std::size_t b = hi > lo ? static_cast<std::size_t>((v - left) / width) : 0;
        if (b >= n_bins) b = n_bins - 1;
        ++summary.bin_counts[b];
    }
    summary.bin_density.resize(n_bins);
    summary.gauss_overlay.resize(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        summary.bin_density[b] = static_cast<double>(summary.bin_counts[b]) /
                                 (static_cast<double>(m) * width);
        const double center = 0.5 * (summary.bin_edges[b] + summary.bin_edges[b + 1]);
        if (summary.std_dev > 0.0) {
            const double z = (center - mean) / summary.std_dev;
            summary.gauss_overlay[b] =
                std::exp(-0.5 * z * z) / (summary.std_dev * std::sqrt(kTwoPi));
        } else {
            summary.gauss_overlay[b] = 0.0;
        }
    }
}

}  // namespace

McSummary monte_carlo(const SynthesisModel& model, const NoiseConfig& noise,
                      std::size_t n_scans, std::uint64_t master_seed, int threads,
                      const FitOptions& options) {
    if (n_scans < 2) throw ConfigError("monte_carlo: need at least 2 scans");
    model.validate();
    noise.validate();

    NoiseConfig cfg = noise;
    cfg.seed = master_seed;
    const Interferogram clean = synthesize(model);
    const double scan_duration = model.sweep.duration_s();

    std::vector<double> cd(n_scans, 0.0);
    std::vector<char> ok(n_scans, 0);

    auto worker = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t idx = lo; idx < hi; ++idx) {
            try {
                const Interferogram trace =
                    add_noise(clean, cfg, idx, static_cast<double>(idx) * scan_duration);
                const FitModel guess =
                    initial_guess(trace, model.fiber.reference, model.dfg, model.sfg);
                const FitResult fitted = fit(trace, model.fiber.reference, guess, options);
                const CdEstimate est =
                    extract_cd(fitted, model.fiber.length_m, model.fiber.reference);
                cd[idx] = est.d.ps_per_nm_km;
                ok[idx] = 1;
            } catch (const EstimationError&) {
                ok[idx] = 0;
            }
        }
    };

    const int n_workers = std::max(1, threads);
    if (n_workers == 1) {
        worker(0, n_scans);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n_scans + static_cast<std::size_t>(n_workers) - 1) /
                                  static_cast<std::size_t>(n_workers);
        for (int t = 0; t < n_workers; ++t) {
            const std::size_t lo = static_cast<std::size_t>(t) * chunk;
            const std::size_t hi = std::min(lo + chunk, n_scans);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    McSummary summary;
    summary.n_requested = n_scans;
    summary.truth_d_ps_nm_km = d_from_beta2(model.fiber.beta2, model.fiber.reference).ps_per_nm_km;
    for (std::size_t idx = 0; idx < n_scans; ++idx) {
        if (ok[idx])
            summary.cd_values.push_back(cd[idx]);
        else
            summary.failed_scans.push_back(idx);
    }
    summarize(summary);
    summary.valid = summary.failed_scans.size() * 20 <= n_scans;  // <= 5% failures
    return summary;
}

}  // namespace qlni
