#include "qlni/noon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlni/nls.hpp"

namespace qlni {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double FockVector::norm_squared() const {
    double s = 0.0;
    for (const auto& c : coefficients) s += std::norm(c);
    return s;
}

double FockVector::mean_photon_number() const {
    double s = 0.0;
    for (std::size_t n = 0; n < coefficients.size(); ++n)
        s += static_cast<double>(n) * std::norm(coefficients[n]);
    return s;
}

void ConversionSpec::validate() const {
    if (kind == ConversionKind::HarmonicN && harmonic_order < 1)
        throw DomainError("conversion: harmonic order must be >= 1");
    if (!(efficiency_ratio >= 0.0 && efficiency_ratio <= 1.0))
        throw DomainError("conversion: efficiency ratio must lie in [0, 1]");
}

double PathState::norm_squared() const { return std::norm(amp_short) + std::norm(amp_long); }

FockVector coherent_fock(std::complex<double> alpha, std::size_t n_max) {
    if (n_max < 1) throw TruncationError("coherent_fock: n_max must be >= 1");
    const double mag2 = std::norm(alpha);
    if (mag2 > static_cast<double>(n_max) / 4.0)
        throw TruncationError("coherent_fock: truncation too small, need |alpha|^2 <= n_max/4");

    FockVector out;
    out.coefficients.resize(n_max + 1);
    if (mag2 == 0.0) {
        out.coefficients[0] = 1.0;
        return out;
    }
    const double log_mag = 0.5 * std::log(mag2);
    const double phase = std::arg(alpha);
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double nn = static_cast<double>(n);
        const double log_abs = -0.5 * mag2 + nn * log_mag - 0.5 * std::lgamma(nn + 1.0);
        out.coefficients[n] = std::polar(std::exp(log_abs), nn * phase);
    }
    return out;
}

std::complex<double> harmonic_phase_map(std::complex<double> alpha_in, unsigned harmonic_order,
                                        double conversion_gain) {
    if (harmonic_order < 1) throw DomainError("harmonic_phase_map: order must be >= 1");
    if (!(conversion_gain >= 0.0) || !std::isfinite(conversion_gain))
        throw DomainError("harmonic_phase_map: gain must be non-negative and finite");
    const double mag = std::abs(alpha_in);
    if (mag == 0.0) return {0.0, 0.0};
    return std::polar(conversion_gain * mag, static_cast<double>(harmonic_order) * std::arg(alpha_in));
}

PathState interferometer_state(double phi, const ConversionSpec& spec) {
    spec.validate();
    const double eta = spec.efficiency_ratio;
    const double theta = (spec.kind == ConversionKind::HarmonicN)
                             ? static_cast<double>(spec.harmonic_order) * phi
                             : phi;  // phi already carries the summed signal+idler phase
    return {std::sqrt(eta), std::polar(std::sqrt(1.0 - eta), theta)};
}

ProbabilityPair detection_probability(const PathState& state) {
    if (std::abs(state.norm_squared() - 1.0) > 1e-9)
        throw DomainError("detection_probability: state is not normalized");
    const double p_plus = 0.5 * std::norm(state.amp_short + state.amp_long);
    const double p_minus = 0.5 * std::norm(state.amp_short - state.amp_long);
    return {p_plus, p_minus};
}

double fringe_period(const ConversionSpec& spec) {
    spec.validate();
    if (spec.kind != ConversionKind::HarmonicN)
        throw DomainError("fringe_period: defined for HarmonicN conversions");

    // dense scan of p_plus over one full turn of phi
    const std::size_t m = 4096;
    std::vector<double> phi(m), prob(m);
    for (std::size_t j = 0; j < m; ++j) {
        phi[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
        prob[j] = detection_probability(interferometer_state(phi[j], spec)).p_plus;
    }

    // coarse frequency from the dominant DFT bin, then refine a full cosine fit
    double best_power = -1.0;
    std::size_t best_k = 1;
    for (std::size_t k = 1; k <= 64; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double ang = kTwoPi * static_cast<double>(k * j) / static_cast<double>(m);
            re += prob[j] * std::cos(ang);
            im -= prob[j] * std::sin(ang);
        }
        const double power = re * re + im * im;
        if (power > best_power) {
            best_power = power;
            best_k = k;
        }
    }

    double mean = 0.0, lo = prob[0], hi = prob[0];
    for (double v : prob) {
        mean += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    mean /= static_cast<double>(m);

    // model: a + b cos(nu phi + delta)
    auto model = [&](const std::vector<double>& p, std::vector<double>& r,
                     std::vector<double>& jac) {
        const double a = p[0], b = p[1], nu = p[2], delta = p[3];
        for (std::size_t j = 0; j < m; ++j) {
            const double arg = nu * phi[j] + delta;
            const double c = std::cos(arg), s = std::sin(arg);
            r[j] = a + b * c - prob[j];
            jac[j * 4 + 0] = 1.0;
            jac[j * 4 + 1] = c;
            jac[j * 4 + 2] = -b * s * phi[j];
            jac[j * 4 + 3] = -b * s;
        }
    };
    NlsOptions options;
    options.rss_rel_tol = 1e-14;
    options.rss_abs_floor = 1e-24 * static_cast<double>(m);
    const std::vector<std::string> names = {"baseline", "contrast", "frequency", "phase"};
    NlsResult fitted = levenberg_marquardt(
        model, {mean, 0.5 * (hi - lo), static_cast<double>(best_k), 0.0}, m, options, &names);
    if (!fitted.converged)
        throw EstimationError("fringe_period: cosine fit did not converge");
    return kTwoPi / std::abs(fitted.params[2]);
}

double scan_visibility(const ConversionSpec& spec) {
    spec.validate();
    const unsigned n_order = (spec.kind == ConversionKind::HarmonicN) ? spec.harmonic_order : 1;
    // grid hits the fringe extrema phi = j pi / N exactly
    const std::size_t m = 512 * n_order;
    double lo = 1.0, hi = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
        const double p = detection_probability(interferometer_state(phi, spec)).p_plus;
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    return (hi - lo) / (hi + lo);
}

}  // namespace qlni
