#include "qlni/phase_matching.hpp"

#include <algorithm>
#include <cmath>

namespace qlni {

void ParametricProcess::validate() const {
    if (!(std::isfinite(crystal_length_m) && crystal_length_m > 0.0))
        throw DomainError("process: crystal length must be positive");
    if (!std::isfinite(mismatch_slope))
        throw DomainError("process: mismatch slope must be finite");
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double half_max_argument() {
    // root of sinc(x) = 1/sqrt(2) in (1, 2), bisected once and cached
    static const double root = [] {
        const double target = 1.0 / std::sqrt(2.0);
        double lo = 1.0, hi = 2.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (sinc(mid) > target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return root;
}

double delta_k(const ParametricProcess& proc, Wavelength lambda_s) {
    const double dw = wavelength_to_omega(lambda_s).rad_per_s -
                      wavelength_to_omega(proc.center).rad_per_s;
    return proc.mismatch_slope * dw;
}

double acceptance(const ParametricProcess& proc, Wavelength lambda_s) {
    const double s = sinc(delta_k(proc, lambda_s) * proc.crystal_length_m / 2.0);
    return s * s;
}

double slope_from_fwhm(Wavelength center, double fwhm_nm, double crystal_length_m) {
    if (!(std::isfinite(fwhm_nm) && fwhm_nm > 0.0))
        throw DomainError("process: acceptance fwhm must be positive");
    if (!(std::isfinite(crystal_length_m) && crystal_length_m > 0.0))
        throw DomainError("process: crystal length must be positive");
    const double w_lo = wavelength_to_omega(Wavelength::from_nm(center.nm() + fwhm_nm / 2.0)).rad_per_s;
    const double w_hi = wavelength_to_omega(Wavelength::from_nm(center.nm() - fwhm_nm / 2.0)).rad_per_s;
    const double half_width = 0.5 * (w_hi - w_lo);
    return 2.0 * half_max_argument() / (crystal_length_m * half_width);
}

double shg_suppression(const ParametricProcess& shg, const SweepGrid& sweep) {
    shg.validate();
    sweep.validate();
    if (shg.center >= sweep.lambda_start && shg.center <= sweep.lambda_stop) return 1.0;

    const std::size_t n = std::max<std::size_t>(sweep.n_samples, 2001);
    const double lo = sweep.lambda_start.nm();
    const double span = sweep.lambda_stop.nm() - lo;
    double max_a = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
        max_a = std::max(max_a, acceptance(shg, Wavelength::from_nm(lo + span * frac)));
    }
    return max_a / acceptance(shg, shg.center);
}

double envelope_product(const ParametricProcess& dfg, const ParametricProcess& sfg,
                        Wavelength lambda_s) {
    return acceptance(dfg, lambda_s) * acceptance(sfg, lambda_s);
}

AcceptanceCurve sample_acceptance(const ParametricProcess& proc, Wavelength lambda_min,
                                  Wavelength lambda_max, std::size_t n_samples) {
    proc.validate();
    if (!(lambda_min < lambda_max) || n_samples < 2)
        throw ConfigError("acceptance grid: need lambda_min < lambda_max and >= 2 samples");
    AcceptanceCurve curve;
    curve.samples.reserve(n_samples);
    const double lo = lambda_min.nm();
    const double span = lambda_max.nm() - lo;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(n_samples - 1);
        const Wavelength lambda = Wavelength::from_nm(lo + span * frac);
        curve.samples.push_back({lambda, acceptance(proc, lambda)});
    }
    return curve;
}

double arm_efficiency_ratio(const ParametricProcess& sfg1, const ParametricProcess& sfg2,
                            Wavelength lambda_s) {
    const double a1 = acceptance(sfg1, lambda_s);
    const double a2 = acceptance(sfg2, lambda_s);
    if (a1 + a2 == 0.0) return 0.5;  // no converted light in either arm
    return a1 / (a1 + a2);
}

double visibility_from_efficiency(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw DomainError("visibility: efficiency ratio must lie in [0, 1]");
    return 2.0 * std::sqrt(eta * (1.0 - eta));
}

}  // namespace qlni
