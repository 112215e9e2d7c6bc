#include "qlni/spectral.hpp"

#include <numbers>

namespace qlni {

namespace {
constexpr double kTwoPiC = 2.0 * std::numbers::pi * kSpeedOfLight;
}

void SweepGrid::validate() const {
    if (!(lambda_start < lambda_stop))
        throw ConfigError("sweep: lambda_start must be below lambda_stop");
    if (n_samples < 2)
        throw ConfigError("sweep: n_samples must be at least 2");
    if (!(std::isfinite(speed_nm_per_s) && speed_nm_per_s > 0.0))
        throw ConfigError("sweep: speed must be positive");
}

AngularFrequency wavelength_to_omega(Wavelength lambda) {
    return {kTwoPiC / lambda.m()};
}

Wavelength omega_to_wavelength(AngularFrequency omega) {
    if (!(std::isfinite(omega.rad_per_s) && omega.rad_per_s > 0.0))
        throw DomainError("angular frequency must be positive and finite");
    return Wavelength::from_m(kTwoPiC / omega.rad_per_s);
}

Wavelength idler_wavelength(Wavelength lambda_p, Wavelength lambda_s) {
    const double omega_p = wavelength_to_omega(lambda_p).rad_per_s;
    const double omega_s = wavelength_to_omega(lambda_s).rad_per_s;
    if (omega_s >= omega_p)
        throw DomainError("no idler exists: signal frequency >= pump frequency");
    const double omega_i = omega_p - omega_s;
    if (omega_i == omega_s)  // degeneracy: idler coincides with the signal
        return lambda_s;
    return omega_to_wavelength({omega_i});
}

Detuning detuning_from_degeneracy(Wavelength lambda, Wavelength lambda_p) {
    const double omega = wavelength_to_omega(lambda).rad_per_s;
    const double omega_p = wavelength_to_omega(lambda_p).rad_per_s;
    if (omega >= omega_p)
        throw DomainError("wavelength outside the signal/idler band");
    return {omega - omega_p / 2.0};
}

Detuning detuning_from_reference(Wavelength lambda, Wavelength reference) {
    const double omega = wavelength_to_omega(lambda).rad_per_s;
    const double omega_0 = wavelength_to_omega(reference).rad_per_s;
    if (omega >= 2.0 * omega_0)
        throw DomainError("wavelength outside the signal/idler band");
    return {omega - omega_0};
}

std::vector<SweepPoint> make_sweep(const SweepGrid& grid) {
    grid.validate();
    const double duration = grid.duration_s();
    const double span_nm = grid.lambda_stop.nm() - grid.lambda_start.nm();
    const std::size_t n = grid.n_samples;

    std::vector<SweepPoint> points;
    points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
        Wavelength lambda =
            (k == 0)       ? grid.lambda_start
            : (k == n - 1) ? grid.lambda_stop
                           : Wavelength::from_nm(grid.lambda_start.nm() + span_nm * frac);
        points.push_back({duration * frac, lambda});
    }
    return points;
}

}  // namespace qlni
