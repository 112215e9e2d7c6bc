#include "qlni/dispersion.hpp"

#include <cmath>
#include <numbers>

namespace qlni {

namespace {
constexpr double kTwoPiC = 2.0 * std::numbers::pi * kSpeedOfLight;
// s/m^2  ->  ps/(nm km):  1e12 ps/s / (1e9 nm/m * 1e-3 km/m)
constexpr double kSiToPsNmKm = 1e6;
}  // namespace

void FiberUnderTest::validate() const {
    if (!(std::isfinite(length_m) && length_m > 0.0))
        throw DomainError("fiber: length must be positive");
    if (!(std::isfinite(beta0) && std::isfinite(beta1) && std::isfinite(beta2) &&
          std::isfinite(beta3)))
        throw DomainError("fiber: dispersion coefficients must be finite");
}

double taylor_phase(const FiberUnderTest& fiber, Detuning delta, int max_order) {
    if (max_order < 0 || max_order > 3)
        throw DomainError("taylor_phase: unsupported order (stored coefficients cover 0..3)");
    const double dw = delta.rad_per_s;
    // even and odd orders accumulate separately: the odd part then negates
    // exactly under dw -> -dw, so the two-sided sum cancels to rounding of
    // the even part alone
    double even = fiber.beta0;
    double odd = 0.0;
    if (max_order >= 1) odd = fiber.beta1 * dw;
    if (max_order >= 2) even += fiber.beta2 * (dw * dw) / 2.0;
    if (max_order >= 3) odd += fiber.beta3 * ((dw * dw) * dw) / 6.0;
    return fiber.length_m * even + fiber.length_m * odd;
}

double quantum_like_phase(const FiberUnderTest& fiber, Detuning delta) {
    const double dw2 = delta.rad_per_s * delta.rad_per_s;
    return fiber.length_m * (2.0 * fiber.beta0 + fiber.beta2 * dw2);
}

double classical_phase(const FiberUnderTest& fiber, Detuning delta) {
    return taylor_phase(fiber, delta, 3);
}

DispersionParameter d_from_beta2(double beta2_s2_per_m, Wavelength lambda0) {
    const double lam = lambda0.m();
    return {-kTwoPiC * beta2_s2_per_m / (lam * lam) * kSiToPsNmKm};
}

double beta2_from_d(DispersionParameter d, Wavelength lambda0) {
    const double lam = lambda0.m();
    return -d.ps_per_nm_km / kSiToPsNmKm * (lam * lam) / kTwoPiC;
}

}  // namespace qlni
