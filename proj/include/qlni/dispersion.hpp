#pragma once

#include "qlni/units.hpp"

namespace qlni {

/// Dispersive sample in the long interferometer arm, described by a Taylor
/// expansion of the propagation constant about the reference wavelength
/// (twice the pump wavelength). Coefficients are derivatives of the wave
/// vector at the expansion point; the model is truncated at third order.
struct FiberUnderTest {
    double length_m = 10.0;
    double beta0 = 0.0;  // rad/m
    double beta1 = 0.0;  // s/m
    double beta2 = 0.0;  // s^2/m
    double beta3 = 0.0;  // s^3/m
    Wavelength reference = Wavelength::from_nm(1560.6);

    void validate() const;  // throws DomainError
};

/// Wavelength-domain dispersion parameter D at the reference wavelength.
struct DispersionParameter {
    double ps_per_nm_km = 0.0;
};

/// Single-arm accumulated phase L * sum_{n=0..max_order} beta_n dw^n / n!.
/// Orders above 3 are not stored and raise DomainError.
double taylor_phase(const FiberUnderTest& fiber, Detuning delta, int max_order = 3);

/// Summed signal+idler phase under frequency anti-correlation:
/// L * (2 beta0 + beta2 dw^2). Odd orders cancel exactly, so beta1 and beta3
/// never enter.
double quantum_like_phase(const FiberUnderTest& fiber, Detuning delta);

/// Single-beam counterpart, the full cubic Taylor phase
/// L * (beta0 + beta1 dw + beta2 dw^2 / 2 + beta3 dw^3 / 6).
/// Its curvature at dw = 0 is half that of quantum_like_phase.
double classical_phase(const FiberUnderTest& fiber, Detuning delta);

/// D = -2 pi c beta2 / lambda0^2, reported in ps/(nm km).
DispersionParameter d_from_beta2(double beta2_s2_per_m, Wavelength lambda0);

/// Exact inverse of d_from_beta2.
double beta2_from_d(DispersionParameter d, Wavelength lambda0);

}  // namespace qlni
