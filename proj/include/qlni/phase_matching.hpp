#pragma once

#include <cstddef>
#include <vector>

#include "qlni/spectral.hpp"
#include "qlni/units.hpp"

namespace qlni {

enum class ProcessKind {
    Dfg,      // idler preparation stage
    SfgArm1,  // upconversion in the short arm
    SfgArm2,  // upconversion in the long arm
    Shg,      // parasitic second harmonic of the tunable laser
};

/// Three-wave process with a linear phase-mismatch model:
/// delta_k(lambda) = mismatch_slope * (omega(lambda) - omega(center)).
/// The slope is usually derived from an acceptance FWHM quoted in nm.
struct ParametricProcess {
    ProcessKind kind = ProcessKind::Dfg;
    Wavelength center = Wavelength::from_nm(1540.0);
    double mismatch_slope = 0.0;  // (rad/m) per (rad/s)
    double crystal_length_m = 0.01;

    void validate() const;
};

struct AcceptanceSample {
    Wavelength lambda;
    double transmission;
};

/// Sampled conversion-efficiency spectrum, normalized to 1 at the center.
struct AcceptanceCurve {
    std::vector<AcceptanceSample> samples;
};

/// sin(x)/x with sinc(0) = 1.
double sinc(double x);

/// Positive x where sinc^2(x) = 1/2 (~1.39156), solved numerically once.
double half_max_argument();

double delta_k(const ParametricProcess& proc, Wavelength lambda_s);

/// sinc^2(delta_k * L / 2); 1 at the center, first null at delta_k * L = 2 pi.
double acceptance(const ParametricProcess& proc, Wavelength lambda_s);

/// Mismatch slope such that the acceptance half-maximum points sit at
/// center +- fwhm/2 (symmetric in frequency, quoted in nm at the center).
double slope_from_fwhm(Wavelength center, double fwhm_nm, double crystal_length_m);

/// Max over the sweep range of acceptance(shg, lambda) / acceptance at the
/// center; 1 when the sweep covers the center. Used to validate that a
/// configured sweep keeps the parasitic second harmonic near zero.
double shg_suppression(const ParametricProcess& shg, const SweepGrid& sweep);

/// acceptance(dfg, lambda) * acceptance(sfg, lambda).
double envelope_product(const ParametricProcess& dfg, const ParametricProcess& sfg,
                        Wavelength lambda_s);

AcceptanceCurve sample_acceptance(const ParametricProcess& proc, Wavelength lambda_min,
                                  Wavelength lambda_max, std::size_t n_samples);

/// Per-wavelength arm balance eta = a1 / (a1 + a2) from the two arm acceptances.
double arm_efficiency_ratio(const ParametricProcess& sfg1, const ParametricProcess& sfg2,
                            Wavelength lambda_s);

/// Fringe visibility 2 sqrt(eta (1 - eta)) for a given arm balance.
double visibility_from_efficiency(double eta);

}  // namespace qlni
