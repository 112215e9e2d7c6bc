#pragma once

#include <cstddef>
#include <vector>

#include "qlni/units.hpp"

namespace qlni {

/// Linear laser sweep: the wavelength ramps from lambda_start to lambda_stop
/// at a constant rate. The ramp trigger is assumed ideal, so wavelength is
/// exactly linear in time.
struct SweepGrid {
    Wavelength lambda_start = Wavelength::from_nm(1535.0);
    Wavelength lambda_stop = Wavelength::from_nm(1545.0);
    std::size_t n_samples = 10000;
    double speed_nm_per_s = 100.0;  // ramp rate; config key speed_nm_s

    void validate() const;   // throws ConfigError
    double duration_s() const {
        return (lambda_stop.nm() - lambda_start.nm()) / speed_nm_per_s;
    }
};

struct SweepPoint {
    double time_s;
    Wavelength lambda;
};

/// omega = 2 pi c / lambda.
AngularFrequency wavelength_to_omega(Wavelength lambda);

/// lambda = 2 pi c / omega.
Wavelength omega_to_wavelength(AngularFrequency omega);

/// Idler wavelength from energy conservation omega_s + omega_i = omega_p,
/// i.e. 1/lambda_i = 1/lambda_p - 1/lambda_s. At the degeneracy point
/// (omega_s == omega_p / 2) the idler equals the signal wavelength and is
/// returned unchanged. Throws DomainError when omega_s >= omega_p.
Wavelength idler_wavelength(Wavelength lambda_p, Wavelength lambda_s);

/// omega(lambda) - omega(lambda_p) / 2. Throws DomainError when lambda lies
/// outside the physical band (omega >= omega_p).
Detuning detuning_from_degeneracy(Wavelength lambda, Wavelength lambda_p);

/// omega(lambda) - omega(reference), with reference the expansion point
/// 2 * lambda_p. Bit-identical to detuning_from_degeneracy when reference is
/// exactly twice the pump wavelength.
Detuning detuning_from_reference(Wavelength lambda, Wavelength reference);

/// n_samples points with wavelength linear in time; endpoints are exact and
/// the total duration equals (lambda_stop - lambda_start) / speed.
std::vector<SweepPoint> make_sweep(const SweepGrid& grid);

}  // namespace qlni
