#pragma once

#include <cmath>
#include <compare>

#include "qlni/errors.hpp"

namespace qlni {

/// Exact SI speed of light. All wavelengths are vacuum wavelengths.
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Vacuum wavelength. The nm value is the stored representation, so a
/// wavelength written to a config or trace file and read back is
/// bit-identical; SI meters are derived where the physics needs them.
class Wavelength {
public:
    static Wavelength from_nm(double nm) { return Wavelength(nm); }
    static Wavelength from_m(double meters) { return Wavelength(meters * 1e9); }

    double m() const { return nanometers_ * 1e-9; }
    double nm() const { return nanometers_; }

    friend bool operator==(Wavelength a, Wavelength b) = default;
    friend auto operator<=>(Wavelength a, Wavelength b) = default;

private:
    explicit Wavelength(double nanometers) : nanometers_(nanometers) {
        if (!(std::isfinite(nanometers_) && nanometers_ > 0.0))
            throw DomainError("wavelength must be positive and finite");
    }
    double nanometers_;
};

/// Optical angular frequency, rad/s.
struct AngularFrequency {
    double rad_per_s = 0.0;
};

/// Signed angular-frequency offset from the degeneracy point omega_0 = omega_p / 2.
struct Detuning {
    double rad_per_s = 0.0;
};

}  // namespace qlni
