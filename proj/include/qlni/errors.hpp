#pragma once

#include <stdexcept>

namespace qlni {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Physically meaningless input (non-positive wavelength, eta outside [0,1], ...).
struct DomainError : Error {
    using Error::Error;
};

/// Invalid or inconsistent configuration, including malformed input files.
struct ConfigError : Error {
    using Error::Error;
};

/// Acquired trace disagrees with the configured sweep.
struct CalibrationError : Error {
    using Error::Error;
};

/// Initial-guess preprocessing or fit linear algebra failed.
struct EstimationError : Error {
    using Error::Error;
};

/// Fock-space truncation too small for the requested amplitude.
struct TruncationError : Error {
    using Error::Error;
};

}  // namespace qlni
