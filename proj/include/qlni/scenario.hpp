#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "qlni/estimator.hpp"
#include "qlni/interferogram.hpp"

namespace qlni {

/// Full description of a simulated measurement, read from a flat sectioned
/// key-value file with unit-suffixed keys. Every block has defaults, so an
/// empty config is a valid scenario. Environment variables of the form
/// QLNI_<SECTION>_<KEY> override file values.
struct ScenarioConfig {
    Wavelength lambda_p = Wavelength::from_nm(780.3);
    FiberUnderTest fiber;
    ParametricProcess dfg;
    ParametricProcess sfg1;
    ParametricProcess sfg2;
    ParametricProcess shg;
    SweepGrid sweep;

    double amplitude = 1.0;
    double offset = 0.1;
    double visibility = 1.0;

    NoiseConfig noise;
    FitOptions fit;

    // acceptance-curve emission grid and the parasitic-SHG pass threshold
    Wavelength acceptance_min = Wavelength::from_nm(1500.0);
    Wavelength acceptance_max = Wavelength::from_nm(1600.0);
    std::size_t acceptance_samples = 2001;
    double shg_threshold = 0.1;

    std::size_t mc_scans = 1000;
    int threads = 1;

    static ScenarioConfig defaults();
    static ScenarioConfig from_ini(const std::string& text, bool apply_env = true);
    static ScenarioConfig load(const std::filesystem::path& path, bool apply_env = true);

    /// Canonical resolved dump; parsing it back reproduces this config exactly.
    std::string to_ini() const;
    nlohmann::json to_json() const;

    /// Forward model for one scan: arm 1 carries the fringe envelope and the
    /// arm balance folds into the effective visibility.
    SynthesisModel synthesis_model() const;
};

}  // namespace qlni
