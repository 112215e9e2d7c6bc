#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qlni/interferogram.hpp"

namespace qlni {

/// A trace file either carries its calibrated wavelength axis
/// (time_s,lambda_nm,intensity) or is a raw acquisition (time_s,intensity)
/// that still needs calibration against a sweep.
struct LoadedTrace {
    bool calibrated = false;
    Interferogram trace;                          // valid when calibrated
    std::vector<std::pair<double, double>> raw;   // valid when not
};

/// Decimal text, 15 significant digits, header row time_s,lambda_nm,intensity.
void write_trace_csv(const std::filesystem::path& path, const Interferogram& trace);

/// Throws ConfigError naming the offending row on any malformed content.
LoadedTrace read_trace_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace qlni
