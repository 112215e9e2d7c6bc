#pragma once

#include <string>
#include <vector>

namespace qlni {

struct PropertyCheck {
    std::string name;
    double deviation = 0.0;  // measured worst-case deviation
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

/// Runs the dispersion-model and interference property suites and reports the
/// measured deviation of each. quantum_phase_fault_scale multiplies the
/// summed-phase model inside the checks; anything other than 1 must break the
/// curvature-ratio and cancellation properties (mutation hook for testing the
/// suite itself).
std::vector<PropertyCheck> run_property_suite(double quantum_phase_fault_scale = 1.0);

bool all_pass(const std::vector<PropertyCheck>& checks);

}  // namespace qlni
