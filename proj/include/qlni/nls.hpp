#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qlni/errors.hpp"

namespace qlni {

/// Fills residuals (model minus data, length n) and the n x p Jacobian
/// (row-major) at the given parameter vector.
using NlsModelFn = std::function<void(const std::vector<double>& params,
                                      std::vector<double>& residuals,
                                      std::vector<double>& jacobian)>;

struct NlsOptions {
    int max_iterations = 200;
    double rss_rel_tol = 1e-10;   // convergence: relative rss change on an accepted step
    double rss_abs_floor = 0.0;   // rss at or below this counts as converged (0 disables)
    double initial_damping = 1e-3;
};

struct NlsResult {
    std::vector<double> params;
    std::vector<double> covariance;    // p x p row-major: rss/(n-p) * (JtJ)^-1
    double rss = 0.0;
    int iterations = 0;                // accepted steps
    bool converged = false;
    std::vector<double> rss_history;   // rss after each accepted step (non-increasing)
};

/// Damped Gauss-Newton (Levenberg-Marquardt). Accepted steps never increase
/// the residual sum of squares; convergence is declared when the relative
/// rss change over an accepted step drops below rss_rel_tol. A singular
/// normal matrix raises EstimationError naming the degenerate parameter
/// (param_names, when given, must have one entry per parameter).
NlsResult levenberg_marquardt(const NlsModelFn& model, std::vector<double> initial,
                              std::size_t n_residuals, const NlsOptions& options = {},
                              const std::vector<std::string>* param_names = nullptr);

}  // namespace qlni
