#include "qlni/nls.hpp"

#include <algorithm>
#include <cmath>

namespace qlni {

namespace {

std::string param_label(std::size_t i, const std::vector<std::string>* names) {
    if (names && i < names->size()) return (*names)[i];
    return "p" + std::to_string(i);
}

// Cholesky factorization of a symmetric positive-definite matrix, row-major.
// Returns the index of the first non-positive pivot, or -1 on success.
int cholesky(std::vector<double>& a, std::size_t p) {
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i * p + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * p + k] * a[j * p + k];
            if (i == j) {
                if (!(s > 0.0)) return static_cast<int>(i);
                a[i * p + i] = std::sqrt(s);
            } else {
                a[i * p + j] = s / a[j * p + j];
            }
        }
    }
    return -1;
}

void cholesky_solve(const std::vector<double>& l, std::size_t p, std::vector<double>& x) {
    for (std::size_t i = 0; i < p; ++i) {
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i * p + k] * x[k];
        x[i] = s / l[i * p + i];
    }
    for (std::size_t ii = p; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < p; ++k) s -= l[k * p + ii] * x[k];
        x[ii] = s / l[ii * p + ii];
    }
}

// Inverse from the Cholesky factor, row-major symmetric output.
std::vector<double> cholesky_inverse(const std::vector<double>& l, std::size_t p) {
    std::vector<double> inv(p * p, 0.0);
    std::vector<double> e(p);
    for (std::size_t j = 0; j < p; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        cholesky_solve(l, p, e);
        for (std::size_t i = 0; i < p; ++i) inv[i * p + j] = e[i];
    }
    return inv;
}

double rss_of(const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
}

struct Normal {
    std::vector<double> a;      // JtJ, p x p
    std::vector<double> g;      // Jt r
    std::vector<double> scale;  // column norms for equilibration
};

Normal build_normal(const std::vector<double>& jac, const std::vector<double>& r,
                    std::size_t n, std::size_t p) {
    Normal nm;
    nm.a.assign(p * p, 0.0);
    nm.g.assign(p, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double* row = &jac[k * p];
        for (std::size_t i = 0; i < p; ++i) {
            nm.g[i] += row[i] * r[k];
            for (std::size_t j = 0; j <= i; ++j) nm.a[i * p + j] += row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) nm.a[i * p + j] = nm.a[j * p + i];
    nm.scale.resize(p);
    for (std::size_t i = 0; i < p; ++i) nm.scale[i] = std::sqrt(nm.a[i * p + i]);
    return nm;
}

}  // namespace

NlsResult levenberg_marquardt(const NlsModelFn& model, std::vector<double> params,
                              std::size_t n, const NlsOptions& options,
                              const std::vector<std::string>* param_names) {
    const std::size_t p = params.size();
    if (p == 0 || n < p) throw EstimationError("levenberg_marquardt: need at least p residuals");

    std::vector<double> r(n), jac(n * p);
    std::vector<double> r_trial(n), jac_trial(n * p);

    model(params, r, jac);
    double rss = rss_of(r);

    NlsResult result;
    result.rss_history.push_back(rss);

    Normal nm = build_normal(jac, r, n, p);
    for (std::size_t i = 0; i < p; ++i) {
        if (!(nm.scale[i] > 0.0) || !std::isfinite(nm.scale[i]))
            throw EstimationError("singular normal matrix; degenerate parameter: " +
                                  param_label(i, param_names));
    }

    double damping = options.initial_damping;
    bool converged = rss <= options.rss_abs_floor;
    int accepted = 0;

    while (!converged && accepted < options.max_iterations) {
        // equilibrated damped system: (A~ + damping I) d~ = -g~
        std::vector<double> a_eq(p * p);
        std::vector<double> step(p);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j)
                a_eq[i * p + j] = nm.a[i * p + j] / (nm.scale[i] * nm.scale[j]);
            a_eq[i * p + i] += damping;
            step[i] = -nm.g[i] / nm.scale[i];
        }
        const int bad = cholesky(a_eq, p);
        if (bad >= 0)
            throw EstimationError("singular normal matrix; degenerate parameter: " +
                                  param_label(static_cast<std::size_t>(bad), param_names));
        cholesky_solve(a_eq, p, step);

        std::vector<double> trial(p);
        for (std::size_t i = 0; i < p; ++i) trial[i] = params[i] + step[i] / nm.scale[i];

        model(trial, r_trial, jac_trial);
        const double rss_trial = rss_of(r_trial);

        if (std::isfinite(rss_trial) && rss_trial <= rss) {
            const double rel_change = (rss - rss_trial) / std::max(rss, 1e-300);
            params = std::move(trial);
            r.swap(r_trial);
            jac.swap(jac_trial);
            rss = rss_trial;
            ++accepted;
            result.rss_history.push_back(rss);
            damping = std::max(damping / 3.0, 1e-14);
            nm = build_normal(jac, r, n, p);
            for (std::size_t i = 0; i < p; ++i) {
                if (!(nm.scale[i] > 0.0) || !std::isfinite(nm.scale[i]))
                    throw EstimationError("singular normal matrix; degenerate parameter: " +
                                          param_label(i, param_names));
            }
            if (rel_change < options.rss_rel_tol || rss <= options.rss_abs_floor)
                converged = true;
        } else {
            damping *= 4.0;
            if (damping > 1e14) break;  // stuck: report non-converged diagnostics
        }
    }

    // covariance from the undamped normal matrix at the solution
    if (converged) {
        std::vector<double> a_eq(p * p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                a_eq[i * p + j] = nm.a[i * p + j] / (nm.scale[i] * nm.scale[j]);
        const int bad = cholesky(a_eq, p);
        if (bad >= 0)
            throw EstimationError("singular normal matrix; degenerate parameter: " +
                                  param_label(static_cast<std::size_t>(bad), param_names));
        std::vector<double> inv = cholesky_inverse(a_eq, p);
        const double dof = static_cast<double>(n > p ? n - p : 1);
        result.covariance.assign(p * p, 0.0);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j)
                result.covariance[i * p + j] =
                    rss / dof * inv[i * p + j] / (nm.scale[i] * nm.scale[j]);
    }

    result.params = std::move(params);
    result.rss = rss;
    result.iterations = accepted;
    result.converged = converged;
    return result;
}

}  // namespace qlni
