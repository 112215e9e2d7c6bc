#include <cmath>
#include <vector>

#include "doctest.h"
#include "qlni/nls.hpp"
#include "qlni/rng.hpp"

using namespace qlni;

namespace {

// y = a exp(b x) sampled on [0, 1]
struct ExpProblem {
    std::vector<double> x, y;
    ExpProblem(double a, double b, double sigma, std::uint64_t seed) {
        CounterRng rng(seed);
        for (int i = 0; i < 200; ++i) {
            const double xi = i / 199.0;
            x.push_back(xi);
            y.push_back(a * std::exp(b * xi) + sigma * rng.next_gaussian());
        }
    }
    void operator()(const std::vector<double>& p, std::vector<double>& r,
                    std::vector<double>& jac) const {
        for (std::size_t k = 0; k < x.size(); ++k) {
            const double e = std::exp(p[1] * x[k]);
            r[k] = p[0] * e - y[k];
            jac[k * 2 + 0] = e;
            jac[k * 2 + 1] = p[0] * x[k] * e;
        }
    }
};

}  // namespace

TEST_CASE("levenberg-marquardt on an exponential model") {
    const ExpProblem problem(2.0, -1.3, 0.0, 1);

    SUBCASE("recovers the parameters from a rough start") {
        const NlsResult res = levenberg_marquardt(
            [&](const std::vector<double>& p, std::vector<double>& r,
                std::vector<double>& j) { problem(p, r, j); },
            {1.0, -0.5}, problem.x.size());
        REQUIRE(res.converged);
        CHECK(res.params[0] == doctest::Approx(2.0).epsilon(1e-8));
        CHECK(res.params[1] == doctest::Approx(-1.3).epsilon(1e-8));
    }

    SUBCASE("accepted steps never increase the rss") {
        const ExpProblem noisy(2.0, -1.3, 0.05, 2);
        const NlsResult res = levenberg_marquardt(
            [&](const std::vector<double>& p, std::vector<double>& r,
                std::vector<double>& j) { noisy(p, r, j); },
            {0.5, 0.5}, noisy.x.size());
        REQUIRE(res.converged);
        for (std::size_t i = 1; i < res.rss_history.size(); ++i)
            CHECK(res.rss_history[i] <= res.rss_history[i - 1]);
    }

    SUBCASE("covariance tracks the noise level") {
        const ExpProblem noisy(2.0, -1.3, 0.05, 3);
        const NlsResult res = levenberg_marquardt(
            [&](const std::vector<double>& p, std::vector<double>& r,
                std::vector<double>& j) { noisy(p, r, j); },
            {1.0, -1.0}, noisy.x.size());
        REQUIRE(res.converged);
        CHECK(res.covariance[0] > 0.0);
        CHECK(res.covariance[3] > 0.0);
        // symmetric
        CHECK(res.covariance[1] == doctest::Approx(res.covariance[2]).epsilon(1e-9));
    }

    SUBCASE("starting at the optimum converges immediately") {
        const NlsResult res = levenberg_marquardt(
            [&](const std::vector<double>& p, std::vector<double>& r,
                std::vector<double>& j) { problem(p, r, j); },
            {2.0, -1.3}, problem.x.size());
        CHECK(res.converged);
        CHECK(res.iterations <= 2);
        CHECK(res.rss <= 1e-20);
    }
}

TEST_CASE("degenerate parameters are reported by name") {
    // second parameter never influences the model
    auto model = [](const std::vector<double>& p, std::vector<double>& r,
                    std::vector<double>& jac) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            r[k] = p[0] - 1.0;
            jac[k * 2 + 0] = 1.0;
            jac[k * 2 + 1] = 0.0;
        }
    };
    const std::vector<std::string> names = {"scale", "ghost"};
    CHECK_THROWS_WITH_AS(levenberg_marquardt(model, {0.0, 0.0}, 16, {}, &names),
                         "singular normal matrix; degenerate parameter: ghost",
                         EstimationError);
}
