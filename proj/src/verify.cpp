#include "qlni/verify.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "qlni/dispersion.hpp"
#include "qlni/noon.hpp"
#include "qlni/phase_matching.hpp"
#include "qlni/rng.hpp"
#include "qlni/spectral.hpp"

namespace qlni {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Detuning> band_detunings(std::size_t n) {
    const Wavelength pump = Wavelength::from_nm(780.3);
    std::vector<Detuning> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double nm =
            1535.0 + 10.0 * static_cast<double>(k) / static_cast<double>(n - 1);
        out.push_back(detuning_from_degeneracy(Wavelength::from_nm(nm), pump));
    }
    return out;
}

FiberUnderTest random_fiber(CounterRng& rng) {
    FiberUnderTest f;
    f.length_m = 1.0 + 19.0 * rng.next_double();
    f.beta0 = rng.next_double();
    f.beta1 = (2.0 * rng.next_double() - 1.0) * 1e-8;
    f.beta2 = (0.5 + 1.5 * rng.next_double()) * 1.06e-25;
    f.beta3 = (2.0 * rng.next_double() - 1.0) * 1e-38;
    return f;
}

std::string format_deviation(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

bool all_pass(const std::vector<PropertyCheck>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::vector<PropertyCheck> run_property_suite(double fault_scale) {
    std::vector<PropertyCheck> checks;
    const std::vector<Detuning> detunings = band_detunings(64);
    const auto scaled_quantum = [fault_scale](const FiberUnderTest& f, Detuning d) {
        return fault_scale * quantum_like_phase(f, d);
    };

    {  // beta1/beta3 never enter the summed phase, bit for bit
        CounterRng rng(0xA11CE, 0);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            FiberUnderTest fiber = random_fiber(rng);
            FiberUnderTest even_only = fiber;
            even_only.beta1 = 0.0;
            even_only.beta3 = 0.0;
            for (const Detuning d : detunings) {
                const double a = scaled_quantum(fiber, d);
                const double b = scaled_quantum(even_only, d);
                if (a != b) worst = std::max(worst, std::abs(a - b));
            }
        }
        checks.push_back({"odd-order-invariance", worst, 0.0, worst == 0.0,
                          "summed phase is bit-identical under beta1/beta3 changes"});
    }

    {  // summed phase equals the two-sided Taylor sum
        CounterRng rng(0xA11CE, 1);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const FiberUnderTest fiber = random_fiber(rng);
            for (const Detuning d : detunings) {
                const double both = taylor_phase(fiber, d, 3) +
                                    taylor_phase(fiber, {-d.rad_per_s}, 3);
                worst = std::max(worst, std::abs(both - scaled_quantum(fiber, d)));
            }
        }
        checks.push_back({"odd-order-cancellation", worst, 1e-9, worst <= 1e-9,
                          "max |taylor(+dw) + taylor(-dw) - summed phase| in rad"});
    }

    {  // curvature at dw = 0: summed phase has exactly twice the classical one
        FiberUnderTest fiber;
        fiber.length_m = 10.0;
        fiber.beta0 = 0.4;
        fiber.beta1 = 1e-9;
        fiber.beta2 = 1.061255567527276e-25;
        fiber.beta3 = 1e-40;
        const double h = 1e11;
        const double curvature_q = scaled_quantum(fiber, {h}) - 2.0 * scaled_quantum(fiber, {0.0}) +
                                   scaled_quantum(fiber, {-h});
        const double curvature_c = classical_phase(fiber, {h}) - 2.0 * classical_phase(fiber, {0.0}) +
                                   classical_phase(fiber, {-h});
        const double ratio = curvature_q / curvature_c;
        const double deviation = std::abs(ratio / 2.0 - 1.0);
        checks.push_back({"super-resolution-factor", deviation, 1e-6, deviation <= 1e-6,
                          "curvature ratio = " + format_deviation(ratio)});
    }

    {  // summed phase is even in the detuning
        CounterRng rng(0xA11CE, 2);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const FiberUnderTest fiber = random_fiber(rng);
            for (const Detuning d : detunings) {
                const double diff =
                    scaled_quantum(fiber, d) - scaled_quantum(fiber, {-d.rad_per_s});
                if (diff != 0.0) worst = std::max(worst, std::abs(diff));
            }
        }
        checks.push_back({"even-in-detuning", worst, 0.0, worst == 0.0,
                          "summed phase at +dw and -dw, bit for bit"});
    }

    {  // fringe period 2 pi / N for N = 1..4
        double worst = 0.0;
        std::string detail = "periods/2pi:";
        for (unsigned n_order = 1; n_order <= 4; ++n_order) {
            ConversionSpec spec{ConversionKind::HarmonicN, n_order, 0.5};
            const double period = fringe_period(spec);
            const double expected = kTwoPi / static_cast<double>(n_order);
            worst = std::max(worst, std::abs(period / expected - 1.0));
            detail += " " + format_deviation(period / kTwoPi);
        }
        checks.push_back({"fringe-period", worst, 1e-6, worst <= 1e-6, detail});
    }

    {  // visibility 2 sqrt(eta (1-eta)) on the eta grid
        double worst = 0.0;
        for (int i = 0; i <= 10; ++i) {
            const double eta = static_cast<double>(i) / 10.0;
            ConversionSpec spec{ConversionKind::HarmonicN, 2, eta};
            worst = std::max(worst,
                             std::abs(scan_visibility(spec) - visibility_from_efficiency(eta)));
        }
        checks.push_back({"visibility-law", worst, 1e-9, worst <= 1e-9,
                          "max |measured - 2 sqrt(eta(1-eta))| over eta = 0..1"});
    }

    {  // truncated coherent state: norm and mean photon number
        const FockVector fock = coherent_fock({2.0, 0.0}, 40);
        const double deficit = std::abs(1.0 - fock.norm_squared());
        const double mean_err = std::abs(fock.mean_photon_number() - 4.0);
        checks.push_back({"coherent-norm", deficit, 1e-10, deficit < 1e-10,
                          "norm deficit at |alpha| = 2, truncation 40"});
        checks.push_back({"coherent-mean", mean_err, 1e-9, mean_err <= 1e-9,
                          "|mean photon number - 4|"});
    }

    {  // detection probabilities always sum to one
        CounterRng rng(0xA11CE, 3);
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            ConversionSpec spec{ConversionKind::HarmonicN,
                                1 + static_cast<unsigned>(rng.next_u64() % 4),
                                rng.next_double()};
            const ProbabilityPair p =
                detection_probability(interferometer_state(kTwoPi * rng.next_double(), spec));
            worst = std::max(worst, std::abs(p.p_plus + p.p_minus - 1.0));
        }
        checks.push_back({"probability-conservation", worst, 1e-12, worst <= 1e-12,
                          "max |p+ + p- - 1| over random states"});
    }

    {  // idler detuning anti-correlates with the signal detuning
        const Wavelength pump = Wavelength::from_nm(780.3);
        double worst_rel = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const Wavelength lambda_s =
                Wavelength::from_nm(1535.0 + 10.0 * static_cast<double>(k) / 200.0);
            const double ds = detuning_from_degeneracy(lambda_s, pump).rad_per_s;
            const double di =
                detuning_from_degeneracy(idler_wavelength(pump, lambda_s), pump).rad_per_s;
            worst_rel = std::max(worst_rel, std::abs(ds + di) / std::abs(ds));
        }
        const double degenerate = std::abs(
            detuning_from_degeneracy(Wavelength::from_nm(1560.6), pump).rad_per_s +
            detuning_from_degeneracy(idler_wavelength(pump, Wavelength::from_nm(1560.6)), pump)
                .rad_per_s);
        const double worst = std::max(worst_rel, degenerate / 1e-3 * 1e-9);
        checks.push_back({"energy-conservation", worst, 1e-9, worst <= 1e-9,
                          "relative |dw_s + dw_i| across the sweep band"});
    }

    return checks;
}

}  // namespace qlni
