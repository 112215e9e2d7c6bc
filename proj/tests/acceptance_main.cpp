// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 6 and 9 drive the installed CLI binary; everything else
// exercises the library directly.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "qlni/estimator.hpp"
#include "qlni/noon.hpp"
#include "qlni/rng.hpp"
#include "qlni/scenario.hpp"
#include "qlni/trace_io.hpp"
#include "qlni/verify.hpp"

namespace fs = std::filesystem;
using namespace qlni;
using clock_type = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail, double seconds) {
    std::printf("[%s] %-34s %s (%.2f s)\n", pass ? "PASS" : "FAIL", name.c_str(),
                detail.c_str(), seconds);
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QLNI_BIN_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "qlni_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

double parse_report_value(const std::string& report, const std::string& key) {
    const std::size_t pos = report.find(key + " = ");
    if (pos == std::string::npos) return std::nan("");
    return std::atof(report.c_str() + pos + key.size() + 3);
}

// --- criteria -------------------------------------------------------------

void criterion_1_odd_order_cancellation() {
    const auto t0 = clock_type::now();
    CounterRng rng(0xACC1);
    const Wavelength pump = Wavelength::from_nm(780.3);
    std::vector<Detuning> detunings;
    for (int k = 0; k <= 32; ++k)
        detunings.push_back(detuning_from_degeneracy(
            Wavelength::from_nm(1535.0 + 10.0 * k / 32.0), pump));

    bool bit_identical = true;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        FiberUnderTest f;
        f.length_m = 1.0 + 19.0 * rng.next_double();
        f.beta0 = rng.next_double();
        f.beta1 = (2.0 * rng.next_double() - 1.0) * 1e-8;
        f.beta2 = (0.5 + 1.5 * rng.next_double()) * 1.06e-25;
        f.beta3 = (2.0 * rng.next_double() - 1.0) * 1e-38;
        FiberUnderTest even = f;
        even.beta1 = 0.0;
        even.beta3 = 0.0;
        for (const Detuning d : detunings) {
            if (quantum_like_phase(f, d) != quantum_like_phase(even, d)) bit_identical = false;
            const double sum = taylor_phase(f, d) + taylor_phase(f, {-d.rad_per_s});
            worst = std::max(worst, std::abs(sum - quantum_like_phase(f, d)));
        }
    }
    const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
    report("C1 odd-order-cancellation", bit_identical && worst <= 1e-9 && dt < 1.0,
           "bit-identical=" + std::string(bit_identical ? "yes" : "no") +
               ", max dev " + fmt(worst) + " rad (tol 1e-9)",
           dt);
}

void criterion_2_super_resolution_factor() {
    const auto t0 = clock_type::now();
    FiberUnderTest f;
    f.length_m = 10.0;
    f.beta0 = 0.4;
    f.beta1 = 1e-9;
    f.beta2 = 1.061255567527276e-25;
    f.beta3 = 1e-40;
    const double h = 1e11;
    const double curv_q = quantum_like_phase(f, {h}) - 2.0 * quantum_like_phase(f, {0.0}) +
                          quantum_like_phase(f, {-h});
    const double curv_c =
        classical_phase(f, {h}) - 2.0 * classical_phase(f, {0.0}) + classical_phase(f, {-h});
    const double deviation = std::abs(curv_q / curv_c / 2.0 - 1.0);
    const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
    report("C2 super-resolution-factor", deviation <= 1e-6 && dt < 1.0,
           "curvature ratio dev " + fmt(deviation) + " (tol 1e-6)", dt);
}

void criterion_3_fringe_period_and_visibility() {
    const auto t0 = clock_type::now();
    double worst_period = 0.0;
    for (unsigned n_order = 1; n_order <= 4; ++n_order) {
        const double period = fringe_period({ConversionKind::HarmonicN, n_order, 0.5});
        worst_period = std::max(
            worst_period,
            std::abs(period * static_cast<double>(n_order) / (2.0 * std::numbers::pi) - 1.0));
    }
    double worst_vis = 0.0;
    for (int i = 0; i <= 10; ++i) {
        const double eta = i / 10.0;
        worst_vis = std::max(worst_vis,
                             std::abs(scan_visibility({ConversionKind::HarmonicN, 2, eta}) -
                                      2.0 * std::sqrt(eta * (1.0 - eta))));
    }
    const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
    report("C3 fringe-period-and-visibility",
           worst_period <= 1e-6 && worst_vis <= 1e-9 && dt < 5.0,
           "period dev " + fmt(worst_period) + " (tol 1e-6), visibility dev " + fmt(worst_vis) +
               " (tol 1e-9)",
           dt);
}

void criterion_4_coherent_state() {
    const auto t0 = clock_type::now();
    const FockVector f = coherent_fock({2.0, 0.0}, 40);
    const double deficit = std::abs(1.0 - f.norm_squared());
    const double mean_err = std::abs(f.mean_photon_number() - 4.0);
    const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
    report("C4 coherent-state-sanity", deficit < 1e-10 && mean_err <= 1e-9,
           "norm deficit " + fmt(deficit) + " (tol 1e-10), mean dev " + fmt(mean_err) +
               " (tol 1e-9)",
           dt);
}

void criterion_5_cd_round_trip() {
    const auto t0 = clock_type::now();
    const ScenarioConfig cfg = ScenarioConfig::defaults();
    const SynthesisModel model = cfg.synthesis_model();
    const Interferogram clean = synthesize(model);
    const double truth_d = -82.08;
    const double truth_b2L = model.fiber.beta2 * model.fiber.length_m;

    // analytic fringe count against the frozen endpoint evaluation
    const double count = expected_fringe_count(model.fiber, model.sweep);
    const bool count_ok = std::abs(count - 43.3546787606022) <= 1e-9 &&
                          std::abs(count - 43.4) <= 0.1;

    // fits from +-10% perturbed guesses must all land on the truth
    CounterRng rng(0xACC5);
    bool fits_ok = true;
    double worst_d = 0.0;
    double fitted_count = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
        FitModel guess;
        guess.amplitude = model.amplitude * (1.0 + 0.1 * (trial & 1 ? 1.0 : -1.0));
        guess.offset = std::max(model.offset * (1.0 + 0.1 * (trial & 2 ? 1.0 : -1.0)), 0.0);
        guess.visibility = std::min(1.0, 1.0 + 0.1 * (trial & 4 ? -1.0 : 0.0));
        guess.beta2L = truth_b2L * (1.0 + 0.1 * (2.0 * rng.next_double() - 1.0));
        guess.phi0 = 0.1 * (2.0 * rng.next_double() - 1.0);
        guess.dfg = model.dfg;
        guess.sfg = model.sfg;
        const FitResult res = fit(clean, model.fiber.reference, guess, cfg.fit);
        if (!res.converged) {
            fits_ok = false;
            continue;
        }
        const CdEstimate cd = extract_cd(res, model.fiber.length_m, model.fiber.reference);
        worst_d = std::max(worst_d, std::abs(cd.d.ps_per_nm_km - truth_d) / std::abs(truth_d));
        fitted_count = std::abs(res.model.beta2L) *
                       std::abs(detuning_from_reference(model.sweep.lambda_start,
                                                        model.fiber.reference).rad_per_s *
                                    detuning_from_reference(model.sweep.lambda_start,
                                                            model.fiber.reference).rad_per_s -
                                detuning_from_reference(model.sweep.lambda_stop,
                                                        model.fiber.reference).rad_per_s *
                                    detuning_from_reference(model.sweep.lambda_stop,
                                                            model.fiber.reference).rad_per_s) /
                       (2.0 * std::numbers::pi);
    }
    const bool fitted_count_ok = std::abs(fitted_count - 43.3546787606022) <= 0.1;
    const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
    report("C5 cd-round-trip", fits_ok && worst_d <= 1e-6 && count_ok && fitted_count_ok && dt < 5.0,
           "max |D - truth|/|truth| " + fmt(worst_d) +
               " (tol 1e-6), fringe count " + fmt(count) + " / fitted " + fmt(fitted_count) +
               " (43.4 +- 0.1)",
           dt);
}

void criterion_6_monte_carlo() {
    const auto t0 = clock_type::now();
    const ScenarioConfig cfg = ScenarioConfig::defaults();
    const SynthesisModel model = cfg.synthesis_model();
    const int threads = 4;

    std::array<double, 3> sigmas = {0.005, 0.01, 0.02};
    std::array<double, 3> stds{};
    bool converged_ok = true, mean_ok = true;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        NoiseConfig noise;
        noise.additive_sigma = sigmas[i];
        const McSummary s = monte_carlo(model, noise, 1000, 0xC6 + i, threads, cfg.fit);
        stds[i] = s.std_dev;
        if (s.n_scans < 990) converged_ok = false;  // >= 99% convergence
        if (sigmas[i] == 0.01) {
            if (std::abs(s.mean - s.truth_d_ps_nm_km) > 3.0 * s.std_dev / std::sqrt(1000.0))
                mean_ok = false;
        }
    }
    // linear scaling of the fitted-CD std with sigma, within 15%
    const double r_half = stds[0] / stds[1] / 0.5;
    const double r_double = stds[2] / stds[1] / 2.0;
    const bool scaling_ok = std::abs(r_half - 1.0) <= 0.15 && std::abs(r_double - 1.0) <= 0.15;

    // histogram and overlay files via the CLI
    const fs::path dir = scratch("mc_files");
    const bool cli_ok =
        run_cli("mc --n 1000 --seed 198 --threads 4 --svg --out " + dir.string()) == 0;
    const std::string hist = slurp(dir / "histogram.csv");
    const std::string density = slurp(dir / "histogram_density.csv");
    const std::string mc_report = slurp(dir / "mc_report.txt");
    const bool files_ok = hist.rfind("bin_left,bin_right,count\n", 0) == 0 &&
                          density.rfind("bin_center,density,gauss_pdf\n", 0) == 0 &&
                          hist.size() > 60 && density.size() > 60 &&
                          fs::exists(dir / "histogram.svg") &&
                          parse_report_value(mc_report, "n_converged") >= 990.0;

    const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
    report("C6 monte-carlo-methodology",
           converged_ok && mean_ok && scaling_ok && cli_ok && files_ok && dt < 60.0,
           "conv>=99% " + std::string(converged_ok ? "yes" : "no") + ", |mean-truth|<=3sem " +
               (mean_ok ? "yes" : "no") + ", scaling dev " +
               fmt(std::max(std::abs(r_half - 1.0), std::abs(r_double - 1.0))) +
               " (tol 0.15), files " + (files_ok && cli_ok ? "ok" : "BAD"),
           dt);
}

void criterion_7_energy_conservation() {
    const auto t0 = clock_type::now();
    const Wavelength pump = Wavelength::from_nm(780.3);
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const Wavelength lambda_s = Wavelength::from_nm(1535.0 + 10.0 * k / 1000.0);
        const double ds = detuning_from_degeneracy(lambda_s, pump).rad_per_s;
        const double di =
            detuning_from_degeneracy(idler_wavelength(pump, lambda_s), pump).rad_per_s;
        worst = std::max(worst, std::abs(ds + di) / std::abs(ds));
    }
    const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
    report("C7 energy-conservation", worst <= 1e-9,
           "max rel |dw_s + dw_i| " + fmt(worst) + " (tol 1e-9)", dt);
}

void criterion_8_envelope_behavior() {
    const auto t0 = clock_type::now();
    ParametricProcess p;
    p.kind = ProcessKind::SfgArm1;
    p.center = Wavelength::from_nm(1540.0);
    p.crystal_length_m = 0.01;
    p.mismatch_slope = slope_from_fwhm(p.center, 25.0, p.crystal_length_m);

    const bool peak_ok = acceptance(p, p.center) == 1.0;
    const double w_center = wavelength_to_omega(p.center).rad_per_s;
    const double dw_null = 2.0 * std::numbers::pi / (p.mismatch_slope * p.crystal_length_m);
    const bool null_ok = acceptance(p, omega_to_wavelength({w_center + dw_null})) <= 1e-25;
    const double x_half = half_max_argument();
    const double half_dev = std::abs(x_half - 1.39155737825151);
    const double s = sinc(x_half);
    const bool half_ok = half_dev <= 1e-6 && std::abs(s * s - 0.5) <= 1e-9;

    // fitted visibility must not budge when the DFG bandwidth changes
    const ScenarioConfig cfg = ScenarioConfig::defaults();
    SynthesisModel narrow = cfg.synthesis_model();
    SynthesisModel wide = narrow;
    wide.dfg.mismatch_slope = slope_from_fwhm(wide.dfg.center, 30.0, wide.dfg.crystal_length_m);
    double vis[2];
    const SynthesisModel* models[2] = {&narrow, &wide};
    for (int i = 0; i < 2; ++i) {
        const Interferogram trace = synthesize(*models[i]);
        const FitModel guess =
            initial_guess(trace, models[i]->fiber.reference, models[i]->dfg, models[i]->sfg);
        const FitResult res = fit(trace, models[i]->fiber.reference, guess, cfg.fit);
        vis[i] = res.converged ? res.model.visibility : std::nan("");
    }
    const double vis_dev = std::abs(vis[0] - vis[1]);
    const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
    report("C8 envelope-behavior",
           peak_ok && null_ok && half_ok && vis_dev <= 1e-9,
           "peak=1 " + std::string(peak_ok ? "yes" : "no") + ", first null " +
               (null_ok ? "yes" : "no") + ", half-max dev " + fmt(half_dev) +
               ", visibility shift " + fmt(vis_dev) + " (tol 1e-9)",
           dt);
}

void criterion_9_cli_determinism() {
    const auto t0 = clock_type::now();
    bool ok = true;
    std::string bad;

    auto compare_runs = [&](const std::string& name, const std::string& args_a,
                            const std::string& args_b, const std::vector<std::string>& files) {
        const fs::path a = scratch(name + "_a");
        const fs::path b = scratch(name + "_b");
        if (run_cli(args_a + " --out " + a.string()) != 0 ||
            run_cli(args_b + " --out " + b.string()) != 0) {
            ok = false;
            bad += " " + name + "(exit)";
            return;
        }
        for (const std::string& f : files) {
            if (slurp(a / f) != slurp(b / f)) {
                ok = false;
                bad += " " + name + "/" + f;
            }
        }
    };

    compare_runs("acceptance", "acceptance --seed 4", "acceptance --seed 4",
                 {"acceptance.csv"});
    compare_runs("synth", "synth --seed 4", "synth --seed 4",
                 {"trace_clean.csv", "trace_noisy.csv", "trace_meta.json", "scenario_used.ini"});
    // parallel monte carlo: thread count must not change a single byte
    compare_runs("mc", "mc --n 150 --seed 4 --threads 4", "mc --n 150 --seed 4 --threads 2",
                 {"mc_report.txt", "cd_values.csv", "histogram.csv", "histogram_density.csv"});

    // fit twice on the same input
    const fs::path src = scratch("fit_src");
    run_cli("synth --seed 4 --out " + src.string());
    const std::string fit_args = "fit " + (src / "trace_noisy.csv").string() + " --seed 4";
    compare_runs("fit", fit_args, fit_args, {"fit_report.txt"});

    // verify writes no files; its stdout must still be stable
    const fs::path vdir = scratch("verify");
    const std::string base = std::string(QLNI_BIN_PATH) + " verify > ";
    if (std::system((base + (vdir / "a.txt").string() + " 2>&1").c_str()) != 0 ||
        std::system((base + (vdir / "b.txt").string() + " 2>&1").c_str()) != 0 ||
        slurp(vdir / "a.txt") != slurp(vdir / "b.txt")) {
        ok = false;
        bad += " verify";
    }

    const double dt = std::chrono::duration<double>(clock_type::now() - t0).count();
    report("C9 cli-determinism", ok, ok ? "all artifacts byte-identical" : "mismatch:" + bad, dt);
}

}  // namespace

int main() {
    criterion_1_odd_order_cancellation();
    criterion_2_super_resolution_factor();
    criterion_3_fringe_period_and_visibility();
    criterion_4_coherent_state();
    criterion_5_cd_round_trip();
    criterion_6_monte_carlo();
    criterion_7_energy_conservation();
    criterion_8_envelope_behavior();
    criterion_9_cli_determinism();

    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
