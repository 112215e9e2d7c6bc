#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlni/estimator.hpp"
#include "qlni/noon.hpp"
#include "qlni/scenario.hpp"
#include "qlni/trace_io.hpp"
#include "qlni/verify.hpp"

namespace py = pybind11;
using namespace qlni;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nonlinear-interferometry simulator and chromatic-dispersion estimator";

    py::register_exception<Error>(m, "Error");

    py::class_<Wavelength>(m, "Wavelength")
        .def_static("from_nm", &Wavelength::from_nm, py::arg("nm"))
        .def_static("from_m", &Wavelength::from_m, py::arg("meters"))
        .def_property_readonly("nm", &Wavelength::nm)
        .def_property_readonly("m", &Wavelength::m)
        .def("__repr__", [](const Wavelength& w) {
            return "Wavelength(" + std::to_string(w.nm()) + " nm)";
        });

    m.def(
        "wavelength_to_omega",
        [](const Wavelength& w) { return wavelength_to_omega(w).rad_per_s; },
        py::arg("wavelength"), "Angular frequency 2 pi c / lambda in rad/s");
    m.def(
        "omega_to_wavelength", [](double w) { return omega_to_wavelength({w}); },
        py::arg("omega_rad_s"));
    m.def("idler_wavelength", &idler_wavelength, py::arg("lambda_p"), py::arg("lambda_s"));
    m.def(
        "detuning_from_degeneracy",
        [](const Wavelength& l, const Wavelength& p) {
            return detuning_from_degeneracy(l, p).rad_per_s;
        },
        py::arg("wavelength"), py::arg("lambda_p"));

    py::class_<SweepGrid>(m, "SweepGrid")
        .def(py::init([](double start_nm, double stop_nm, std::size_t n, double speed) {
                 return SweepGrid{Wavelength::from_nm(start_nm), Wavelength::from_nm(stop_nm), n,
                                  speed};
             }),
             py::arg("lambda_start_nm") = 1535.0, py::arg("lambda_stop_nm") = 1545.0,
             py::arg("n_samples") = 10000, py::arg("speed_nm_s") = 100.0)
        .def_readwrite("n_samples", &SweepGrid::n_samples)
        .def_readwrite("speed_nm_per_s", &SweepGrid::speed_nm_per_s)
        .def_property_readonly("duration_s", &SweepGrid::duration_s);
    m.def("make_sweep", [](const SweepGrid& g) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : make_sweep(g)) out.emplace_back(p.time_s, p.lambda.nm());
        return out;
    });

    py::class_<FiberUnderTest>(m, "FiberUnderTest")
        .def(py::init<>())
        .def_readwrite("length_m", &FiberUnderTest::length_m)
        .def_readwrite("beta0", &FiberUnderTest::beta0)
        .def_readwrite("beta1", &FiberUnderTest::beta1)
        .def_readwrite("beta2", &FiberUnderTest::beta2)
        .def_readwrite("beta3", &FiberUnderTest::beta3)
        .def_readwrite("reference", &FiberUnderTest::reference);
    m.def(
        "taylor_phase",
        [](const FiberUnderTest& f, double dw, int order) {
            return taylor_phase(f, {dw}, order);
        },
        py::arg("fiber"), py::arg("detuning_rad_s"), py::arg("max_order") = 3);
    m.def(
        "quantum_like_phase",
        [](const FiberUnderTest& f, double dw) { return quantum_like_phase(f, {dw}); },
        py::arg("fiber"), py::arg("detuning_rad_s"),
        "Summed signal+idler phase L (2 beta0 + beta2 dw^2); odd orders cancel");
    m.def(
        "classical_phase",
        [](const FiberUnderTest& f, double dw) { return classical_phase(f, {dw}); },
        py::arg("fiber"), py::arg("detuning_rad_s"));
    m.def(
        "d_from_beta2",
        [](double beta2, const Wavelength& l0) { return d_from_beta2(beta2, l0).ps_per_nm_km; },
        py::arg("beta2_s2_m"), py::arg("lambda0"), "D in ps/(nm km)");
    m.def(
        "beta2_from_d",
        [](double d, const Wavelength& l0) { return beta2_from_d({d}, l0); },
        py::arg("d_ps_nm_km"), py::arg("lambda0"));

    py::enum_<ConversionKind>(m, "ConversionKind")
        .value("HarmonicN", ConversionKind::HarmonicN)
        .value("SumFrequency", ConversionKind::SumFrequency);
    py::class_<ConversionSpec>(m, "ConversionSpec")
        .def(py::init([](ConversionKind kind, unsigned order, double eta) {
                 return ConversionSpec{kind, order, eta};
             }),
             py::arg("kind") = ConversionKind::HarmonicN, py::arg("harmonic_order") = 1,
             py::arg("efficiency_ratio") = 0.5)
        .def_readwrite("kind", &ConversionSpec::kind)
        .def_readwrite("harmonic_order", &ConversionSpec::harmonic_order)
        .def_readwrite("efficiency_ratio", &ConversionSpec::efficiency_ratio);
    m.def(
        "coherent_fock",
        [](std::complex<double> alpha, std::size_t n_max) {
            return coherent_fock(alpha, n_max).coefficients;
        },
        py::arg("alpha"), py::arg("n_max"));
    m.def("harmonic_phase_map", &harmonic_phase_map, py::arg("alpha_in"),
          py::arg("harmonic_order"), py::arg("conversion_gain") = 1.0);
    m.def(
        "detection_probability",
        [](double phi, const ConversionSpec& spec) {
            const ProbabilityPair p = detection_probability(interferometer_state(phi, spec));
            return std::make_pair(p.p_plus, p.p_minus);
        },
        py::arg("phi"), py::arg("spec"),
        "(p_plus, p_minus) at the closing beam-splitter outputs");
    m.def("fringe_period", &fringe_period, py::arg("spec"));
    m.def("scan_visibility", &scan_visibility, py::arg("spec"));

    py::enum_<ProcessKind>(m, "ProcessKind")
        .value("Dfg", ProcessKind::Dfg)
        .value("SfgArm1", ProcessKind::SfgArm1)
        .value("SfgArm2", ProcessKind::SfgArm2)
        .value("Shg", ProcessKind::Shg);
    py::class_<ParametricProcess>(m, "ParametricProcess")
        .def(py::init([](ProcessKind kind, double center_nm, double fwhm_nm, double length_m) {
                 ParametricProcess p;
                 p.kind = kind;
                 p.center = Wavelength::from_nm(center_nm);
                 p.crystal_length_m = length_m;
                 p.mismatch_slope = slope_from_fwhm(p.center, fwhm_nm, length_m);
                 return p;
             }),
             py::arg("kind"), py::arg("center_nm"), py::arg("fwhm_nm"),
             py::arg("length_m") = 0.01)
        .def_readwrite("kind", &ParametricProcess::kind)
        .def_readwrite("center", &ParametricProcess::center)
        .def_readwrite("mismatch_slope", &ParametricProcess::mismatch_slope)
        .def_readwrite("crystal_length_m", &ParametricProcess::crystal_length_m);
    m.def("acceptance", &acceptance, py::arg("process"), py::arg("lambda_s"));
    m.def("delta_k", &delta_k, py::arg("process"), py::arg("lambda_s"));
    m.def("envelope_product", &envelope_product, py::arg("dfg"), py::arg("sfg"),
          py::arg("lambda_s"));
    m.def("shg_suppression", &shg_suppression, py::arg("shg"), py::arg("sweep"));
    m.def("half_max_argument", &half_max_argument);
    m.def("slope_from_fwhm", &slope_from_fwhm, py::arg("center"), py::arg("fwhm_nm"),
          py::arg("crystal_length_m"));
    m.def("arm_efficiency_ratio", &arm_efficiency_ratio, py::arg("sfg1"), py::arg("sfg2"),
          py::arg("lambda_s"));
    m.def("visibility_from_efficiency", &visibility_from_efficiency, py::arg("eta"));

    py::class_<Interferogram>(m, "Interferogram")
        .def_readonly("time_s", &Interferogram::time_s)
        .def_readonly("lambda_nm", &Interferogram::lambda_nm)
        .def_readonly("intensity", &Interferogram::intensity)
        .def_property_readonly("meta_json",
                               [](const Interferogram& t) { return t.meta.dump(); })
        .def("__len__", &Interferogram::size);

    py::class_<NoiseConfig>(m, "NoiseConfig")
        .def(py::init([](double sigma, double shot, double drift, std::uint64_t seed) {
                 return NoiseConfig{sigma, shot, drift, seed};
             }),
             py::arg("additive_sigma") = 0.0, py::arg("shot_scale") = 0.0,
             py::arg("drift_rad_per_s") = 0.0, py::arg("seed") = 0)
        .def_readwrite("additive_sigma", &NoiseConfig::additive_sigma)
        .def_readwrite("shot_scale", &NoiseConfig::shot_scale)
        .def_readwrite("drift_rad_per_s", &NoiseConfig::drift_rad_per_s)
        .def_readwrite("seed", &NoiseConfig::seed);

    py::class_<SynthesisModel>(m, "SynthesisModel")
        .def(py::init<>())
        .def_readwrite("fiber", &SynthesisModel::fiber)
        .def_readwrite("dfg", &SynthesisModel::dfg)
        .def_readwrite("sfg", &SynthesisModel::sfg)
        .def_readwrite("sweep", &SynthesisModel::sweep)
        .def_readwrite("amplitude", &SynthesisModel::amplitude)
        .def_readwrite("offset", &SynthesisModel::offset)
        .def_readwrite("visibility", &SynthesisModel::visibility);
    m.def("synthesize", py::overload_cast<const SynthesisModel&>(&synthesize), py::arg("model"));
    m.def("add_noise", &add_noise, py::arg("clean"), py::arg("noise"), py::arg("scan_index") = 0,
          py::arg("scan_start_s") = 0.0);
    m.def("calibrate", &calibrate, py::arg("time_trace"), py::arg("sweep"),
          py::arg("duration_tolerance") = 0.01);
    m.def("expected_fringe_count", &expected_fringe_count, py::arg("fiber"), py::arg("sweep"));

    py::class_<FitModel>(m, "FitModel")
        .def(py::init<>())
        .def_readwrite("amplitude", &FitModel::amplitude)
        .def_readwrite("offset", &FitModel::offset)
        .def_readwrite("visibility", &FitModel::visibility)
        .def_readwrite("beta2L", &FitModel::beta2L)
        .def_readwrite("phi0", &FitModel::phi0)
        .def_readwrite("dfg", &FitModel::dfg)
        .def_readwrite("sfg", &FitModel::sfg);
    py::class_<FitOptions>(m, "FitOptions")
        .def(py::init<>())
        .def_readwrite("max_iterations", &FitOptions::max_iterations)
        .def_readwrite("rss_rel_tol", &FitOptions::rss_rel_tol)
        .def_readwrite("fit_envelope", &FitOptions::fit_envelope)
        .def_readwrite("try_both_signs", &FitOptions::try_both_signs);
    py::class_<FitResult>(m, "FitResult")
        .def_readonly("model", &FitResult::model)
        .def_readonly("free_names", &FitResult::free_names)
        .def_readonly("covariance", &FitResult::covariance)
        .def_readonly("rss", &FitResult::rss)
        .def_readonly("residual_std", &FitResult::residual_std)
        .def_readonly("iterations", &FitResult::iterations)
        .def_readonly("converged", &FitResult::converged)
        .def_readonly("rss_history", &FitResult::rss_history)
        .def("variance_of", &FitResult::variance_of, py::arg("name"));
    m.def("initial_guess", &initial_guess, py::arg("trace"), py::arg("reference"),
          py::arg("dfg"), py::arg("sfg"));
    m.def("fit", &fit, py::arg("trace"), py::arg("reference"), py::arg("guess"),
          py::arg("options") = FitOptions{});

    py::class_<CdEstimate>(m, "CdEstimate")
        .def_property_readonly("d_ps_nm_km",
                               [](const CdEstimate& e) { return e.d.ps_per_nm_km; })
        .def_readonly("sigma_d_ps_nm_km", &CdEstimate::sigma_d_ps_nm_km)
        .def_readonly("beta2_s2_m", &CdEstimate::beta2_s2_m)
        .def_readonly("sigma_beta2_s2_m", &CdEstimate::sigma_beta2_s2_m);
    m.def("extract_cd", &extract_cd, py::arg("result"), py::arg("fiber_length_m"),
          py::arg("lambda0"));

    py::class_<McSummary>(m, "McSummary")
        .def_readonly("n_requested", &McSummary::n_requested)
        .def_readonly("n_scans", &McSummary::n_scans)
        .def_readonly("cd_values", &McSummary::cd_values)
        .def_readonly("failed_scans", &McSummary::failed_scans)
        .def_readonly("mean", &McSummary::mean)
        .def_readonly("std_dev", &McSummary::std_dev)
        .def_readonly("sem", &McSummary::sem)
        .def_readonly("rel_error_percent", &McSummary::rel_error_percent)
        .def_readonly("valid", &McSummary::valid)
        .def_readonly("truth_d_ps_nm_km", &McSummary::truth_d_ps_nm_km)
        .def_readonly("bin_edges", &McSummary::bin_edges)
        .def_readonly("bin_counts", &McSummary::bin_counts)
        .def_readonly("bin_density", &McSummary::bin_density)
        .def_readonly("gauss_overlay", &McSummary::gauss_overlay);
    m.def("monte_carlo", &monte_carlo, py::arg("model"), py::arg("noise"), py::arg("n_scans"),
          py::arg("master_seed"), py::arg("threads") = 1, py::arg("options") = FitOptions{});

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_static("defaults", &ScenarioConfig::defaults)
        .def_static("from_ini", &ScenarioConfig::from_ini, py::arg("text"),
                    py::arg("apply_env") = true)
        .def("to_ini", &ScenarioConfig::to_ini)
        .def("synthesis_model", &ScenarioConfig::synthesis_model)
        .def_readwrite("fiber", &ScenarioConfig::fiber)
        .def_readwrite("dfg", &ScenarioConfig::dfg)
        .def_readwrite("sfg1", &ScenarioConfig::sfg1)
        .def_readwrite("sfg2", &ScenarioConfig::sfg2)
        .def_readwrite("shg", &ScenarioConfig::shg)
        .def_readwrite("sweep", &ScenarioConfig::sweep)
        .def_readwrite("noise", &ScenarioConfig::noise)
        .def_readwrite("amplitude", &ScenarioConfig::amplitude)
        .def_readwrite("offset", &ScenarioConfig::offset)
        .def_readwrite("visibility", &ScenarioConfig::visibility);

    py::class_<PropertyCheck>(m, "PropertyCheck")
        .def_readonly("name", &PropertyCheck::name)
        .def_readonly("deviation", &PropertyCheck::deviation)
        .def_readonly("tolerance", &PropertyCheck::tolerance)
        .def_readonly("pass_", &PropertyCheck::pass)
        .def_readonly("detail", &PropertyCheck::detail);
    m.def("run_property_suite", &run_property_suite,
          py::arg("quantum_phase_fault_scale") = 1.0);
}
