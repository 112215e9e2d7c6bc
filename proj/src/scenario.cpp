#include "qlni/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace qlni {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const std::map<std::string, std::vector<std::string>>& known_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"pump", {"lambda_p_nm"}},
        {"fiber",
         {"length_m", "D_ps_nm_km", "beta2_s2_m", "beta0_rad_m", "beta1_s_m", "beta3_s3_m",
          "reference_nm"}},
        {"dfg", {"center_nm", "fwhm_nm", "slope_rad_m_per_rad_s", "length_m"}},
        {"sfg1", {"center_nm", "fwhm_nm", "slope_rad_m_per_rad_s", "length_m"}},
        {"sfg2", {"center_nm", "fwhm_nm", "slope_rad_m_per_rad_s", "length_m"}},
        {"shg", {"center_nm", "fwhm_nm", "slope_rad_m_per_rad_s", "length_m"}},
        {"sweep", {"lambda_start_nm", "lambda_stop_nm", "n_samples", "speed_nm_s"}},
        {"signal", {"amplitude", "offset", "visibility"}},
        {"noise", {"additive_sigma", "shot_scale", "drift_rad_per_s", "seed"}},
        {"fit", {"max_iterations", "rss_rel_tol", "fit_envelope"}},
        {"acceptance", {"lambda_min_nm", "lambda_max_nm", "n_samples", "shg_threshold"}},
        {"mc", {"n_scans", "threads"}},
    };
    return keys;
}

class KeyStore {
public:
    void set(const std::string& section, const std::string& key, const std::string& value) {
        values_[section + "." + key] = value;
    }

    void apply_env() {
        for (const auto& [section, keys] : known_keys()) {
            for (const auto& key : keys) {
                const std::string name = "QLNI_" + upper(section) + "_" + upper(key);
                if (const char* v = std::getenv(name.c_str())) set(section, key, v);
            }
        }
    }

    bool has(const std::string& section, const std::string& key) const {
        return values_.count(section + "." + key) > 0;
    }

    double number(const std::string& section, const std::string& key, double fallback) const {
        auto it = values_.find(section + "." + key);
        if (it == values_.end()) return fallback;
        const std::string& text = it->second;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            throw ConfigError("config key " + it->first + ": not a number: '" + text + "'");
        }
        if (used != text.size())
            throw ConfigError("config key " + it->first + ": not a number: '" + text + "'");
        return v;
    }

    std::uint64_t integer(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const {
        auto it = values_.find(section + "." + key);
        if (it == values_.end()) return fallback;
        const std::string& text = it->second;
        std::size_t used = 0;
        std::uint64_t v = 0;
        try {
            v = std::stoull(text, &used);
        } catch (const std::exception&) {
            throw ConfigError("config key " + it->first + ": not an integer: '" + text + "'");
        }
        if (used != text.size())
            throw ConfigError("config key " + it->first + ": not an integer: '" + text + "'");
        return v;
    }

    bool boolean(const std::string& section, const std::string& key, bool fallback) const {
        auto it = values_.find(section + "." + key);
        if (it == values_.end()) return fallback;
        const std::string v = it->second;
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        throw ConfigError("config key " + it->first + ": not a boolean: '" + v + "'");
    }

private:
    std::map<std::string, std::string> values_;
};

KeyStore parse_ini(const std::string& text) {
    KeyStore store;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header");
            section = trim(t.substr(1, t.size() - 2));
            if (!known_keys().count(section))
                throw ConfigError("unknown config section: [" + section + "]");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside any section");
        const std::string key = trim(t.substr(0, eq));
        const auto& allowed = known_keys().at(section);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown config key: " + section + "." + key);
        store.set(section, key, trim(t.substr(eq + 1)));
    }
    return store;
}

ParametricProcess read_process(const KeyStore& store, const std::string& section,
                               ProcessKind kind, double default_center_nm,
                               double default_fwhm_nm) {
    ParametricProcess p;
    p.kind = kind;
    p.center = Wavelength::from_nm(store.number(section, "center_nm", default_center_nm));
    p.crystal_length_m = store.number(section, "length_m", 0.01);
    const bool has_fwhm = store.has(section, "fwhm_nm");
    const bool has_slope = store.has(section, "slope_rad_m_per_rad_s");
    if (has_fwhm && has_slope)
        throw ConfigError("config section [" + section +
                          "]: fwhm_nm and slope_rad_m_per_rad_s are mutually exclusive");
    if (has_slope) {
        p.mismatch_slope = store.number(section, "slope_rad_m_per_rad_s", 0.0);
    } else {
        const double fwhm = store.number(section, "fwhm_nm", default_fwhm_nm);
        p.mismatch_slope = slope_from_fwhm(p.center, fwhm, p.crystal_length_m);
    }
    p.validate();
    return p;
}

}  // namespace

ScenarioConfig ScenarioConfig::defaults() { return from_ini("", false); }

ScenarioConfig ScenarioConfig::from_ini(const std::string& text, bool apply_env) {
    KeyStore store = parse_ini(text);
    if (apply_env) store.apply_env();

    ScenarioConfig cfg;
    cfg.lambda_p = Wavelength::from_nm(store.number("pump", "lambda_p_nm", 780.3));

    cfg.fiber.length_m = store.number("fiber", "length_m", 10.0);
    cfg.fiber.beta0 = store.number("fiber", "beta0_rad_m", 0.0);
    cfg.fiber.beta1 = store.number("fiber", "beta1_s_m", 0.0);
    cfg.fiber.beta3 = store.number("fiber", "beta3_s3_m", 0.0);
    cfg.fiber.reference = Wavelength::from_nm(store.number("fiber", "reference_nm", 1560.6));
    const bool has_d = store.has("fiber", "D_ps_nm_km");
    const bool has_beta2 = store.has("fiber", "beta2_s2_m");
    if (has_d && has_beta2)
        throw ConfigError("config section [fiber]: D_ps_nm_km and beta2_s2_m are mutually exclusive");
    if (has_beta2)
        cfg.fiber.beta2 = store.number("fiber", "beta2_s2_m", 0.0);
    else
        cfg.fiber.beta2 = beta2_from_d({store.number("fiber", "D_ps_nm_km", -82.08)},
                                       cfg.fiber.reference);
    cfg.fiber.validate();

    cfg.dfg = read_process(store, "dfg", ProcessKind::Dfg, 1555.0, 60.0);
    cfg.sfg1 = read_process(store, "sfg1", ProcessKind::SfgArm1, 1540.0, 25.0);
    cfg.sfg2 = read_process(store, "sfg2", ProcessKind::SfgArm2, 1540.0, 25.0);
    cfg.shg = read_process(store, "shg", ProcessKind::Shg, 1549.0, 1.5);

    cfg.sweep.lambda_start = Wavelength::from_nm(store.number("sweep", "lambda_start_nm", 1535.0));
    cfg.sweep.lambda_stop = Wavelength::from_nm(store.number("sweep", "lambda_stop_nm", 1545.0));
    cfg.sweep.n_samples =
        static_cast<std::size_t>(store.integer("sweep", "n_samples", 10000));
    cfg.sweep.speed_nm_per_s = store.number("sweep", "speed_nm_s", 100.0);
    cfg.sweep.validate();

    cfg.amplitude = store.number("signal", "amplitude", 1.0);
    cfg.offset = store.number("signal", "offset", 0.1);
    cfg.visibility = store.number("signal", "visibility", 1.0);

    cfg.noise.additive_sigma = store.number("noise", "additive_sigma", 0.01);
    cfg.noise.shot_scale = store.number("noise", "shot_scale", 0.0);
    cfg.noise.drift_rad_per_s = store.number("noise", "drift_rad_per_s", 0.0);
    cfg.noise.seed = store.integer("noise", "seed", 12345);
    cfg.noise.validate();

    cfg.fit.max_iterations = static_cast<int>(store.integer("fit", "max_iterations", 200));
    cfg.fit.rss_rel_tol = store.number("fit", "rss_rel_tol", 1e-10);
    cfg.fit.fit_envelope = store.boolean("fit", "fit_envelope", false);

    cfg.acceptance_min = Wavelength::from_nm(store.number("acceptance", "lambda_min_nm", 1500.0));
    cfg.acceptance_max = Wavelength::from_nm(store.number("acceptance", "lambda_max_nm", 1600.0));
    cfg.acceptance_samples =
        static_cast<std::size_t>(store.integer("acceptance", "n_samples", 2001));
    cfg.shg_threshold = store.number("acceptance", "shg_threshold", 0.1);

    cfg.mc_scans = static_cast<std::size_t>(store.integer("mc", "n_scans", 1000));
    cfg.threads = static_cast<int>(store.integer("mc", "threads", 1));
    return cfg;
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path, bool apply_env) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_ini(buf.str(), apply_env);
}

std::string ScenarioConfig::to_ini() const {
    std::ostringstream out;
    auto emit = [&out](const std::string& key, const std::string& value) {
        out << key << " = " << value << "\n";
    };
    auto emit_process = [&](const std::string& section, const ParametricProcess& p) {
        out << "\n[" << section << "]\n";
        emit("center_nm", format_double(p.center.nm()));
        emit("slope_rad_m_per_rad_s", format_double(p.mismatch_slope));
        emit("length_m", format_double(p.crystal_length_m));
    };

    out << "[pump]\n";
    emit("lambda_p_nm", format_double(lambda_p.nm()));

    out << "\n[fiber]\n";
    emit("length_m", format_double(fiber.length_m));
    emit("beta2_s2_m", format_double(fiber.beta2));
    emit("beta0_rad_m", format_double(fiber.beta0));
    emit("beta1_s_m", format_double(fiber.beta1));
    emit("beta3_s3_m", format_double(fiber.beta3));
    emit("reference_nm", format_double(fiber.reference.nm()));

    emit_process("dfg", dfg);
    emit_process("sfg1", sfg1);
    emit_process("sfg2", sfg2);
    emit_process("shg", shg);

    out << "\n[sweep]\n";
    emit("lambda_start_nm", format_double(sweep.lambda_start.nm()));
    emit("lambda_stop_nm", format_double(sweep.lambda_stop.nm()));
    emit("n_samples", std::to_string(sweep.n_samples));
    emit("speed_nm_s", format_double(sweep.speed_nm_per_s));

    out << "\n[signal]\n";
    emit("amplitude", format_double(amplitude));
    emit("offset", format_double(offset));
    emit("visibility", format_double(visibility));

    out << "\n[noise]\n";
    emit("additive_sigma", format_double(noise.additive_sigma));
    emit("shot_scale", format_double(noise.shot_scale));
    emit("drift_rad_per_s", format_double(noise.drift_rad_per_s));
    emit("seed", std::to_string(noise.seed));

    out << "\n[fit]\n";
    emit("max_iterations", std::to_string(fit.max_iterations));
    emit("rss_rel_tol", format_double(fit.rss_rel_tol));
    emit("fit_envelope", fit.fit_envelope ? "true" : "false");

    out << "\n[acceptance]\n";
    emit("lambda_min_nm", format_double(acceptance_min.nm()));
    emit("lambda_max_nm", format_double(acceptance_max.nm()));
    emit("n_samples", std::to_string(acceptance_samples));
    emit("shg_threshold", format_double(shg_threshold));

    out << "\n[mc]\n";
    emit("n_scans", std::to_string(mc_scans));
    emit("threads", std::to_string(threads));
    return out.str();
}

nlohmann::json ScenarioConfig::to_json() const {
    auto process_json = [](const ParametricProcess& p) {
        return nlohmann::json{{"center_nm", p.center.nm()},
                              {"slope_rad_m_per_rad_s", p.mismatch_slope},
                              {"length_m", p.crystal_length_m}};
    };
    return {
        {"pump", {{"lambda_p_nm", lambda_p.nm()}}},
        {"fiber",
         {{"length_m", fiber.length_m},
          {"beta2_s2_m", fiber.beta2},
          {"beta0_rad_m", fiber.beta0},
          {"beta1_s_m", fiber.beta1},
          {"beta3_s3_m", fiber.beta3},
          {"reference_nm", fiber.reference.nm()},
          {"D_ps_nm_km", d_from_beta2(fiber.beta2, fiber.reference).ps_per_nm_km}}},
        {"dfg", process_json(dfg)},
        {"sfg1", process_json(sfg1)},
        {"sfg2", process_json(sfg2)},
        {"shg", process_json(shg)},
        {"sweep",
         {{"lambda_start_nm", sweep.lambda_start.nm()},
          {"lambda_stop_nm", sweep.lambda_stop.nm()},
          {"n_samples", sweep.n_samples},
          {"speed_nm_s", sweep.speed_nm_per_s}}},
        {"signal",
         {{"amplitude", amplitude}, {"offset", offset}, {"visibility", visibility}}},
        {"noise",
         {{"additive_sigma", noise.additive_sigma},
          {"shot_scale", noise.shot_scale},
          {"drift_rad_per_s", noise.drift_rad_per_s},
          {"seed", noise.seed}}},
        {"fit",
         {{"max_iterations", fit.max_iterations},
          {"rss_rel_tol", fit.rss_rel_tol},
          {"fit_envelope", fit.fit_envelope}}},
        {"acceptance",
         {{"lambda_min_nm", acceptance_min.nm()},
          {"lambda_max_nm", acceptance_max.nm()},
          {"n_samples", acceptance_samples},
          {"shg_threshold", shg_threshold}}},
        {"mc", {{"n_scans", mc_scans}, {"threads", threads}}},
    };
}

SynthesisModel ScenarioConfig::synthesis_model() const {
    SynthesisModel m;
    m.fiber = fiber;
    m.dfg = dfg;
    m.sfg = sfg1;
    m.sweep = sweep;
    m.amplitude = amplitude;
    m.offset = offset;
    const Wavelength mid =
        Wavelength::from_nm(0.5 * (sweep.lambda_start.nm() + sweep.lambda_stop.nm()));
    const double eta = arm_efficiency_ratio(sfg1, sfg2, mid);
    m.visibility = visibility * visibility_from_efficiency(eta);
    m.validate();
    return m;
}

}  // namespace qlni
