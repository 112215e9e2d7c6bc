#include "qlni/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qlni {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

double parse_field(const std::string& text, std::size_t row, int column) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = std::string::npos;
    }
    if (used != text.size())
        throw ConfigError("trace CSV row " + std::to_string(row) + ": column " +
                          std::to_string(column) + " is not a number: '" + text + "'");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const Interferogram& trace) {
    trace.validate();
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write trace file: " + path.string());
    out << "time_s,lambda_nm,intensity\n";
    for (std::size_t k = 0; k < trace.size(); ++k)
        out << fmt(trace.time_s[k]) << ',' << fmt(trace.lambda_nm[k]) << ','
            << fmt(trace.intensity[k]) << '\n';
    if (!out) throw ConfigError("write failed: " + path.string());
}

LoadedTrace read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trace file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw ConfigError("trace CSV row 1: empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    LoadedTrace loaded;
    if (line == "time_s,lambda_nm,intensity")
        loaded.calibrated = true;
    else if (line == "time_s,intensity")
        loaded.calibrated = false;
    else
        throw ConfigError("trace CSV row 1: unexpected header '" + line + "'");

    const std::size_t n_columns = loaded.calibrated ? 3 : 2;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv(line);
        if (fields.size() != n_columns)
            throw ConfigError("trace CSV row " + std::to_string(row) + ": expected " +
                              std::to_string(n_columns) + " columns, got " +
                              std::to_string(fields.size()));
        if (loaded.calibrated) {
            loaded.trace.time_s.push_back(parse_field(fields[0], row, 1));
            loaded.trace.lambda_nm.push_back(parse_field(fields[1], row, 2));
            loaded.trace.intensity.push_back(parse_field(fields[2], row, 3));
        } else {
            loaded.raw.emplace_back(parse_field(fields[0], row, 1),
                                    parse_field(fields[1], row, 2));
        }
    }

    if (loaded.calibrated) {
        if (loaded.trace.size() < 2)
            throw ConfigError("trace CSV: fewer than 2 data rows");
        loaded.trace.validate();
    } else if (loaded.raw.size() < 2) {
        throw ConfigError("trace CSV: fewer than 2 data rows");
    }
    return loaded;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

}  // namespace qlni
