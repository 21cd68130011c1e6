#include "dr/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dr {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

bool Report::all_pass() const {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

std::string report_json(const Report& r) {
    // assembled by hand so that the byte stream is deterministic
    std::ostringstream os;
    os << "{\"meta\":{\"spec\":" << nlohmann::json(r.spec).dump() << ",\"seed\":" << r.seed
       << ",\"versions\":{\"drcli\":\"" << r.version << "\"}},\"results\":[";
    for (size_t i = 0; i < r.results.size(); ++i) {
        const auto& e = r.results[i];
        if (i) os << ",";
        os << "{\"name\":" << nlohmann::json(e.name).dump() << ",\"value\":" << fmt(e.value)
           << ",\"max_residual\":" << fmt(e.max_residual)
           << ",\"mean_residual\":" << fmt(e.mean_residual)
           << ",\"pass\":" << (e.pass ? "true" : "false") << "}";
    }
    os << "]}\n";
    return os.str();
}

std::string report_csv(const Report& r) {
    std::ostringstream os;
    os << "name,value,max_residual,mean_residual,pass\n";
    for (const auto& e : r.results) {
        std::string name = e.name;
        for (char& c : name)
            if (c == ',') c = ';';
        os << name << "," << fmt(e.value) << "," << fmt(e.max_residual) << ","
           << fmt(e.mean_residual) << "," << (e.pass ? "true" : "false") << "\n";
    }
    return os.str();
}

void emit_report(const Report& r, const std::string& format, const std::string& path) {
    std::string body = format == "csv" ? report_csv(r) : report_json(r);
    if (path.empty()) {
        std::fwrite(body.data(), 1, body.size(), stdout);
        return;
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("emit_report: cannot open " + tmp);
        out << body;
        if (!out) throw ConfigError("emit_report: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ConfigError("emit_report: rename failed for " + path);
}

CliffordSpec parse_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("spec parse error: ") + e.what());
    }
    CliffordSpec spec;
    if (!j.contains("m") || !j["m"].is_number_integer())
        throw ConfigError("spec: integer field 'm' is required");
    spec.m = j["m"].get<int>();
    if (spec.m < 0) throw ConfigError("spec: m must be non-negative");

    if (j.contains("generators")) {
        for (const auto& gen : j["generators"]) {
            if (!gen.is_array() || gen.empty()) throw ConfigError("spec: bad generator matrix");
            const size_t rows = gen.size();
            Mat M(rows, rows);
            for (size_t r = 0; r < rows; ++r) {
                if (!gen[r].is_array() || gen[r].size() != rows)
                    throw ConfigError("spec: generator matrices must be square");
                for (size_t c = 0; c < rows; ++c) M(r, c) = gen[r][c].get<double>();
            }
            spec.generators.push_back(M);
        }
        if (static_cast<int>(spec.generators.size()) != spec.m)
            throw ConfigError("spec: expected m generator matrices");
        return spec;
    }

    if (!j.contains("modules") || !j["modules"].is_array() || j["modules"].empty())
        throw ConfigError("spec: 'modules' list (or 'generators') is required");
    for (const auto& mod : j["modules"]) {
        ModuleSummand s;
        std::string type = mod.value("type", "d");
        if (type == "d")
            s.type = ModuleType::d;
        else if (type == "d1")
            s.type = ModuleType::d1;
        else if (type == "d2")
            s.type = ModuleType::d2;
        else
            throw ConfigError("spec: module type must be d, d1 or d2");
        s.mult = mod.value("mult", 1);
        if (s.mult < 1) throw ConfigError("spec: module mult must be >= 1");
        spec.modules.push_back(s);
    }
    return spec;
}

} // namespace dr
