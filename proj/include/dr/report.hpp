#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "dr/algebra.hpp"

namespace dr {

struct ReportResult {
    std::string name;
    double value = 0.0; // payload for table-style rows, 0 for residual suites
    double max_residual = 0.0;
    double mean_residual = 0.0;
    bool pass = true;
};

struct Report {
    std::string spec;
    std::uint64_t seed = 0;
    std::string version = "1.0.0";
    std::vector<ReportResult> results;

    bool all_pass() const;
};

std::string report_json(const Report& r);
std::string report_csv(const Report& r);

// Writes to a temporary file in the same directory, then renames.
void emit_report(const Report& r, const std::string& format, const std::string& path);

// Parses a space-spec config file (JSON). Throws ConfigError on any problem.
CliffordSpec parse_spec_file(const std::string& path);

} // namespace dr
