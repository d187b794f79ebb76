#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

// Tabular results of parameter scans, with linear fits and pass/fail
// verdicts, serializable to JSON and CSV.  Serialization is deterministic:
// identical report contents produce identical bytes.

namespace wbary {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
};

// Ordinary least squares y ~ slope*x + intercept.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ScanReport {
    std::string id;                     // "<command>-<hash8>"
    nlohmann::json params;              // resolved configuration
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, LinearFit> fits;
    std::map<std::string, bool> verdicts;
    std::map<std::string, double> scalars;
    double runtime_sec = 0.0;           // informational; excluded from artifacts

    bool all_pass() const;
    std::vector<double> column(const std::string& name) const;

    // Volatile fields (runtime) are omitted so identical inputs give
    // byte-identical artifacts.
    nlohmann::json to_json() const;
    std::string to_csv() const;
};

// FNV-1a digest of the canonical (sorted-key) JSON dump, first 8 hex digits.
std::string hash8(const nlohmann::json& j);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace wbary
