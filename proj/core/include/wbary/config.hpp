#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wbary/measures.hpp"
#include "wbary/strata.hpp"

// Configuration files for the command-line runner.  A config is a JSON
// object; rho-like values may be given as numbers or as strings of the form
// "k*pi" (k rational or decimal, e.g. "3*pi", "2.5*pi").

namespace wbary {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses a number or "k*pi" string.
double parse_rho(const nlohmann::json& v);

struct RunConfig {
    SingularConfig cfg;                    // alphas, rho, positions, tol
    int grid_n = 256;
    double delta = 0.1;                    // bubble interpolation cutoff
    std::vector<double> lambda_grid = {32, 64, 128, 256, 512, 1024, 2048, 4096};
    std::uint64_t seed = 1;
    double radius = 0.05;                  // concentration / projection radius
    double eps = 0.05;                     // projection / interior margin
    double gamma0 = 0.2;                   // improved-probe mass fraction
    double delta0 = 0.05;                  // improved-probe separation scale
    int count = 10000;                     // stability sweep size
    std::vector<double> rho_grid;          // parameter sweep values
    std::optional<Barycenter> sigma;       // bubble family / probe measure
    std::optional<Barycenter> sigma2;      // second measure for `distance`
    int mt_family = 0;                     // 0 = free bubble, else pinned index
    nlohmann::json raw;                    // resolved view used for hashing

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);
};

// Canonical resolved-config JSON (defaults filled in), used for artifact
// naming: artifacts are "<command>-<hash8(resolved config)>.json/.csv".
nlohmann::json resolved_json(const RunConfig& rc);

Barycenter parse_barycenter(const nlohmann::json& j);
nlohmann::json barycenter_json(const Barycenter& b);

}  // namespace wbary
