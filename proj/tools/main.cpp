// Command-line runner for the weighted-barycenter workbench.
//
// Usage: wbary <command> --config cfg.json [--out DIR] [--seed N]
//               [--lambda-grid "32,64,..."] [--strict]
//
// Each run writes two artifacts, <command>-<hash8>.json and .csv, where the
// hash digests the fully resolved configuration; identical (command, config,
// seed) inputs produce byte-identical artifacts.
//
// Exit codes: 0 success (all verdicts pass), 1 verdict failure, 2 refused
// precondition (non-coercive rho, singular rho, under-resolved grid),
// 64 usage error, 65 invalid configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wbary/bubble.hpp"
#include "wbary/config.hpp"
#include "wbary/experiments.hpp"
#include "wbary/functional.hpp"
#include "wbary/measures.hpp"
#include "wbary/report.hpp"
#include "wbary/strata.hpp"

namespace {

using namespace wbary;

Barycenter default_family() {
    Barycenter b;
    b.atoms.push_back({1.0, {0.31, 0.47}, 0});
    return b;
}

Barycenter mt_family_measure(const RunConfig& rc) {
    if (rc.sigma && rc.sigma->atoms.size() == 1) return *rc.sigma;
    if (rc.mt_family > 0) {
        if (rc.mt_family > rc.cfg.point_count())
            throw ConfigError("mt_family index out of range");
        Barycenter b;
        b.atoms.push_back({1.0, rc.cfg.positions[static_cast<size_t>(rc.mt_family - 1)],
                           rc.mt_family});
        return b;
    }
    return default_family();
}

ScanReport run_strata(const RunConfig& rc) {
    ScanReport rep;
    rep.columns = {"free_atoms", "pinned_mask", "mass", "dim"};
    for (const Stratum& s : enumerate_strata(rc.cfg))
        rep.rows.push_back({static_cast<double>(s.free_atoms),
                            static_cast<double>(s.pinned), s.mass(rc.cfg),
                            static_cast<double>(s.dim())});
    nlohmann::json jm = nlohmann::json::array();
    for (const Stratum& s : minimal_strata(rc.cfg)) jm.push_back(s.to_string());
    rep.params["minimal_strata"] = jm;
    nlohmann::json jv = nlohmann::json::array();
    for (const SingularValue& v : singular_value_set(rc.cfg, rc.cfg.rho))
        jv.push_back({{"value", v.value}, {"witness", v.witness()}});
    rep.params["singular_values_below_rho"] = jv;
    rep.scalars["n_strata"] = static_cast<double>(rep.rows.size());
    rep.verdicts["enumerated"] = true;
    return rep;
}

ScanReport run_graph(const RunConfig& rc) {
    ScanReport rep;
    const GraphCase gc = classify_graph_case(rc.cfg);
    rep.columns = {"node_or_edge", "i", "j"};
    for (int v : gc.nodes) rep.rows.push_back({0.0, static_cast<double>(v), 0.0});
    for (auto [a, b] : gc.edges)
        rep.rows.push_back({1.0, static_cast<double>(a), static_cast<double>(b)});
    rep.scalars["components"] = gc.components;
    rep.scalars["has_cycle"] = gc.has_cycle ? 1.0 : 0.0;
    rep.scalars["verdict"] = static_cast<double>(static_cast<int>(gc.verdict));
    rep.params["verdict"] = gc.verdict == GraphVerdict::contractible ? "contractible"
                            : gc.verdict == GraphVerdict::non_contractible
                                ? "non_contractible"
                                : "not_applicable";
    rep.params["condition_isolated_points"] = graph_condition_isolated_points(rc.cfg);
    rep.params["condition_light_triangle"] = graph_condition_light_triangle(rc.cfg);
    rep.verdicts["applicable"] = gc.verdict != GraphVerdict::not_applicable;
    return rep;
}

ScanReport run_distance(const RunConfig& rc) {
    if (!rc.sigma || !rc.sigma2)
        throw ConfigError("distance requires 'sigma' and 'sigma2' in the config");
    ScanReport rep;
    rep.columns = {"bl_distance"};
    const double d = bl_distance(*rc.sigma, *rc.sigma2);
    rep.rows.push_back({d});
    rep.scalars["bl_distance"] = d;
    rep.verdicts["computed"] = true;
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-barycenter workbench"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::string lambda_override;
    std::uint64_t seed_override = 0;
    bool have_seed = false, strict = false;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory for artifacts");
    app.add_option("--lambda-grid", lambda_override, "comma-separated lambda values");
    app.add_option("--seed", seed_override, "seed override")->each([&](std::string) {
        have_seed = true;
    });
    app.add_flag("--strict", strict, "treat warnings (skips, refusals) as failures");

    const std::vector<std::string> commands = {
        "strata",      "stability", "graph",          "sweep",  "energy-scan",
        "concentration", "mt-probe",  "improved-probe", "solve", "distance"};
    for (const auto& c : commands) app.add_subcommand(c)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 64;
    }

    const std::string command = app.get_subcommands().front()->get_name();

    try {
        RunConfig rc = config_path.empty() ? RunConfig::from_json(nlohmann::json::object())
                                           : RunConfig::from_file(config_path);
        if (have_seed) rc.seed = seed_override;
        if (!lambda_override.empty()) {
            rc.lambda_grid.clear();
            std::stringstream ss(lambda_override);
            std::string tok;
            while (std::getline(ss, tok, ',')) rc.lambda_grid.push_back(std::stod(tok));
            if (rc.lambda_grid.empty()) throw ConfigError("empty lambda grid");
        }
        rc.raw = resolved_json(rc);

        ScanReport rep;
        if (command == "strata") {
            rep = run_strata(rc);
        } else if (command == "stability") {
            rep = stability_sweep(rc.seed, rc.count);
        } else if (command == "graph") {
            rep = run_graph(rc);
        } else if (command == "sweep") {
            if (rc.rho_grid.empty()) throw ConfigError("sweep requires 'rho_grid'");
            rep = parameter_sweep(rc.cfg, rc.rho_grid);
        } else if (command == "energy-scan") {
            rep = energy_scan(rc.cfg, rc.sigma ? *rc.sigma : default_family(),
                              rc.lambda_grid, rc.delta, rc.cfg.rho);
        } else if (command == "concentration") {
            rep = concentration_scan(rc.cfg, rc.sigma ? *rc.sigma : default_family(),
                                     rc.lambda_grid.front(), rc.radius, rc.delta);
        } else if (command == "mt-probe") {
            rep = mt_probe(rc.cfg, mt_family_measure(rc), rc.lambda_grid, rc.delta);
        } else if (command == "improved-probe") {
            if (!rc.sigma) throw ConfigError("improved-probe requires 'sigma'");
            rep = improved_probe(rc.cfg, *rc.sigma, rc.lambda_grid, rc.delta, rc.gamma0,
                                 rc.delta0);
        } else if (command == "solve") {
            rep = coercive_solve_scan(rc.cfg, rc.cfg.rho, rc.grid_n);
        } else if (command == "distance") {
            rep = run_distance(rc);
        }

        nlohmann::json hashed = rc.raw;
        hashed["command"] = command;
        rep.id = command + "-" + hash8(hashed);
        nlohmann::json merged_params = rc.raw;
        for (auto& [k, v] : rep.params.items()) merged_params[k] = v;
        rep.params = merged_params;

        const std::string base = out_dir + "/" + rep.id;
        write_text_file(base + ".json", rep.to_json().dump(2) + "\n");
        write_text_file(base + ".csv", rep.to_csv());

        bool ok = rep.all_pass();
        if (strict && rep.scalars.count("skipped_singular_rho") &&
            rep.scalars.at("skipped_singular_rho") > 0)
            ok = false;
        std::cout << rep.id << (ok ? " PASS" : " FAIL") << "\n";
        for (const auto& [name, v] : rep.verdicts)
            std::cout << "  " << (v ? "pass" : "FAIL") << " " << name << "\n";
        return ok ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 65;
    } catch (const SingularRhoError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const CoercivityError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const ResolutionError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 65;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
