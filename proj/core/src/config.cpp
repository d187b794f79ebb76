#include "wbary/config.hpp"

#include <cmath>
#include <fstream>

namespace wbary {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double parse_rho(const nlohmann::json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        // Accept "pi", "k*pi", "k pi" with k a decimal or a/b fraction.
        auto star = s.find("pi");
        if (star == std::string::npos) throw ConfigError("rho string must mention pi");
        std::string coef = s.substr(0, star);
        while (!coef.empty() && (coef.back() == '*' || coef.back() == ' ')) coef.pop_back();
        if (coef.empty()) return kPi;
        auto slash = coef.find('/');
        try {
            if (slash != std::string::npos) {
                const double num = std::stod(coef.substr(0, slash));
                const double den = std::stod(coef.substr(slash + 1));
                return num / den * kPi;
            }
            return std::stod(coef) * kPi;
        } catch (const std::exception&) {
            throw ConfigError("cannot parse rho value '" + s + "'");
        }
    }
    throw ConfigError("rho must be a number or a '*pi' string");
}

Barycenter parse_barycenter(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("a measure must be an array of atoms");
    Barycenter b;
    for (const auto& ja : j) {
        Atom a;
        if (!ja.contains("t")) throw ConfigError("atom missing weight 't'");
        a.weight = ja.at("t").get<double>();
        if (ja.contains("x")) {
            const auto& x = ja.at("x");
            if (!x.is_array() || x.size() != 2) throw ConfigError("atom 'x' must be [x,y]");
            a.pos = {x[0].get<double>(), x[1].get<double>()};
        }
        if (ja.contains("p")) a.singular_index = ja.at("p").get<int>();
        b.atoms.push_back(a);
    }
    return b;
}

nlohmann::json barycenter_json(const Barycenter& b) {
    nlohmann::json out = nlohmann::json::array();
    for (const Atom& a : b.atoms) {
        nlohmann::json ja;
        ja["t"] = a.weight;
        ja["x"] = {a.pos.x, a.pos.y};
        if (a.is_pinned()) ja["p"] = a.singular_index;
        out.push_back(ja);
    }
    return out;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig rc;
    try {
        if (j.contains("alphas")) rc.cfg.alphas = j.at("alphas").get<std::vector<double>>();
        if (j.contains("rho")) rc.cfg.rho = parse_rho(j.at("rho"));
        if (j.contains("tol")) rc.cfg.rel_tol = j.at("tol").get<double>();
        if (j.contains("positions")) {
            for (const auto& jp : j.at("positions")) {
                if (!jp.is_array() || jp.size() != 2)
                    throw ConfigError("positions must be [x,y] pairs");
                rc.cfg.positions.push_back({jp[0].get<double>(), jp[1].get<double>()});
            }
        } else {
            // Defaults on the half-cell lattice, well separated.
            static const Vec2 def[6] = {{0.25, 0.25}, {0.75, 0.75}, {0.75, 0.25},
                                        {0.25, 0.75}, {0.5, 0.25},  {0.5, 0.75}};
            for (size_t i = 0; i < rc.cfg.alphas.size() && i < 6; ++i)
                rc.cfg.positions.push_back(def[i]);
            if (rc.cfg.alphas.size() > 6)
                throw ConfigError("configs with more than 6 points need explicit positions");
        }
        if (j.contains("grid_n")) rc.grid_n = j.at("grid_n").get<int>();
        if (j.contains("delta")) rc.delta = j.at("delta").get<double>();
        if (j.contains("lambda_grid"))
            rc.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
        if (j.contains("seed")) rc.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("radius")) rc.radius = j.at("radius").get<double>();
        if (j.contains("eps")) rc.eps = j.at("eps").get<double>();
        if (j.contains("gamma0")) rc.gamma0 = j.at("gamma0").get<double>();
        if (j.contains("delta0")) rc.delta0 = j.at("delta0").get<double>();
        if (j.contains("count")) rc.count = j.at("count").get<int>();
        if (j.contains("rho_grid")) {
            for (const auto& jr : j.at("rho_grid")) rc.rho_grid.push_back(parse_rho(jr));
        }
        if (j.contains("sigma")) rc.sigma = parse_barycenter(j.at("sigma"));
        if (j.contains("sigma2")) rc.sigma2 = parse_barycenter(j.at("sigma2"));
        if (j.contains("mt_family")) rc.mt_family = j.at("mt_family").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    try {
        rc.cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    if (rc.grid_n < 16 || rc.grid_n > 4096 || (rc.grid_n & (rc.grid_n - 1)) != 0)
        throw ConfigError("grid_n must be a power of two in [16, 4096]");
    rc.raw = resolved_json(rc);
    return rc;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

nlohmann::json resolved_json(const RunConfig& rc) {
    nlohmann::json j;
    j["alphas"] = rc.cfg.alphas;
    j["rho"] = rc.cfg.rho;
    j["tol"] = rc.cfg.rel_tol;
    nlohmann::json pos = nlohmann::json::array();
    for (const Vec2& p : rc.cfg.positions) pos.push_back({p.x, p.y});
    j["positions"] = pos;
    j["grid_n"] = rc.grid_n;
    j["delta"] = rc.delta;
    j["lambda_grid"] = rc.lambda_grid;
    j["seed"] = rc.seed;
    j["radius"] = rc.radius;
    j["eps"] = rc.eps;
    j["gamma0"] = rc.gamma0;
    j["delta0"] = rc.delta0;
    j["count"] = rc.count;
    j["rho_grid"] = rc.rho_grid;
    j["mt_family"] = rc.mt_family;
    if (rc.sigma) j["sigma"] = barycenter_json(*rc.sigma);
    if (rc.sigma2) j["sigma2"] = barycenter_json(*rc.sigma2);
    return j;
}

}  // namespace wbary
