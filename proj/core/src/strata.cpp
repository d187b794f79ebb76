#include "wbary/strata.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

namespace wbary {

void SingularConfig::validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
    if (rel_tol < 0.0) throw std::invalid_argument("tolerance must be non-negative");
    if (alphas.size() > 62) throw std::invalid_argument("too many singular points");
    for (double a : alphas) {
        if (!(a > -1.0 && a < 0.0))
            throw std::invalid_argument("singular orders must lie in (-1,0)");
    }
    if (!positions.empty()) {
        if (positions.size() != alphas.size())
            throw std::invalid_argument("positions must match the number of orders");
        for (size_t i = 0; i < positions.size(); ++i)
            for (size_t j = i + 1; j < positions.size(); ++j)
                if (torus_dist(positions[i], positions[j]) == 0.0)
                    throw std::invalid_argument("singular points must be distinct");
    }
}

int Stratum::pinned_count() const { return std::popcount(pinned); }

std::vector<int> Stratum::pinned_indices() const {
    std::vector<int> out;
    for (int j = 1; j <= 64; ++j)
        if ((pinned >> (j - 1)) & 1u) out.push_back(j);
    return out;
}

double Stratum::mass(const SingularConfig& cfg) const {
    double units = free_atoms;
    for (int j : pinned_indices()) units += cfg.unit_mass(j);
    return kFourPi * units;
}

std::string Stratum::to_string() const {
    std::ostringstream os;
    os << "(" << free_atoms << ",{";
    bool first = true;
    for (int j : pinned_indices()) {
        if (!first) os << ",";
        os << j;
        first = false;
    }
    os << "})";
    return os.str();
}

double weighted_count(const SingularConfig& cfg, const std::vector<int>& support) {
    std::set<int> seen;
    double total = 0.0;
    for (int label : support) {
        if (label == 0) {
            total += 1.0;
        } else {
            if (label < 1 || label > cfg.point_count())
                throw std::invalid_argument("singular index out of range");
            if (!seen.insert(label).second)
                throw std::invalid_argument("singular point used twice in a support");
            total += cfg.unit_mass(label);
        }
    }
    return total;
}

std::string SingularValue::witness() const {
    std::ostringstream os;
    os << "4pi*(" << n << " + sum{";
    bool first = true;
    for (int j = 1; j <= 64; ++j)
        if ((subset >> (j - 1)) & 1u) {
            if (!first) os << ",";
            os << j;
            first = false;
        }
    os << "}(1+alpha))";
    return os.str();
}

std::vector<SingularValue> singular_value_set(const SingularConfig& cfg, double cap) {
    cfg.validate();
    const int m = cfg.point_count();
    std::vector<SingularValue> vals;
    const int n_max = static_cast<int>(cap / kFourPi) + 1;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        double units = 0.0;
        for (int j = 1; j <= m; ++j)
            if ((mask >> (j - 1)) & 1u) units += cfg.unit_mass(j);
        for (int n = 0; n <= n_max; ++n) {
            if (n == 0 && mask == 0) continue;
            double v = kFourPi * (n + units);
            if (v <= cap) vals.push_back({v, n, mask});
        }
    }
    std::sort(vals.begin(), vals.end(),
              [](const SingularValue& a, const SingularValue& b) { return a.value < b.value; });
    std::vector<SingularValue> out;
    for (const SingularValue& v : vals)
        if (out.empty() || v.value - out.back().value > cfg.tol()) out.push_back(v);
    return out;
}

std::vector<double> singular_values(const SingularConfig& cfg, double cap) {
    std::vector<double> out;
    for (const SingularValue& v : singular_value_set(cfg, cap)) out.push_back(v.value);
    return out;
}

static void reject_singular_rho(const SingularConfig& cfg) {
    for (double s : singular_values(cfg, cfg.rho + 1.0))
        if (std::abs(cfg.rho - s) <= cfg.tol())
            throw SingularRhoError("rho lies on the singular value set");
}

std::vector<Stratum> enumerate_strata(const SingularConfig& cfg) {
    cfg.validate();
    reject_singular_rho(cfg);
    const int m = cfg.point_count();
    const int k_max = static_cast<int>(cfg.rho / kFourPi);
    std::vector<Stratum> out;
    for (int k = 0; k <= k_max; ++k) {
        for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
            if (k == 0 && mask == 0) continue;  // supports are non-empty
            Stratum s{k, mask};
            if (s.admissible(cfg)) out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end(), [&](const Stratum& a, const Stratum& b) {
        double ma = a.mass(cfg), mb = b.mass(cfg);
        if (ma != mb) return ma < mb;
        if (a.free_atoms != b.free_atoms) return a.free_atoms < b.free_atoms;
        return a.pinned < b.pinned;
    });
    return out;
}

bool precedes(const Stratum& s1, const Stratum& s2) {
    // s1 degenerates from s2: the extra free atoms of s2 must cover both the
    // free atoms of s1 and the points pinned in s1 but not in s2.
    const int extra = std::popcount(s1.pinned & ~s2.pinned);
    return s1.free_atoms + extra <= s2.free_atoms;
}

std::vector<Stratum> maximal_common_substrata(const Stratum& s1, const Stratum& s2,
                                              const SingularConfig& cfg) {
    const int m = cfg.point_count();
    const int k_cap = std::min(s1.free_atoms, s2.free_atoms);
    std::vector<Stratum> common;
    for (int k = 0; k <= k_cap; ++k) {
        for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
            if (k == 0 && mask == 0) continue;  // supports are non-empty
            Stratum s{k, mask};
            if (precedes(s, s1) && precedes(s, s2)) common.push_back(s);
        }
    }
    std::vector<Stratum> out;
    for (const Stratum& s : common) {
        bool maximal = true;
        for (const Stratum& t : common)
            if (!(t == s) && precedes(s, t)) { maximal = false; break; }
        if (maximal) out.push_back(s);
    }
    return out;
}

std::vector<Stratum> minimal_strata(const SingularConfig& cfg) {
    std::vector<Stratum> all = enumerate_strata(cfg);
    std::vector<Stratum> out;
    for (const Stratum& s : all) {
        bool minimal = true;
        for (const Stratum& t : all) {
            if (!(t == s) && precedes(t, s)) { minimal = false; break; }
        }
        if (minimal) out.push_back(s);
    }
    return out;
}

bool is_pj_stable(const SingularConfig& cfg, int j) {
    if (j < 1 || j > cfg.point_count())
        throw std::invalid_argument("singular index out of range");
    for (const Stratum& s : enumerate_strata(cfg)) {
        if (s.has_pinned(j)) continue;
        Stratum extended{s.free_atoms, s.pinned | (1ull << (j - 1))};
        if (!extended.admissible(cfg)) return false;
    }
    return true;
}

bool conjecture_literal(const SingularConfig& cfg, bool with_shift) {
    cfg.validate();
    const int m = cfg.point_count();
    if (m < 1) return false;
    const int n_max = with_shift ? static_cast<int>(cfg.rho / kFourPi) : 0;
    for (std::uint64_t mask = 1; mask < (1ull << (m - 1)); ++mask) {
        // mask bit i-2 set means singular index i in {2..m} belongs to iota.
        double units = 0.0;
        for (int i = 2; i <= m; ++i)
            if ((mask >> (i - 2)) & 1u) units += cfg.unit_mass(i);
        for (int n = 0; n <= n_max; ++n) {
            double lower = kFourPi * (n + units);
            double upper = kFourPi * (n + units + cfg.unit_mass(1));
            if (cfg.rho > lower + cfg.tol() && cfg.rho < upper - cfg.tol()) return true;
        }
    }
    return false;
}

namespace {
int find_root(std::vector<int>& parent, int v) {
    while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    return v;
}
}  // namespace

GraphCase classify_graph_case(const SingularConfig& cfg) {
    GraphCase gc;
    std::vector<Stratum> all = enumerate_strata(cfg);
    for (const Stratum& s : all) {
        if (s.dim() > 1) {
            gc.verdict = GraphVerdict::not_applicable;
            return gc;
        }
    }
    const int m = cfg.point_count();
    std::vector<int> parent(m + 1);
    std::iota(parent.begin(), parent.end(), 0);
    for (const Stratum& s : all) {
        if (s.free_atoms != 0) continue;
        std::vector<int> idx = s.pinned_indices();
        if (idx.size() == 1) gc.nodes.push_back(idx[0]);
        if (idx.size() == 2) gc.edges.emplace_back(idx[0], idx[1]);
    }
    for (auto [a, b] : gc.edges) parent[find_root(parent, a)] = find_root(parent, b);
    std::set<int> roots;
    for (int v : gc.nodes) roots.insert(find_root(parent, v));
    gc.components = static_cast<int>(roots.size());
    gc.has_cycle =
        static_cast<int>(gc.edges.size()) > static_cast<int>(gc.nodes.size()) - gc.components;
    gc.verdict = (gc.components <= 1 && !gc.has_cycle) ? GraphVerdict::contractible
                                                       : GraphVerdict::non_contractible;
    return gc;
}

bool graph_condition_isolated_points(const SingularConfig& cfg) {
    const int m = cfg.point_count();
    if (m < 2) return false;
    int nodes = 0;
    for (int j = 1; j <= m; ++j)
        if (Stratum{0, 1ull << (j - 1)}.admissible(cfg)) ++nodes;
    if (nodes < 2) return false;
    for (int i = 1; i <= m; ++i)
        for (int j = i + 1; j <= m; ++j)
            if (Stratum{0, (1ull << (i - 1)) | (1ull << (j - 1))}.admissible(cfg)) return false;
    return true;
}

bool graph_condition_light_triangle(const SingularConfig& cfg) {
    const int m = cfg.point_count();
    if (m < 3) return false;
    std::vector<int> idx(static_cast<size_t>(m));
    std::iota(idx.begin(), idx.end(), 1);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return cfg.unit_mass(a) < cfg.unit_mass(b); });
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            Stratum pair{0, (1ull << (idx[static_cast<size_t>(a)] - 1)) |
                                (1ull << (idx[static_cast<size_t>(b)] - 1))};
            if (!pair.admissible(cfg)) return false;
        }
    return true;
}

}  // namespace wbary
