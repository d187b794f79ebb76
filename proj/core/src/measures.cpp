#include "wbary/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace wbary {

double Barycenter::total_weight() const {
    double s = 0.0;
    for (const Atom& a : atoms) s += a.weight;
    return s;
}

Stratum Barycenter::pattern() const {
    Stratum s;
    for (const Atom& a : atoms) {
        if (a.is_pinned())
            s.pinned |= 1ull << (a.singular_index - 1);
        else
            ++s.free_atoms;
    }
    return s;
}

void Barycenter::validate(const SingularConfig& cfg) const {
    double sum = 0.0;
    for (const Atom& a : atoms) {
        if (!(a.weight >= 0.0)) throw std::invalid_argument("atom weights must be non-negative");
        sum += a.weight;
        if (a.singular_index < 0 || a.singular_index > cfg.point_count())
            throw std::invalid_argument("singular index out of range");
        if (a.is_pinned() && !cfg.positions.empty()) {
            const Vec2& p = cfg.positions[static_cast<size_t>(a.singular_index - 1)];
            if (torus_dist(a.pos, p) > 1e-12)
                throw std::invalid_argument("pinned atom must sit at its singular point");
        }
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("atom weights must sum to 1");
    if (!pattern().admissible(cfg))
        throw std::invalid_argument("support pattern is not admissible for (rho, alpha)");
    for (size_t i = 0; i < atoms.size(); ++i)
        for (size_t j = i + 1; j < atoms.size(); ++j) {
            if (torus_dist(atoms[i].pos, atoms[j].pos) == 0.0)
                throw std::invalid_argument("atom positions must be distinct");
            if (atoms[i].is_pinned() &&
                atoms[i].singular_index == atoms[j].singular_index)
                throw std::invalid_argument("singular point carries two atoms");
        }
}

namespace {

// Exact min-cost transport between the atoms of s1 (supplies) and s2
// (demands) with ground cost min(d_g, 2), by successive shortest paths
// (Bellman-Ford); the graph is a complete bipartite network plus a
// super-source and super-sink, small enough for exactness to be cheap.
double transport_cost(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    const int n1 = static_cast<int>(a.size());
    const int n2 = static_cast<int>(b.size());
    const int S = 0, T = n1 + n2 + 1, V = n1 + n2 + 2;

    struct Edge {
        int to;
        double cap;
        double cost;
        int rev;
    };
    std::vector<std::vector<Edge>> g(static_cast<size_t>(V));
    auto add_edge = [&](int u, int v, double cap, double cost) {
        g[static_cast<size_t>(u)].push_back({v, cap, cost, static_cast<int>(g[static_cast<size_t>(v)].size())});
        g[static_cast<size_t>(v)].push_back({u, 0.0, -cost, static_cast<int>(g[static_cast<size_t>(u)].size()) - 1});
    };
    double supply = 0.0;
    for (int i = 0; i < n1; ++i) {
        add_edge(S, 1 + i, a[static_cast<size_t>(i)].weight, 0.0);
        supply += a[static_cast<size_t>(i)].weight;
    }
    for (int j = 0; j < n2; ++j)
        add_edge(1 + n1 + j, T, b[static_cast<size_t>(j)].weight, 0.0);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            const double d = torus_dist(a[static_cast<size_t>(i)].pos, b[static_cast<size_t>(j)].pos);
            add_edge(1 + i, 1 + n1 + j, std::numeric_limits<double>::infinity(),
                     std::min(d, 2.0));
        }

    double total_cost = 0.0;
    double shipped = 0.0;
    const double eps = 1e-14;
    while (shipped < supply - eps) {
        // Bellman-Ford shortest path S -> T in the residual network.
        std::vector<double> dist(static_cast<size_t>(V), std::numeric_limits<double>::infinity());
        std::vector<int> pv(static_cast<size_t>(V), -1), pe(static_cast<size_t>(V), -1);
        dist[static_cast<size_t>(S)] = 0.0;
        for (int pass = 0; pass < V; ++pass) {
            bool changed = false;
            for (int u = 0; u < V; ++u) {
                if (!std::isfinite(dist[static_cast<size_t>(u)])) continue;
                for (size_t e = 0; e < g[static_cast<size_t>(u)].size(); ++e) {
                    const Edge& ed = g[static_cast<size_t>(u)][e];
                    if (ed.cap <= eps) continue;
                    const double nd = dist[static_cast<size_t>(u)] + ed.cost;
                    if (nd < dist[static_cast<size_t>(ed.to)] - 1e-15) {
                        dist[static_cast<size_t>(ed.to)] = nd;
                        pv[static_cast<size_t>(ed.to)] = u;
                        pe[static_cast<size_t>(ed.to)] = static_cast<int>(e);
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        if (!std::isfinite(dist[static_cast<size_t>(T)])) break;
        double push = supply - shipped;
        for (int v = T; v != S; v = pv[static_cast<size_t>(v)])
            push = std::min(push, g[static_cast<size_t>(pv[static_cast<size_t>(v)])]
                                      [static_cast<size_t>(pe[static_cast<size_t>(v)])].cap);
        for (int v = T; v != S; v = pv[static_cast<size_t>(v)]) {
            Edge& ed = g[static_cast<size_t>(pv[static_cast<size_t>(v)])]
                         [static_cast<size_t>(pe[static_cast<size_t>(v)])];
            ed.cap -= push;
            g[static_cast<size_t>(ed.to)][static_cast<size_t>(ed.rev)].cap += push;
        }
        total_cost += push * dist[static_cast<size_t>(T)];
        shipped += push;
    }
    return total_cost;
}

}  // namespace

double bl_distance(const Barycenter& s1, const Barycenter& s2) {
    if (std::abs(s1.total_weight() - s2.total_weight()) > 1e-9)
        throw std::invalid_argument("bl_distance requires equal total masses");
    if (s1.atoms.empty()) return 0.0;
    return transport_cost(s1.atoms, s2.atoms);
}

namespace {

// Drops zero-weight atoms (candidate slots that received no mass).
Barycenter strip_zero(const Barycenter& b) {
    Barycenter out;
    for (const Atom& a : b.atoms)
        if (a.weight > 0.0) out.atoms.push_back(a);
    return out;
}

struct CandidateState {
    std::vector<Vec2> slots;       // free slot positions
    std::vector<Vec2> pinned_pos;  // fixed positions p_j, j in target pinned
    std::vector<int> pinned_idx;
};

// Assigns every atom of sigma to its nearest slot and evaluates the
// bounded-Lipschitz distance to the resulting measure.
double evaluate_candidate(const Barycenter& sigma, const CandidateState& st) {
    Barycenter cand;
    for (size_t j = 0; j < st.pinned_pos.size(); ++j)
        cand.atoms.push_back({0.0, st.pinned_pos[j], st.pinned_idx[j]});
    for (const Vec2& s : st.slots) cand.atoms.push_back({0.0, s, 0});
    for (const Atom& a : sigma.atoms) {
        size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (size_t c = 0; c < cand.atoms.size(); ++c) {
            const double d = torus_dist(a.pos, cand.atoms[c].pos);
            if (d < bd) { bd = d; best = c; }
        }
        cand.atoms[best].weight += a.weight;
    }
    return bl_distance(sigma, strip_zero(cand));
}

}  // namespace

double distance_to_stratum(const Barycenter& sigma, const Stratum& s,
                           const SingularConfig& cfg, int budget) {
    if (s.free_atoms == 0 && s.pinned == 0)
        throw std::invalid_argument("distance to the empty stratum is undefined");
    if (precedes(sigma.pattern(), s)) return 0.0;
    CandidateState st;
    for (int j : s.pinned_indices()) {
        st.pinned_idx.push_back(j);
        st.pinned_pos.push_back(cfg.positions.empty() ? Vec2{0.5, 0.5}
                                                      : cfg.positions[static_cast<size_t>(j - 1)]);
    }
    // Free slots at the heaviest atoms of sigma.
    std::vector<Atom> sorted = sigma.atoms;
    std::sort(sorted.begin(), sorted.end(),
              [](const Atom& x, const Atom& y) { return x.weight > y.weight; });
    for (const Atom& a : sorted) {
        if (static_cast<int>(st.slots.size()) >= s.free_atoms) break;
        st.slots.push_back(a.pos);
    }
    int extra = 0;
    while (static_cast<int>(st.slots.size()) < s.free_atoms) {
        // Deterministic filler positions for surplus slots (zero mass).
        st.slots.push_back({wrap_unit(0.137 + 0.293 * extra), wrap_unit(0.411 + 0.177 * extra)});
        ++extra;
    }

    double best = evaluate_candidate(sigma, st);
    int evals = 1;
    std::mt19937_64 rng(0x5eedu);
    std::normal_distribution<double> gauss(0.0, 1.0);
    CandidateState bs = st;
    double scale = 0.15;
    while (evals < budget && !bs.slots.empty()) {
        CandidateState trial = bs;
        for (Vec2& p : trial.slots) {
            p.x = wrap_unit(p.x + scale * gauss(rng));
            p.y = wrap_unit(p.y + scale * gauss(rng));
        }
        const double v = evaluate_candidate(sigma, trial);
        ++evals;
        if (v < best) {
            best = v;
            bs = trial;
        }
        scale *= 0.97;
        if (scale < 1e-4) scale = 0.15;
    }
    return best;
}

InteriorCheck check_eps_interior(const Barycenter& sigma, double eps,
                                 const SingularConfig& cfg) {
    sigma.validate(cfg);
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    InteriorCheck out;

    auto make_witness = [&](size_t from, size_t into, const Vec2& pos, int sing) {
        Barycenter w;
        for (size_t i = 0; i < sigma.atoms.size(); ++i) {
            if (i == from) continue;
            Atom a = sigma.atoms[i];
            if (i == into) {
                a.weight += sigma.atoms[from].weight;
                a.pos = pos;
                a.singular_index = sing;
            }
            w.atoms.push_back(a);
        }
        out.witness = w;
        out.witness_pattern = w.pattern();
    };

    for (size_t i = 0; i < sigma.atoms.size(); ++i) {
        if (sigma.atoms[i].weight < 0.5 * eps) {
            // Light atom: merge it into its nearest neighbour; the moved mass
            // bounds the distance by weight * min(d, 2) <= 2 * weight < eps.
            size_t j = (i == 0) ? 1 : 0;
            double bd = std::numeric_limits<double>::infinity();
            for (size_t k = 0; k < sigma.atoms.size(); ++k) {
                if (k == i) continue;
                const double d = torus_dist(sigma.atoms[i].pos, sigma.atoms[k].pos);
                if (d < bd) { bd = d; j = k; }
            }
            out.interior = false;
            out.reason = "atom weight below eps/2";
            if (sigma.atoms.size() > 1) {
                make_witness(i, j, sigma.atoms[j].pos, sigma.atoms[j].singular_index);
                out.witness_bound = sigma.atoms[i].weight * std::min(bd, 2.0);
            }
            return out;
        }
    }
    for (size_t i = 0; i < sigma.atoms.size(); ++i)
        for (size_t j = i + 1; j < sigma.atoms.size(); ++j) {
            const double d = torus_dist(sigma.atoms[i].pos, sigma.atoms[j].pos);
            if (d >= 0.5 * eps) continue;
            out.interior = false;
            out.reason = "atom pair closer than eps/2";
            const Atom& ai = sigma.atoms[i];
            const Atom& aj = sigma.atoms[j];
            if (ai.is_pinned() || aj.is_pinned()) {
                // Merge the free atom onto the pinned one (or the lighter
                // pinned atom onto the heavier): moved mass * d bounds it.
                const bool keep_i = ai.is_pinned() && (!aj.is_pinned() || ai.weight >= aj.weight);
                const size_t keep = keep_i ? i : j, drop = keep_i ? j : i;
                make_witness(drop, keep, sigma.atoms[keep].pos,
                             sigma.atoms[keep].singular_index);
                out.witness_bound = sigma.atoms[drop].weight * std::min(d, 2.0);
            } else {
                // Two free atoms: merge at the midpoint, each mass moves d/2.
                const Vec2 disp = torus_disp(aj.pos, ai.pos);
                const Vec2 mid = torus_wrap({ai.pos.x + 0.5 * disp.x, ai.pos.y + 0.5 * disp.y});
                make_witness(j, i, mid, 0);
                out.witness_bound = (ai.weight + aj.weight) * 0.5 * d;
            }
            return out;
        }
    return out;
}

ProjectionResult project_density(const TorusField& density, const SingularConfig& cfg,
                                 double radius, double eps) {
    if (!(radius > 0.0) || !(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("bad projection parameters");
    const int n = density.n();
    std::vector<double> mass(density.data());
    for (double& m : mass) {
        if (m < 0.0) throw std::invalid_argument("density must be non-negative");
        m /= static_cast<double>(n) * n;
    }
    double total = 0.0;
    for (double m : mass) total += m;
    ProjectionResult res;
    if (total <= 0.0) return res;

    std::uint64_t used_pinned = 0;
    double captured = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
        if (captured >= (1.0 - eps) * total) break;
        // Heaviest remaining cell is the peak.
        size_t peak = 0;
        for (size_t i = 1; i < mass.size(); ++i)
            if (mass[i] > mass[peak]) peak = i;
        if (mass[peak] <= 0.0) break;
        Vec2 center = density.node(static_cast<int>(peak) % n, static_cast<int>(peak) / n);
        int sing = 0;
        for (int j = 1; j <= cfg.point_count(); ++j) {
            if ((used_pinned >> (j - 1)) & 1u) continue;
            if (torus_dist(center, cfg.positions[static_cast<size_t>(j - 1)]) <= 2.0 * radius) {
                sing = j;
                center = cfg.positions[static_cast<size_t>(j - 1)];
                break;
            }
        }
        Stratum next = res.pattern;
        if (sing > 0)
            next.pinned |= 1ull << (sing - 1);
        else
            ++next.free_atoms;
        if (!next.admissible(cfg)) {
            res.admissible = false;
            res.residual_mass = total - captured;
            res.captured_mass = captured;
            return res;
        }
        double ball = 0.0;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const size_t c = static_cast<size_t>(iy) * n + ix;
                if (mass[c] <= 0.0) continue;
                if (torus_dist(density.node(ix, iy), center) <= radius) {
                    ball += mass[c];
                    mass[c] = 0.0;
                }
            }
        if (ball <= 0.0) break;
        res.sigma.atoms.push_back({ball, center, sing});
        res.pattern = next;
        if (sing > 0) used_pinned |= 1ull << (sing - 1);
        captured += ball;
    }
    res.captured_mass = captured;
    res.residual_mass = total - captured;
    res.admissible = captured >= (1.0 - eps) * total && !res.sigma.atoms.empty();
    if (res.admissible)
        for (Atom& a : res.sigma.atoms) a.weight /= captured;
    return res;
}

}  // namespace wbary
