#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wbary/torus.hpp"

// Combinatorics of weighted barycenter strata on the torus.
//
// A configuration fixes m singular points p_j with orders alpha_j in (-1,0)
// and a parameter rho > 0.  A stratum is described by the number k of free
// atoms together with the subset iota of singular points that carry an atom;
// it enters the low-sublevel model precisely when its mass
//   4*pi*(k + sum_{j in iota} (1 + alpha_j))
// stays below rho.

namespace wbary {

inline constexpr double kFourPi = 4.0 * 3.14159265358979323846;

struct SingularConfig {
    std::vector<double> alphas;    // one order per singular point, each in (-1,0)
    double rho = 0.0;              // volume parameter, > 0
    std::vector<Vec2> positions;   // optional geometric placement of the p_j
    double rel_tol = 1e-9;         // comparison tolerance, relative to rho

    int point_count() const { return static_cast<int>(alphas.size()); }
    double tol() const { return rel_tol * rho; }

    // Weight 1 + alpha_j of singular point j (1-based).
    double unit_mass(int j) const { return 1.0 + alphas[static_cast<size_t>(j - 1)]; }

    // Throws std::invalid_argument when the data violates the admissibility
    // assumptions (orders outside (-1,0), rho <= 0, duplicate positions).
    void validate() const;
};

struct Stratum {
    int free_atoms = 0;        // number of unconstrained atoms (k)
    std::uint64_t pinned = 0;  // bit j-1 set when p_j carries an atom

    int pinned_count() const;
    bool has_pinned(int j) const { return (pinned >> (j - 1)) & 1u; }
    std::vector<int> pinned_indices() const;  // 1-based, ascending

    // Total concentration mass 4*pi*(k + sum over pinned of (1+alpha)).
    double mass(const SingularConfig& cfg) const;

    // Dimension 3k + l - 1 of the stratum as a cell (l = pinned count);
    // the empty stratum (0, {}) reports -1.
    int dim() const { return 3 * free_atoms + pinned_count() - 1; }

    bool admissible(const SingularConfig& cfg) const {
        return mass(cfg) < cfg.rho - cfg.tol();
    }

    bool operator==(const Stratum& o) const {
        return free_atoms == o.free_atoms && pinned == o.pinned;
    }

    std::string to_string() const;
};

// Weighted cardinality of a support: regular points count 1, the singular
// point p_j counts 1 + alpha_j.  Entries of `support` are 0 for a regular
// point or the 1-based index of a singular point; repeated singular indices
// are rejected.
double weighted_count(const SingularConfig& cfg, const std::vector<int>& support);

// Thrown when rho sits within tolerance of a singular value, where the
// stratified model is not defined.
struct SingularRhoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All admissible non-empty strata (k + |iota| >= 1), sorted by
// (mass, free_atoms, pinned).  Throws SingularRhoError when rho is within
// tolerance of the singular value set.
std::vector<Stratum> enumerate_strata(const SingularConfig& cfg);

// One singular value together with a generating witness (n, I).
struct SingularValue {
    double value = 0.0;
    int n = 0;                 // number of free units in the witness
    std::uint64_t subset = 0;  // bitmask of the singular indices in the witness
    std::string witness() const;
};

// Ascending list of singular values 4*pi*(n + sum_I (1+alpha_i)) <= cap with
// n + |I| >= 1, deduplicated within tolerance, each carrying one witness.
std::vector<SingularValue> singular_value_set(const SingularConfig& cfg, double cap);

// Values only, for callers that need the bare set.
std::vector<double> singular_values(const SingularConfig& cfg, double cap);

// Partial order on strata: s1 precedes s2 when every configuration of s1 is
// a degeneration of configurations of s2, i.e. k2 >= k1 and the pinned
// points of s1 not pinned in s2 can be absorbed by the extra free atoms.
bool precedes(const Stratum& s1, const Stratum& s2);

// Maximal elements of { s : s precedes s1 and s precedes s2 }.
std::vector<Stratum> maximal_common_substrata(const Stratum& s1, const Stratum& s2,
                                              const SingularConfig& cfg);

// Minimal non-empty admissible strata under `precedes`.
std::vector<Stratum> minimal_strata(const SingularConfig& cfg);

// p_j-stability: every admissible non-empty stratum avoiding p_j remains
// admissible after additionally pinning p_j.  Throws SingularRhoError like
// enumerate_strata.
bool is_pj_stable(const SingularConfig& cfg, int j);

// Negation of p1-stability; the regular case m = 0 is stable by convention.
inline bool not_p1_stable(const SingularConfig& cfg) {
    return cfg.point_count() >= 1 && !is_pj_stable(cfg, 1);
}

// Literal algebraic criterion for non-contractibility: existence of a
// non-empty subset iota of {2..m} with
//   rho > 4*pi*sum_{i in iota}(1+alpha_i)  and
//   rho < 4*pi*sum_{i in {1} union iota}(1+alpha_i).
// With `with_shift` an additional integer n >= 1 bounded by rho/(4*pi) is
// quantified and added inside both sums.
bool conjecture_literal(const SingularConfig& cfg, bool with_shift = false);

enum class GraphVerdict { contractible, non_contractible, not_applicable };

struct GraphCase {
    GraphVerdict verdict = GraphVerdict::not_applicable;
    std::vector<int> nodes;                     // singular indices with pinned stratum admissible
    std::vector<std::pair<int, int>> edges;     // admissible pinned pairs
    int components = 0;
    bool has_cycle = false;
};

// Low-dimensional graph model: applicable when every admissible non-empty
// stratum has dimension <= 1 (only single pinned points and pinned pairs).
// The sublevel model is then a graph; it is contractible exactly when it is
// connected and acyclic.
GraphCase classify_graph_case(const SingularConfig& cfg);

// The two closed-form condition sets of the graph regime: `isolated_points`
// (at least two admissible pinned points, no admissible pair) and
// `light_triangle` (all three pairs among the three lightest points
// admissible).  Provided so the graph verdict can be compared against the
// algebraic characterization.
bool graph_condition_isolated_points(const SingularConfig& cfg);
bool graph_condition_light_triangle(const SingularConfig& cfg);

}  // namespace wbary
