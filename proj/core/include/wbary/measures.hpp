#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wbary/grid.hpp"
#include "wbary/strata.hpp"
#include "wbary/torus.hpp"

// Finitely supported probability measures on the torus (weighted barycenters)
// and the bounded-Lipschitz metric between them.

namespace wbary {

struct Atom {
    double weight = 0.0;
    Vec2 pos;
    int singular_index = 0;  // 0 = free atom, otherwise 1-based index of p_j

    bool is_pinned() const { return singular_index > 0; }
};

struct Barycenter {
    std::vector<Atom> atoms;

    double total_weight() const;

    // Stratum pattern (number of free atoms, set of pinned points).
    Stratum pattern() const;

    // Throws std::invalid_argument on negative weights, weights not summing
    // to 1 (within 1e-12), coincident positions, an inadmissible support
    // pattern, or pinned atoms away from their singular point (checked when
    // cfg.positions is set).
    void validate(const SingularConfig& cfg) const;
};

// Bounded-Lipschitz distance
//   d(s1, s2) = sup { int f d(s1 - s2) : |f| <= 1, Lip(f) <= 1 }.
// For atomic measures of equal mass this equals the optimal-transport cost
// with ground cost min(d_g, 2) (Kantorovich duality), which is solved
// exactly as a small min-cost flow.
double bl_distance(const Barycenter& s1, const Barycenter& s2);

// Upper bound on the distance from sigma to the stratum s: the best value of
// bl_distance(sigma, candidate) over candidates constructed inside s (pinned
// atoms at their singular points, free atoms placed greedily and refined by
// local search).  `budget` caps the number of bl_distance evaluations.
// Returns 0 (exactly) when sigma already lies in s.
double distance_to_stratum(const Barycenter& sigma, const Stratum& s,
                           const SingularConfig& cfg, int budget = 200);

struct InteriorCheck {
    bool interior = true;
    std::string reason;                 // set when not interior
    std::optional<Barycenter> witness;  // nearby measure in a strictly smaller stratum
    Stratum witness_pattern;
    double witness_bound = 0.0;         // upper bound on bl_distance(sigma, witness)
};

// Quantitative interior test for sigma in its stratum: all weights >= eps/2
// and all pairwise distances >= eps/2.  On failure produces a witness
// obtained by merging the offending atoms; its pattern strictly precedes
// sigma's and the transport bound witness_bound (<= 2*eps) is reported.
InteriorCheck check_eps_interior(const Barycenter& sigma, double eps,
                                 const SingularConfig& cfg);

struct ProjectionResult {
    bool admissible = false;  // an admissible pattern captured mass 1 - eps
    Barycenter sigma;
    Stratum pattern;
    double captured_mass = 0.0;
    double residual_mass = 0.0;
};

// Project a non-negative grid density (not necessarily normalized) onto a
// barycenter: greedily extract mass-heaviest balls of the given radius,
// snapping a peak to a singular point when it lies within 2*radius of it,
// and stop once the captured mass reaches 1 - eps of the total or the
// pattern would leave the admissible family.
ProjectionResult project_density(const TorusField& density, const SingularConfig& cfg,
                                 double radius, double eps);

}  // namespace wbary
