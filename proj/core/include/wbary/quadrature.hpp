#pragma once

#include <functional>
#include <vector>

#include "wbary/torus.hpp"

// Quadrature over the torus for integrands that are smooth away from a few
// special points where they concentrate (bubble cores) or blow up like
// d^{2*alpha} (singular weights).  The domain is split with a partition of
// unity: a radial C^2 cutoff around each special point, integrated in polar
// coordinates with geometrically graded rings, plus a globally smooth
// remainder integrated on a uniform tensor Gauss grid.

namespace wbary {

// Gauss-Legendre nodes/weights on [-1,1], computed by Newton iteration.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_rule(int order);

using Integrand = std::function<double(const Vec2&)>;

struct QuadPatch {
    Vec2 center;
    double radius = 0.1;       // support of the cutoff
    double inner_cut = 1e-14;  // innermost ring radius, relative to `radius`
};

struct PatchworkOptions {
    int theta_nodes = 64;      // trapezoid nodes per ring (periodic integrand)
    int radial_order = 6;      // Gauss order per geometric ring
    double ring_ratio = 1.3;   // geometric progression of ring radii
    int smooth_cells = 192;    // uniform grid for the smooth remainder
    int smooth_order = 2;      // tensor Gauss order per smooth cell
};

// Integral of f over the torus.  Patches must be pairwise disjoint; the
// integrand is never evaluated at a patch center, so integrable point
// singularities and bubble cores at the centers are handled by the graded
// rings.  The inner disc of relative radius inner_cut is dropped, which for
// an integrable singularity contributes O(inner_cut^{2+2*alpha}).
double patchwork_integral(const Integrand& f, const std::vector<QuadPatch>& patches,
                          const PatchworkOptions& opt = {});

// Integral of f over the closed ball B_r(c) (no cutoff), same graded polar
// rule; any concentration or singularity must be concentric at c.
double ball_integral(const Integrand& f, const Vec2& c, double r,
                     const PatchworkOptions& opt = {});

// Convenience: place disjoint patches at the given special points, shrinking
// radii to 0.45 * (minimal pairwise distance) when needed; coincident points
// (within `merge_tol`) share one patch.
std::vector<QuadPatch> make_patches(const std::vector<Vec2>& specials,
                                    double max_radius = 0.12, double merge_tol = 1e-12);

}  // namespace wbary
