#pragma once

#include <stdexcept>
#include <vector>

#include "wbary/grid.hpp"
#include "wbary/measures.hpp"
#include "wbary/strata.hpp"
#include "wbary/torus.hpp"

// Interpolated multi-bump test functions
//   phi(x) = (1/2) log sum_i t_i lambda^2 / (1 + lambda^2 d(x,x_i)^{2(1+gamma_i)})^2
// concentrating at the atoms of a barycenter as lambda -> infinity.  The
// exponent gamma_i interpolates between the free-bubble profile (gamma = 0)
// and the singular profile (gamma = alpha_j) according to how close the atom
// sits to a singular point relative to its own concentration scale.

namespace wbary {

// Interpolation exponent for an atom at distance d from the singular point
// of order alpha, with outer cutoff delta:
//   gamma = alpha                                   d <= delta*lambda^{-1/(1+alpha)}
//   gamma = log(lambda)/(log(lambda)+alpha(log d - log delta)) - 1   in between
//   gamma = 0                                       d >= delta.
// Continuous in d and clamped to [alpha, 0].
double gamma_interp(double lambda, double d, double alpha, double delta);

struct BubbleAtom {
    double weight = 0.0;
    Vec2 pos;
    double gamma = 0.0;
    double core = 0.0;  // concentration scale lambda^{-1/(1+gamma)}
};

class MultiBump {
  public:
    // Builds the bump profile for sigma at scale lambda; each atom's gamma is
    // set from the nearest singular point (pinned atoms use their own p_j).
    MultiBump(const Barycenter& sigma, const SingularConfig& cfg, double lambda,
              double delta);

    double lambda() const { return lambda_; }
    const std::vector<BubbleAtom>& atoms() const { return atoms_; }

    double value(const Vec2& x) const;      // phi, stable for lambda up to ~1e9
    Vec2 gradient(const Vec2& x) const;     // grad phi (analytic)
    double conformal_density(const Vec2& x) const;  // e^{2 phi}
    double log_conformal_density(const Vec2& x) const;  // 2 phi

  private:
    double lambda_;
    std::vector<BubbleAtom> atoms_;
};

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Samples phi on the grid.  Refuses (ResolutionError) when some atom's
// concentration core is below 8 grid cells, since the sampled field would
// alias; the analytic evaluators above have no such restriction.
TorusField sample_multibump(const MultiBump& phi, int n);

}  // namespace wbary
