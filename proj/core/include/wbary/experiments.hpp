#pragma once

#include <cstdint>
#include <vector>

#include "wbary/bubble.hpp"
#include "wbary/functional.hpp"
#include "wbary/measures.hpp"
#include "wbary/report.hpp"
#include "wbary/strata.hpp"

// Numerical experiments probing the bubble asymptotics, the sharp constants
// of the trace inequalities, the coercive solver, and the combinatorial
// stability predicates.  Every experiment returns a ScanReport whose
// verdicts use the pinned tolerances below.

namespace wbary {

struct ScanTolerances {
    double dirichlet_slope_rel = 0.10;   // |slope/(8*pi*chi) - 1|
    double mean_slope_rel = 0.05;        // |slope/(-1) - 1|
    double mass_drift_per_decade = 0.5;  // max |log-mass| variation per decade
    double j_slope_rel = 0.15;           // |slope/(8*pi*chi - 2*rho) - 1|
    double mt_headroom = 0.05;           // ratio may exceed the constant by 5%
    double improved_headroom = 0.10;     // fitted slope vs 1/(4*pi*chi)
    double concentration_fraction = 0.9; // mass fraction captured in balls
    double weight_drift = 0.10;          // limit weights under lambda doubling
};

// Dirichlet energy, mean, log-mass and J of the multi-bump family along a
// lambda grid, with slope fits against log(lambda).  Verdicts: Dirichlet
// slope ~ 8*pi*chi, mean slope ~ -1, J slope ~ 8*pi*chi - 2*rho, and the
// log-mass drift bound.
ScanReport energy_scan(const SingularConfig& cfg, const Barycenter& sigma,
                       const std::vector<double>& lambdas, double delta, double rho,
                       const ScanTolerances& tol = {});

// Mass fractions captured in balls around the atoms at scales lambda,
// 2*lambda and 4*lambda, plus the limit weights t_i.  Verdicts: fraction
// >= tol.concentration_fraction and weight stability under doubling.
ScanReport concentration_scan(const SingularConfig& cfg, const Barycenter& sigma,
                              double lambda, double radius, double delta,
                              const ScanTolerances& tol = {});

// Trace inequality probe along a single-bubble family: the ratio
//   R = log int h_tilde e^{2(phi - mean)}  /  int |grad phi|^2
// approaches 1/(4*pi*min{1,1+alpha}).  Verdicts: R stays below the constant
// (with headroom) and approaches it; for a singular family R eventually
// exceeds the unweighted constant 1/(4*pi).
ScanReport mt_probe(const SingularConfig& cfg, const Barycenter& family,
                    const std::vector<double>& lambdas, double delta,
                    const ScanTolerances& tol = {});

// Improved-constant probe on a spread multi-bubble family: with mass split
// over n free regions and the pinned points of sigma, the fitted asymptotic
// ratio of log-mass against energy is <= (1+headroom)/(4*pi*chi).  Also
// checks the spreading hypothesis (per-ball fractions >= gamma0, ball
// separation >= 4*delta0) along the scan.
ScanReport improved_probe(const SingularConfig& cfg, const Barycenter& sigma,
                          const std::vector<double>& lambdas, double delta,
                          double gamma0, double delta0,
                          const ScanTolerances& tol = {});

// Coercive-range minimization: runs coercive_solve, reporting the J trace
// (must be non-increasing), the final residual, and boundedness of
// u - alpha_j log d on an annulus around each singular point.
ScanReport coercive_solve_scan(const SingularConfig& cfg, double rho, int n,
                               const SolveOptions& opt = {});

// Combinatorial sweep over a rho grid for fixed alphas: strata counts, graph
// verdicts, p_j-stability, and both conjecture variants with agreement
// flags against not_p1_stable.
ScanReport parameter_sweep(const SingularConfig& cfg, const std::vector<double>& rho_grid);

// Randomized stability sweep: `count` random configurations (m <= 6, orders
// in (-1,0), rho in (0, 20*pi) away from singular values).  Verdict: zero
// violations of the propagation law "p_j-stable implies p_1-stable"; the
// columns tabulate agreement of the conjecture variants with not_p1_stable.
ScanReport stability_sweep(std::uint64_t seed, int count);

}  // namespace wbary
