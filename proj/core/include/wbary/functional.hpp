#pragma once

#include <vector>

#include "wbary/green.hpp"
#include "wbary/grid.hpp"

// Discrete form of the modified Liouville energy
//   J(u) = int |grad u|^2 + 2*rho*int u - rho*log int h_tilde e^{2u}
// on the n x n grid.  The gradient term is spectral; the exponential
// integral is discretized with the singular-aware cell weights W_c, and the
// Euler-Lagrange residual uses the same weights so that it is exactly
// proportional to the discrete gradient of J.

namespace wbary {

class LiouvilleFunctional {
  public:
    LiouvilleFunctional(const SingularWeight& w, double rho, int n);

    int n() const { return n_; }
    double rho() const { return rho_; }
    const std::vector<double>& weights() const { return w_; }

    // log int h_tilde e^{2u} (overflow-safe log-sum-exp).
    double log_mass(const TorusField& u) const;

    double value(const TorusField& u) const;  // J(u)

    // Pointwise residual -Delta u + rho - rho * h_c e^{2u_c} / M where
    // h_c = n^2 W_c is the cell-averaged weight and M the discrete mass.
    // Has exact zero mean; equals (n^2/2) * gradient of the discrete J.
    TorusField residual(const TorusField& u) const;

    // Grid L2 norm sqrt(mean of residual^2).
    double residual_norm(const TorusField& u) const;

  private:
    double rho_;
    int n_;
    std::vector<double> w_;  // cell weights W_c
};

struct SolveOptions {
    int max_iter = 500;
    double tol = 1e-6;          // residual_norm target
    double armijo = 1e-4;
    int max_backtracks = 40;
    double coercivity_margin = 0.9;  // refuse when rho >= margin * 4*pi*min(1+alpha)
};

struct SolveResult {
    TorusField u;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> j_trace;  // J after each accepted step
};

struct CoercivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Minimizes J in the coercive range rho < 4*pi*min_j(1+alpha_j) by
// preconditioned descent: direction -(-Delta + 1)^{-1} residual with Armijo
// backtracking.  Throws CoercivityError outside the guaranteed range.
SolveResult coercive_solve(const SingularWeight& w, double rho, int n,
                           const SolveOptions& opt = {},
                           const TorusField* initial = nullptr);

}  // namespace wbary
