#pragma once

#include <vector>

#include "wbary/grid.hpp"
#include "wbary/strata.hpp"
#include "wbary/torus.hpp"

// Green function of the Laplacian on the unit torus, normalized by
//   Delta G_p = 2*pi*(delta_p - 1),  int G_p = 0,
// so that G_p(x) - log d(x,p) stays bounded near p.  Two routes are
// provided: an exact closed form built from the Jacobi theta function
// (pointwise, off-grid) and a spectral construction on the grid whose
// discrete Laplacian identity holds to round-off.

namespace wbary {

// log |theta_1(v | tau = i)| for complex v = vx + i*vy, via the rapidly
// converging sine series with nome q = exp(-pi).
double log_abs_theta1(double vx, double vy);

// Closed-form Green function evaluated at arbitrary points; exact up to the
// series truncation of theta_1 (~1e-15).  Diverges logarithmically at x = p.
double green_exact(const Vec2& x, const Vec2& p);

// Bandlimited delta at p in the grid's half-spectrum convention: the field
// whose Fourier coefficients are exp(-2*pi*i k.p) (Hermitian-symmetrized on
// the kx = 0 and kx = n/2 columns).
TorusField bandlimited_delta(int n, const Vec2& p);

// Spectral Green function: coefficients -2*pi*exp(-2*pi*i k.p)/(4*pi^2|k|^2)
// with zero mean.  Satisfies neg_laplacian(G) = 2*pi*(1 - bandlimited_delta)
// exactly in the discrete spectral calculus.
TorusField green_spectral(int n, const Vec2& p);

// Modified conformal weight h_tilde = h * exp(2 * sum_j alpha_j G_{p_j}).
// Behaves like d(x,p_j)^{2 alpha_j} near each singular point, so it is
// unbounded but integrable.  `h` is a smooth positive background factor;
// the default is h = 1.
class SingularWeight {
  public:
    SingularWeight(const SingularConfig& cfg, double h_const = 1.0);

    // Pointwise value; +inf is never produced (alphas < 0 push the weight to
    // +infinity at the p_j, callers must not evaluate exactly there).
    double operator()(const Vec2& x) const;
    double log_value(const Vec2& x) const;

    const SingularConfig& config() const { return cfg_; }

  private:
    SingularConfig cfg_;
    double log_h_;
};

// Per-cell quadrature weights W_c ~ int_cell h_tilde over the n^2 cells
// [ix/n,(ix+1)/n) x [iy/n,(iy+1)/n).  Cells containing or adjacent to a
// singular point are integrated with a polar rule respecting the radial
// weight r^(1+2*alpha); far cells use the center value.  Used to discretize
// int h_tilde e^{2u} as sum_c W_c e^{2 u_c} with u_c the node value.
std::vector<double> cell_weights(const SingularWeight& w, int n);

// Reference quadrature of int h_tilde over the torus (partition-of-unity
// polar patches around the singular points).
double total_weight_integral(const SingularWeight& w);

}  // namespace wbary
