#pragma once

#include <complex>
#include <vector>

#include "wbary/torus.hpp"

// Periodic scalar fields on a uniform n x n grid over the unit torus, with
// spectral (FFT-based) differential operators.  Grid node (ix,iy) sits at
// (ix/n, iy/n); values are stored row-major as v[iy*n + ix].

namespace wbary {

class TorusField {
  public:
    TorusField() = default;
    explicit TorusField(int n, double fill = 0.0)
        : n_(n), v_(static_cast<size_t>(n) * static_cast<size_t>(n), fill) {}

    int n() const { return n_; }
    size_t size() const { return v_.size(); }
    double& at(int ix, int iy) { return v_[idx(ix, iy)]; }
    double at(int ix, int iy) const { return v_[idx(ix, iy)]; }
    double& operator[](size_t i) { return v_[i]; }
    double operator[](size_t i) const { return v_[i]; }
    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

    Vec2 node(int ix, int iy) const {
        return {static_cast<double>(ix) / n_, static_cast<double>(iy) / n_};
    }

    double mean() const;
    double max_abs() const;

  private:
    size_t idx(int ix, int iy) const {
        return static_cast<size_t>(iy) * static_cast<size_t>(n_) + static_cast<size_t>(ix);
    }
    int n_ = 0;
    std::vector<double> v_;
};

// Half-complex spectrum in FFTW r2c layout: entry (kx, ky) at index
// ky*(n/2+1) + kx with kx in [0, n/2], ky in [0, n).  Coefficients are
// normalized so that f(x) = sum_k c_k exp(2*pi*i k.x) over the implied full
// spectrum.
using Spectrum = std::vector<std::complex<double>>;

Spectrum forward_fft(const TorusField& f);
TorusField inverse_fft(int n, const Spectrum& spec);

// Signed frequency for index k on an n-grid (maps k > n/2 to k - n).
inline int signed_freq(int k, int n) { return (k <= n / 2) ? k : k - n; }

// -Laplacian applied spectrally: multiplies c_k by 4*pi^2 |k|^2.
TorusField neg_laplacian(const TorusField& f);

// (-Laplacian + a)^{-1} applied spectrally.
TorusField inverse_helmholtz(const TorusField& f, double a);

// Dirichlet energy int |grad f|^2 via Parseval.
double dirichlet_energy(const TorusField& f);

}  // namespace wbary
