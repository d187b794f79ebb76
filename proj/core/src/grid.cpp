#include "wbary/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wbary {

namespace {

constexpr double kTwoPiSq = 2.0 * 3.14159265358979323846 * 3.14159265358979323846;

// FFTW plans are cached per grid size; planning with FFTW_ESTIMATE keeps
// creation cheap and the transform deterministic.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::vector<double> real;
    std::vector<std::complex<double>> cplx;
};

std::map<int, PlanPair>& plan_cache() {
    static std::map<int, PlanPair> cache;
    return cache;
}

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

// Caller must hold plan_mutex().
PlanPair& plans_for(int n) {
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    PlanPair p;
    p.real.resize(static_cast<size_t>(n) * n);
    p.cplx.resize(static_cast<size_t>(n) * (n / 2 + 1));
    p.fwd = fftw_plan_dft_r2c_2d(n, n, p.real.data(),
                                 reinterpret_cast<fftw_complex*>(p.cplx.data()),
                                 FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_c2r_2d(n, n, reinterpret_cast<fftw_complex*>(p.cplx.data()),
                                 p.real.data(), FFTW_ESTIMATE);
    if (!p.fwd || !p.bwd) throw std::runtime_error("fftw plan creation failed");
    return cache.emplace(n, std::move(p)).first->second;
}

}  // namespace

double TorusField::mean() const {
    double s = 0.0;
    for (double x : v_) s += x;
    return s / static_cast<double>(v_.size());
}

double TorusField::max_abs() const {
    double s = 0.0;
    for (double x : v_) s = std::max(s, std::abs(x));
    return s;
}

Spectrum forward_fft(const TorusField& f) {
    const int n = f.n();
    std::lock_guard<std::mutex> lock(plan_mutex());
    PlanPair& p = plans_for(n);
    std::copy(f.data().begin(), f.data().end(), p.real.begin());
    fftw_execute(p.fwd);
    Spectrum out(p.cplx.size());
    const double scale = 1.0 / (static_cast<double>(n) * n);
    for (size_t i = 0; i < out.size(); ++i) out[i] = p.cplx[i] * scale;
    return out;
}

TorusField inverse_fft(int n, const Spectrum& spec) {
    std::lock_guard<std::mutex> lock(plan_mutex());
    PlanPair& p = plans_for(n);
    if (spec.size() != p.cplx.size()) throw std::invalid_argument("spectrum size mismatch");
    std::copy(spec.begin(), spec.end(), p.cplx.begin());
    fftw_execute(p.bwd);
    TorusField out(n);
    std::copy(p.real.begin(), p.real.end(), out.data().begin());
    return out;
}

TorusField neg_laplacian(const TorusField& f) {
    const int n = f.n();
    Spectrum s = forward_fft(f);
    for (int ky = 0; ky < n; ++ky) {
        const double fy = signed_freq(ky, n);
        for (int kx = 0; kx <= n / 2; ++kx) {
            s[static_cast<size_t>(ky) * (n / 2 + 1) + kx] *=
                2.0 * kTwoPiSq * (static_cast<double>(kx) * kx + fy * fy);
        }
    }
    return inverse_fft(n, s);
}

TorusField inverse_helmholtz(const TorusField& f, double a) {
    const int n = f.n();
    Spectrum s = forward_fft(f);
    for (int ky = 0; ky < n; ++ky) {
        const double fy = signed_freq(ky, n);
        for (int kx = 0; kx <= n / 2; ++kx) {
            double denom = 2.0 * kTwoPiSq * (static_cast<double>(kx) * kx + fy * fy) + a;
            s[static_cast<size_t>(ky) * (n / 2 + 1) + kx] /= denom;
        }
    }
    return inverse_fft(n, s);
}

double dirichlet_energy(const TorusField& f) {
    const int n = f.n();
    Spectrum s = forward_fft(f);
    double e = 0.0;
    for (int ky = 0; ky < n; ++ky) {
        const double fy = signed_freq(ky, n);
        for (int kx = 0; kx <= n / 2; ++kx) {
            const double mult = (kx == 0 || kx == n / 2) ? 1.0 : 2.0;
            const double k2 = static_cast<double>(kx) * kx + fy * fy;
            e += mult * 2.0 * kTwoPiSq * k2 *
                 std::norm(s[static_cast<size_t>(ky) * (n / 2 + 1) + kx]);
        }
    }
    return e;
}

}  // namespace wbary
