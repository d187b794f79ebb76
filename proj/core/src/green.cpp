#include "wbary/green.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "wbary/quadrature.hpp"

namespace wbary {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Mean of log|theta_1(pi z | i)| - pi z2^2 over the torus, in closed form:
// integrating the product expansion termwise gives -pi/12 + sum log(1-q^{2n}).
double theta_mean_constant() {
    double c = -kPi / 12.0;
    for (int n = 1; n <= 40; ++n) c += std::log1p(-std::exp(-2.0 * kPi * n));
    return c;
}

const double kThetaMean = theta_mean_constant();

}  // namespace

double log_abs_theta1(double vx, double vy) {
    // theta_1(v) = 2 sum_{j>=0} (-1)^j q^{(j+1/2)^2} sin((2j+1)v), q = e^{-pi}.
    std::complex<double> v(vx, vy);
    std::complex<double> sum(0.0, 0.0);
    double sign = 1.0;
    for (int j = 0; j < 8; ++j) {
        const double e = (j + 0.5) * (j + 0.5) * kPi;
        sum += sign * std::exp(-e) * std::sin(static_cast<double>(2 * j + 1) * v);
        sign = -sign;
    }
    return std::log(2.0 * std::abs(sum));
}

double green_exact(const Vec2& x, const Vec2& p) {
    const Vec2 z = torus_disp(x, p);
    return log_abs_theta1(kPi * z.x, kPi * z.y) - kPi * z.y * z.y - kThetaMean;
}

namespace {

// Raw (non-symmetrized) coefficient exp(-2*pi*i k.p) for the mode (kx, fy).
std::complex<double> delta_coeff(int kx, int fy, const Vec2& p) {
    const double phase = -2.0 * kPi * (kx * p.x + fy * p.y);
    return {std::cos(phase), std::sin(phase)};
}

// Half-spectrum of the bandlimited delta; the redundant columns kx = 0 and
// kx = n/2 are Hermitian-symmetrized so that inverse_fft sees a consistent
// real field and the spectral Green identity is exact.
Spectrum delta_spectrum(int n, const Vec2& p) {
    const int w = n / 2 + 1;
    Spectrum s(static_cast<size_t>(n) * w);
    for (int ky = 0; ky < n; ++ky) {
        const int fy = signed_freq(ky, n);
        for (int kx = 0; kx < w; ++kx)
            s[static_cast<size_t>(ky) * w + kx] = delta_coeff(kx, fy, p);
    }
    for (int kx : {0, n / 2}) {
        for (int ky = 0; ky < n; ++ky) {
            const int kyc = (n - ky) % n;
            if (ky > kyc) continue;
            auto& a = s[static_cast<size_t>(ky) * w + kx];
            auto& b = s[static_cast<size_t>(kyc) * w + kx];
            const std::complex<double> avg = 0.5 * (a + std::conj(b));
            a = avg;
            b = std::conj(avg);
        }
    }
    return s;
}

}  // namespace

TorusField bandlimited_delta(int n, const Vec2& p) {
    return inverse_fft(n, delta_spectrum(n, p));
}

TorusField green_spectral(int n, const Vec2& p) {
    const int w = n / 2 + 1;
    Spectrum s = delta_spectrum(n, p);
    for (int ky = 0; ky < n; ++ky) {
        const int fy = signed_freq(ky, n);
        for (int kx = 0; kx < w; ++kx) {
            auto& c = s[static_cast<size_t>(ky) * w + kx];
            const double k2 = static_cast<double>(kx) * kx + static_cast<double>(fy) * fy;
            if (k2 == 0.0) {
                c = 0.0;
            } else {
                c *= -1.0 / (2.0 * kPi * k2);
            }
        }
    }
    return inverse_fft(n, s);
}

SingularWeight::SingularWeight(const SingularConfig& cfg, double h_const) : cfg_(cfg) {
    cfg_.validate();
    if (!(h_const > 0.0)) throw std::invalid_argument("background h must be positive");
    if (cfg_.positions.empty() && cfg_.point_count() > 0)
        throw std::invalid_argument("singular weight requires point positions");
    log_h_ = std::log(h_const);
}

double SingularWeight::log_value(const Vec2& x) const {
    double lv = log_h_;
    for (int j = 1; j <= cfg_.point_count(); ++j)
        lv += 2.0 * cfg_.alphas[static_cast<size_t>(j - 1)] *
              green_exact(x, cfg_.positions[static_cast<size_t>(j - 1)]);
    return lv;
}

double SingularWeight::operator()(const Vec2& x) const { return std::exp(log_value(x)); }

namespace {

// Distance from an interior point along direction (c,s) to the boundary of
// the rectangle [x0,x1] x [y0,y1].
double ray_box_exit(const Vec2& p, double c, double s, double x0, double x1, double y0,
                    double y1) {
    double t = 1e300;
    if (c > 1e-15) t = std::min(t, (x1 - p.x) / c);
    if (c < -1e-15) t = std::min(t, (x0 - p.x) / c);
    if (s > 1e-15) t = std::min(t, (y1 - p.y) / s);
    if (s < -1e-15) t = std::min(t, (y0 - p.y) / s);
    return t;
}

// Integral of h_tilde over the cell containing the singular point p_j,
// in polar coordinates around p_j with the substitution u = r^{2+2a}
// that absorbs the radial weight r^{1+2a} exactly.
double singular_cell_integral(const SingularWeight& w, const Vec2& p, double a, double x0,
                              double x1, double y0, double y1) {
    const GaussRule& gr = gauss_rule(8);
    const int n_theta = 64;
    const double ex = 2.0 + 2.0 * a;
    double total = 0.0;
    for (int it = 0; it < n_theta; ++it) {
        const double theta = 2.0 * kPi * (it + 0.5) / n_theta;
        const double c = std::cos(theta), s = std::sin(theta);
        const double R = ray_box_exit(p, c, s, x0, x1, y0, y1);
        // p may sit on the cell boundary; rays that exit immediately carry
        // zero measure.
        if (!(R > 0.0)) continue;
        const double U = std::pow(R, ex);
        double radial = 0.0;
        for (size_t q = 0; q < gr.nodes.size(); ++q) {
            const double u = 0.5 * U * (gr.nodes[q] + 1.0);
            const double r = std::pow(u, 1.0 / ex);
            const Vec2 x{p.x + r * c, p.y + r * s};
            // smooth factor h_tilde * r^{-2a}; the weight r^{1+2a} is exact
            // in the substitution.
            const double smooth = std::exp(w.log_value(x) - 2.0 * a * std::log(r));
            radial += 0.5 * U * gr.weights[q] * smooth;
        }
        total += radial / ex * (2.0 * kPi / n_theta);
    }
    return total;
}

// Tensor Gauss integral of h_tilde over a singularity-free cell.
double smooth_cell_integral(const SingularWeight& w, double x0, double x1, double y0,
                            double y1, int order) {
    const GaussRule& gr = gauss_rule(order);
    const double hx = 0.5 * (x1 - x0), hy = 0.5 * (y1 - y0);
    double total = 0.0;
    for (size_t i = 0; i < gr.nodes.size(); ++i)
        for (size_t j = 0; j < gr.nodes.size(); ++j) {
            const Vec2 x{x0 + hx * (gr.nodes[i] + 1.0), y0 + hy * (gr.nodes[j] + 1.0)};
            total += gr.weights[i] * gr.weights[j] * w(x);
        }
    return total * hx * hy;
}

}  // namespace

std::vector<double> cell_weights(const SingularWeight& w, int n) {
    const SingularConfig& cfg = w.config();
    const double h = 1.0 / n;
    std::vector<double> out(static_cast<size_t>(n) * n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            out[static_cast<size_t>(iy) * n + ix] =
                h * h * w({(ix + 0.5) * h, (iy + 0.5) * h});

    // Re-integrate the 5x5 block around each singular point carefully.
    for (int j = 1; j <= cfg.point_count(); ++j) {
        const Vec2 p = torus_wrap(cfg.positions[static_cast<size_t>(j - 1)]);
        const double a = cfg.alphas[static_cast<size_t>(j - 1)];
        const int cx = std::min(n - 1, static_cast<int>(p.x * n));
        const int cy = std::min(n - 1, static_cast<int>(p.y * n));
        for (int dy = -2; dy <= 2; ++dy)
            for (int dx = -2; dx <= 2; ++dx) {
                const int ix = ((cx + dx) % n + n) % n;
                const int iy = ((cy + dy) % n + n) % n;
                // Cell box in the chart of p (to keep the box and p on the
                // same branch of the covering).
                const double x0 = (cx + dx) * h, y0 = (cy + dy) * h;
                double v;
                if (dx == 0 && dy == 0) {
                    v = singular_cell_integral(w, p, a, x0, x0 + h, y0, y0 + h);
                } else {
                    v = smooth_cell_integral(w, x0, x0 + h, y0, y0 + h, 10);
                }
                out[static_cast<size_t>(iy) * n + ix] = v;
            }
    }
    return out;
}

double total_weight_integral(const SingularWeight& w) {
    const SingularConfig& cfg = w.config();
    std::vector<Vec2> specials;
    for (const Vec2& p : cfg.positions) specials.push_back(p);
    auto patches = make_patches(specials);
    return patchwork_integral([&](const Vec2& x) { return w(x); }, patches);
}

}  // namespace wbary
