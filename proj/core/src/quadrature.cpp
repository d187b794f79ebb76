#include "wbary/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wbary {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

const GaussRule& gauss_rule(int order) {
    static std::map<int, GaussRule> cache;
    static std::mutex m;
    std::lock_guard<std::mutex> lock(m);
    auto it = cache.find(order);
    if (it != cache.end()) return it->second;
    if (order < 1 || order > 64) throw std::invalid_argument("gauss order out of range");
    GaussRule r;
    r.nodes.resize(static_cast<size_t>(order));
    r.weights.resize(static_cast<size_t>(order));
    for (int i = 0; i < order; ++i) {
        // Newton iteration on the Legendre polynomial from the Chebyshev guess.
        double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[static_cast<size_t>(order - 1 - i)] = x;
        r.weights[static_cast<size_t>(order - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(order, std::move(r)).first->second;
}

namespace {

// C^2 radial cutoff: 1 on [0, R/2], 0 on [R, inf).
double cutoff(double r, double R) {
    if (r <= 0.5 * R) return 1.0;
    if (r >= R) return 0.0;
    const double t = (r - 0.5 * R) / (0.5 * R);
    return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// Polar integral of f(c + r e_theta) * weight(r) over radii [r0, R] with
// geometrically graded rings and trapezoid in theta.
template <typename W>
double polar_integral(const Integrand& f, const Vec2& c, double r0, double R,
                      const PatchworkOptions& opt, W&& weight) {
    const GaussRule& gr = gauss_rule(opt.radial_order);
    const int nt = opt.theta_nodes;
    std::vector<double> cs(static_cast<size_t>(nt)), sn(static_cast<size_t>(nt));
    for (int it = 0; it < nt; ++it) {
        const double theta = 2.0 * kPi * (it + 0.5) / nt;
        cs[static_cast<size_t>(it)] = std::cos(theta);
        sn[static_cast<size_t>(it)] = std::sin(theta);
    }
    double total = 0.0;
    double a = r0;
    while (a < R * (1.0 - 1e-12)) {
        const double b = std::min(R, a * opt.ring_ratio);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (size_t q = 0; q < gr.nodes.size(); ++q) {
            const double r = mid + half * gr.nodes[q];
            const double wq = half * gr.weights[q] * r * weight(r);
            double ring = 0.0;
            for (int it = 0; it < nt; ++it) {
                const Vec2 x{c.x + r * cs[static_cast<size_t>(it)],
                             c.y + r * sn[static_cast<size_t>(it)]};
                ring += f(x);
            }
            total += wq * ring * (2.0 * kPi / nt);
        }
        a = b;
    }
    return total;
}

}  // namespace

double patchwork_integral(const Integrand& f, const std::vector<QuadPatch>& patches,
                          const PatchworkOptions& opt) {
    double total = 0.0;
    for (const QuadPatch& p : patches) {
        total += polar_integral(f, p.center, p.radius * p.inner_cut, p.radius, opt,
                                [&](double r) { return cutoff(r, p.radius); });
    }
    // Smooth remainder f * (1 - sum of cutoffs); exact zeros are skipped so
    // the integrand is never evaluated near the patch centers.
    const GaussRule& gr = gauss_rule(opt.smooth_order);
    const int M = opt.smooth_cells;
    const double h = 1.0 / M;
    double smooth = 0.0;
    for (int iy = 0; iy < M; ++iy)
        for (int ix = 0; ix < M; ++ix)
            for (size_t a = 0; a < gr.nodes.size(); ++a)
                for (size_t b = 0; b < gr.nodes.size(); ++b) {
                    const Vec2 x{(ix + 0.5 * (gr.nodes[a] + 1.0)) * h,
                                 (iy + 0.5 * (gr.nodes[b] + 1.0)) * h};
                    double mask = 1.0;
                    for (const QuadPatch& p : patches)
                        mask -= cutoff(torus_dist(x, p.center), p.radius);
                    if (mask <= 0.0) continue;
                    smooth += gr.weights[a] * gr.weights[b] * mask * f(x);
                }
    total += smooth * h * h * 0.25;
    return total;
}

double ball_integral(const Integrand& f, const Vec2& c, double r,
                     const PatchworkOptions& opt) {
    return polar_integral(f, c, r * 1e-14, r, opt, [](double) { return 1.0; });
}

std::vector<QuadPatch> make_patches(const std::vector<Vec2>& specials, double max_radius,
                                    double merge_tol) {
    std::vector<Vec2> centers;
    for (const Vec2& s : specials) {
        bool dup = false;
        for (const Vec2& c : centers)
            if (torus_dist(s, c) <= merge_tol) { dup = true; break; }
        if (!dup) centers.push_back(torus_wrap(s));
    }
    double min_sep = 1.0;
    for (size_t i = 0; i < centers.size(); ++i)
        for (size_t j = i + 1; j < centers.size(); ++j)
            min_sep = std::min(min_sep, torus_dist(centers[i], centers[j]));
    const double radius = std::min(max_radius, 0.45 * min_sep);
    std::vector<QuadPatch> out;
    for (const Vec2& c : centers) out.push_back({c, radius, 1e-14});
    return out;
}

}  // namespace wbary
