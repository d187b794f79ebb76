#include "wbary/bubble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wbary {

namespace {

// log(1 + e^t) without overflow.
double softplus(double t) {
    if (t > 36.0) return t + std::exp(-t);
    return std::log1p(std::exp(t));
}

// e^t / (1 + e^t) without overflow.
double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

}  // namespace

double gamma_interp(double lambda, double d, double alpha, double delta) {
    if (!(lambda > 1.0)) throw std::invalid_argument("lambda must exceed 1");
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    if (!(alpha > -1.0 && alpha <= 0.0))
        throw std::invalid_argument("alpha must lie in (-1, 0]");
    if (alpha == 0.0 || d >= delta) return 0.0;
    const double log_lambda = std::log(lambda);
    const double inner = delta * std::pow(lambda, -1.0 / (1.0 + alpha));
    if (d <= inner) return alpha;
    const double g = log_lambda / (log_lambda + alpha * (std::log(d) - std::log(delta))) - 1.0;
    return std::clamp(g, alpha, 0.0);
}

MultiBump::MultiBump(const Barycenter& sigma, const SingularConfig& cfg, double lambda,
                     double delta)
    : lambda_(lambda) {
    if (!(lambda > 1.0)) throw std::invalid_argument("lambda must exceed 1");
    sigma.validate(cfg);
    for (const Atom& a : sigma.atoms) {
        BubbleAtom b;
        b.weight = a.weight;
        if (a.is_pinned()) {
            b.pos = cfg.positions[static_cast<size_t>(a.singular_index - 1)];
            b.gamma = cfg.alphas[static_cast<size_t>(a.singular_index - 1)];
        } else {
            b.pos = a.pos;
            b.gamma = 0.0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= cfg.point_count(); ++j) {
                const double d = torus_dist(a.pos, cfg.positions[static_cast<size_t>(j - 1)]);
                if (d < best_d) {
                    best_d = d;
                    b.gamma = gamma_interp(lambda, d, cfg.alphas[static_cast<size_t>(j - 1)],
                                           delta);
                }
            }
        }
        b.core = std::pow(lambda, -1.0 / (1.0 + b.gamma));
        atoms_.push_back(b);
    }
}

double MultiBump::log_conformal_density(const Vec2& x) const {
    // 2*phi = log sum_i exp(L_i),  L_i = log t_i + 2 log lambda
    //                                    - 2 log(1 + lambda^2 d_i^{2(1+gamma_i)}).
    const double log_l = std::log(lambda_);
    double max_L = -std::numeric_limits<double>::infinity();
    std::vector<double> L(atoms_.size());
    for (size_t i = 0; i < atoms_.size(); ++i) {
        const BubbleAtom& b = atoms_[i];
        const double d = torus_dist(x, b.pos);
        const double e = 2.0 * log_l + 2.0 * (1.0 + b.gamma) * std::log(d);
        L[i] = std::log(b.weight) + 2.0 * log_l - 2.0 * softplus(e);
        max_L = std::max(max_L, L[i]);
    }
    double s = 0.0;
    for (double l : L) s += std::exp(l - max_L);
    return max_L + std::log(s);
}

double MultiBump::value(const Vec2& x) const { return 0.5 * log_conformal_density(x); }

double MultiBump::conformal_density(const Vec2& x) const {
    return std::exp(log_conformal_density(x));
}

Vec2 MultiBump::gradient(const Vec2& x) const {
    const double log_l = std::log(lambda_);
    std::vector<double> L(atoms_.size());
    double max_L = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < atoms_.size(); ++i) {
        const BubbleAtom& b = atoms_[i];
        const double d = torus_dist(x, b.pos);
        const double e = 2.0 * log_l + 2.0 * (1.0 + b.gamma) * std::log(d);
        L[i] = std::log(b.weight) + 2.0 * log_l - 2.0 * softplus(e);
        max_L = std::max(max_L, L[i]);
    }
    double denom = 0.0;
    for (double l : L) denom += std::exp(l - max_L);
    Vec2 g{0.0, 0.0};
    for (size_t i = 0; i < atoms_.size(); ++i) {
        const BubbleAtom& b = atoms_[i];
        const Vec2 disp = torus_disp(x, b.pos);
        const double d2 = disp.x * disp.x + disp.y * disp.y;
        if (d2 < 1e-300) continue;
        const double e = 2.0 * log_l + (1.0 + b.gamma) * std::log(d2);
        const double wi = std::exp(L[i] - max_L) / denom;
        const double coef = -2.0 * (1.0 + b.gamma) * sigmoid(e) * wi / d2;
        g.x += coef * disp.x;
        g.y += coef * disp.y;
    }
    return g;
}

TorusField sample_multibump(const MultiBump& phi, int n) {
    for (const BubbleAtom& b : phi.atoms())
        if (b.core * n < 8.0)
            throw ResolutionError("bubble core below 8 grid cells; raise n or lower lambda");
    TorusField out(n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) out.at(ix, iy) = phi.value(out.node(ix, iy));
    return out;
}

}  // namespace wbary
