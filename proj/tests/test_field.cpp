#include <doctest.h>

#include <cmath>
#include <random>

#include "wbary/bubble.hpp"
#include "wbary/functional.hpp"
#include "wbary/green.hpp"
#include "wbary/grid.hpp"
#include "wbary/quadrature.hpp"

using namespace wbary;

namespace {

constexpr double kPi = 3.14159265358979323846;

SingularConfig half_cfg(double rho) {
    SingularConfig cfg;
    cfg.alphas = {-0.5};
    cfg.rho = rho;
    cfg.positions = {{0.25, 0.25}};
    return cfg;
}

}  // namespace

TEST_CASE("spectral round trip and mean") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TorusField f(64);
    for (double& v : f.data()) v = u(rng);
    const Spectrum spec = forward_fft(f);
    const TorusField g = inverse_fft(64, spec);
    double max_err = 0.0, max_val = 0.0;
    for (size_t i = 0; i < f.size(); ++i) {
        max_err = std::max(max_err, std::abs(f[i] - g[i]));
        max_val = std::max(max_val, std::abs(f[i]));
    }
    CHECK(max_err <= 1e-10 * max_val);
    CHECK(f.mean() == doctest::Approx(spec[0].real()).epsilon(1e-12));
}

TEST_CASE("dirichlet energy closed forms") {
    CHECK(dirichlet_energy(TorusField(64, 3.7)) == doctest::Approx(0.0));

    TorusField s(128);
    for (int iy = 0; iy < 128; ++iy)
        for (int ix = 0; ix < 128; ++ix) s.at(ix, iy) = std::sin(2 * kPi * ix / 128.0);
    CHECK(dirichlet_energy(s) == doctest::Approx(2 * kPi * kPi).epsilon(1e-10));
}

TEST_CASE("Parseval energy matches finite differences on smooth fields") {
    auto fd_energy = [](const TorusField& f) {
        const int n = f.n();
        double e = 0.0;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double dx = (f.at((ix + 1) % n, iy) - f.at(ix, iy)) * n;
                const double dy = (f.at(ix, (iy + 1) % n) - f.at(ix, iy)) * n;
                e += dx * dx + dy * dy;
            }
        return e / (static_cast<double>(n) * n);
    };
    for (int n : {64, 128, 256}) {
        TorusField f(n);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                f.at(ix, iy) = std::sin(2 * kPi * ix / n) * std::cos(4 * kPi * iy / n) +
                               0.3 * std::cos(2 * kPi * (ix + iy) / n);
        const double spectral = dirichlet_energy(f);
        const double fd = fd_energy(f);
        // Forward differences converge at O(n^-2).
        CHECK(std::abs(spectral - fd) <= 700.0 / (static_cast<double>(n) * n));
    }
}

TEST_CASE("Green function identities") {
    const Vec2 p{0.25, 0.25};
    for (int n : {128, 256}) {
        const TorusField g = green_spectral(n, p);
        CHECK(std::abs(g.mean()) <= 1e-12);

        // -Delta G = 2 pi (1 - delta_p) in the discrete spectral calculus.
        const TorusField lap = neg_laplacian(g);
        const TorusField del = bandlimited_delta(n, p);
        double rss = 0.0;
        for (size_t i = 0; i < lap.size(); ++i) {
            const double r = lap[i] - 2 * kPi * (1.0 - del[i]);
            rss += r * r;
        }
        CHECK(std::sqrt(rss / static_cast<double>(lap.size())) <= 1e-8);
    }
}

TEST_CASE("Green function has a log singularity") {
    const Vec2 p{0.25, 0.25};
    double prev_bound = 0.0;
    for (int n : {256, 512}) {
        const TorusField g = green_spectral(n, p);
        double bound = 0.0;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const double d = torus_dist(g.node(ix, iy), p);
                if (d < 4.0 / n || d > 0.25) continue;
                bound = std::max(bound, std::abs(g.at(ix, iy) - std::log(d)));
            }
        CHECK(bound < 2.0);  // bounded on the annulus
        if (prev_bound > 0.0) CHECK(std::abs(bound - prev_bound) < 0.05);  // N-independent
        prev_bound = bound;
    }
}

TEST_CASE("closed-form and spectral Green functions agree") {
    const Vec2 p{0.25, 0.25};
    const int n = 256;
    const TorusField g = green_spectral(n, p);
    double max_err = 0.0;
    for (int iy = 0; iy < n; iy += 3)
        for (int ix = 0; ix < n; ix += 3) {
            const double d = torus_dist(g.node(ix, iy), p);
            if (d < 4.0 / n) continue;
            max_err = std::max(max_err, std::abs(g.at(ix, iy) - green_exact(g.node(ix, iy), p)));
        }
    CHECK(max_err < 1e-2);
}

TEST_CASE("singular weight h_tilde") {
    SUBCASE("no singular points reduces to the background") {
        SingularConfig cfg;
        cfg.rho = kPi;
        SingularWeight w(cfg, 1.0);
        CHECK(w({0.3, 0.8}) == doctest::Approx(1.0));
    }
    SUBCASE("half-order point behaves like 1/d") {
        SingularConfig cfg = half_cfg(kPi);
        SingularWeight w(cfg);
        double lo = 1e300, hi = 0.0;
        for (double d = 1e-4; d <= 0.2; d *= 2) {
            const double v = w({0.25 + d, 0.25}) * d;  // h_tilde * d^{-2 alpha}
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(lo > 0.1);
        CHECK(hi < 10.0);
        CHECK(hi / lo < 10.0);
    }
    SUBCASE("total mass is finite, positive, and at least one") {
        // Jensen: int exp(2 sum alpha_j G_j) >= exp(0) = 1 since the G_j have
        // zero mean.
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> a(-0.95, -0.05);
        const std::vector<Vec2> pos{{0.25, 0.25}, {0.75, 0.75}, {0.75, 0.25}};
        for (int trial = 0; trial < 4; ++trial) {
            SingularConfig cfg;
            cfg.rho = kPi;
            const int m = 1 + trial % 3;
            for (int i = 0; i < m; ++i) {
                cfg.alphas.push_back(a(rng));
                cfg.positions.push_back(pos[static_cast<size_t>(i)]);
            }
            const double total = total_weight_integral(SingularWeight(cfg));
            CHECK(std::isfinite(total));
            CHECK(total >= 1.0 - 1e-6);
        }
    }
    SUBCASE("cell weights sum to the reference quadrature") {
        SingularConfig cfg = half_cfg(kPi);
        SingularWeight w(cfg);
        const std::vector<double> wc = cell_weights(w, 256);
        double sum = 0.0;
        for (double v : wc) sum += v;
        CHECK(sum == doctest::Approx(total_weight_integral(w)).epsilon(5e-4));
    }
}

TEST_CASE("gamma interpolation") {
    const double alpha = -0.5, delta = 0.1;
    const double lambda = std::exp(10.0);
    SUBCASE("outer and inner branch boundaries") {
        CHECK(gamma_interp(lambda, delta, alpha, delta) == doctest::Approx(0.0));
        const double inner = delta * std::pow(lambda, -1.0 / (1.0 + alpha));
        CHECK(gamma_interp(lambda, inner, alpha, delta) == doctest::Approx(alpha));
        CHECK(gamma_interp(lambda, 0.0, alpha, delta) == doctest::Approx(alpha));
        CHECK(gamma_interp(lambda, 2 * delta, alpha, delta) == doctest::Approx(0.0));
    }
    SUBCASE("worked middle-branch value") {
        // log lambda = 10, d = delta e^{-10}: gamma = 10/15 - 1 = -1/3.
        CHECK(gamma_interp(lambda, delta * std::exp(-10.0), alpha, delta) ==
              doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("continuity at the breakpoints") {
        const double inner = delta * std::pow(lambda, -1.0 / (1.0 + alpha));
        for (double eps = 1e-3; eps > 1e-10; eps *= 1e-2) {
            CHECK(std::abs(gamma_interp(lambda, delta * (1 + eps), alpha, delta) -
                           gamma_interp(lambda, delta * (1 - eps), alpha, delta)) < 10 * eps);
            CHECK(std::abs(gamma_interp(lambda, inner * (1 + eps), alpha, delta) -
                           gamma_interp(lambda, inner * (1 - eps), alpha, delta)) < 10 * eps);
        }
    }
    SUBCASE("monotone non-decreasing in d, clamped to [alpha, 0]") {
        double prev = alpha;
        for (double d = 1e-12; d <= 0.5; d *= 1.5) {
            const double g = gamma_interp(100.0, d, alpha, delta);
            CHECK(g >= prev - 1e-12);
            CHECK(g >= alpha);
            CHECK(g <= 0.0);
            prev = g;
        }
    }
    SUBCASE("order zero is inert") {
        CHECK(gamma_interp(100.0, 0.01, 0.0, delta) == doctest::Approx(0.0));
    }
}

TEST_CASE("multi-bump profile") {
    SingularConfig cfg;
    cfg.rho = 5 * kPi;
    Barycenter sigma;
    const Vec2 q{0.31, 0.47};
    sigma.atoms.push_back({1.0, q, 0});

    SUBCASE("peak value is log lambda") {
        for (double lambda : {32.0, 1024.0, 1e6}) {
            MultiBump phi(sigma, cfg, lambda, 0.1);
            CHECK(phi.value(q) == doctest::Approx(std::log(lambda)).epsilon(1e-12));
        }
    }
    SUBCASE("global bounds and the outer plateau") {
        double c_delta = 0.0;
        for (double lambda : {32.0, 256.0, 2048.0}) {
            MultiBump phi(sigma, cfg, lambda, 0.1);
            const double ll = std::log(lambda);
            double outer = 0.0;
            for (int iy = 0; iy < 64; ++iy)
                for (int ix = 0; ix < 64; ++ix) {
                    const Vec2 x{ix / 64.0, iy / 64.0};
                    const double v = phi.value(x);
                    CHECK(v <= ll + 1e-12);
                    const double d = torus_dist(x, q);
                    if (d >= 0.1) outer = std::max(outer, std::abs(v + ll));
                    CHECK(v >= -ll - 10.0);  // -log lambda - C_delta
                }
            if (c_delta == 0.0) c_delta = outer + 0.5;
            CHECK(outer < c_delta);  // plateau constant independent of lambda
        }
    }
    SUBCASE("free atoms far from singular points use the gamma = 0 closed form") {
        SingularConfig scfg = half_cfg(5 * kPi);
        MultiBump phi(sigma, scfg, 200.0, 0.05);  // d(q, p1) > delta
        REQUIRE(phi.atoms().size() == 1);
        CHECK(phi.atoms()[0].gamma == doctest::Approx(0.0));
        for (const Vec2 x : {Vec2{0.2, 0.9}, Vec2{0.33, 0.45}, Vec2{0.8, 0.1}}) {
            const double d = torus_dist(x, q);
            const double expect =
                0.5 * std::log(200.0 * 200.0 /
                               std::pow(1.0 + 200.0 * 200.0 * d * d, 2.0));
            CHECK(phi.value(x) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
    SUBCASE("a pinned atom uses the singular exponent") {
        SingularConfig scfg = half_cfg(3 * kPi);
        Barycenter pinned;
        pinned.atoms.push_back({1.0, {0.25, 0.25}, 1});
        MultiBump phi(pinned, scfg, 1000.0, 0.1);
        REQUIRE(phi.atoms().size() == 1);
        CHECK(phi.atoms()[0].gamma == doctest::Approx(-0.5));
        // Profile shape: d^{2(1+gamma)} = d, so the tail decays like 1/d.
        const double v1 = phi.value({0.25 + 0.01, 0.25});
        const double v2 = phi.value({0.25 + 0.04, 0.25});
        CHECK(v1 - v2 == doctest::Approx(std::log(4.0)).epsilon(1e-2));
    }
    SUBCASE("under-resolved sampling refuses") {
        CHECK_THROWS_AS(sample_multibump(MultiBump(sigma, cfg, 1e6, 0.1), 64),
                        ResolutionError);
        CHECK_NOTHROW(sample_multibump(MultiBump(sigma, cfg, 16.0, 0.1), 256));
    }
    SUBCASE("analytic gradient matches finite differences") {
        SingularConfig scfg = half_cfg(7 * kPi);
        Barycenter two;
        two.atoms.push_back({0.6, q, 0});
        two.atoms.push_back({0.4, {0.25, 0.25}, 1});
        MultiBump phi(two, scfg, 100.0, 0.1);
        const double h = 1e-6;
        for (const Vec2 x : {Vec2{0.1, 0.8}, Vec2{0.35, 0.5}, Vec2{0.27, 0.24}}) {
            const Vec2 g = phi.gradient(x);
            const double gx = (phi.value({x.x + h, x.y}) - phi.value({x.x - h, x.y})) / (2 * h);
            const double gy = (phi.value({x.x, x.y + h}) - phi.value({x.x, x.y - h})) / (2 * h);
            CHECK(g.x == doctest::Approx(gx).epsilon(1e-5));
            CHECK(g.y == doctest::Approx(gy).epsilon(1e-5));
        }
    }
}

TEST_CASE("Liouville functional") {
    const int n = 128;
    SUBCASE("regular case at zero") {
        SingularConfig cfg;
        cfg.rho = 2 * kPi;
        SingularWeight w(cfg);
        LiouvilleFunctional J(w, cfg.rho, n);
        const TorusField zero(n);
        // J(0) = -rho log int 1 = 0 and the residual vanishes identically.
        CHECK(J.value(zero) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(J.residual_norm(zero) <= 1e-12);
    }
    SingularConfig cfg = half_cfg(kPi);
    SingularWeight w(cfg);
    LiouvilleFunctional J(w, cfg.rho, n);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    TorusField f(n);
    for (double& v : f.data()) v = u(rng);

    SUBCASE("additive invariance") {
        TorusField g = f;
        for (double& v : g.data()) v += 7.0;
        CHECK(J.value(g) == doctest::Approx(J.value(f)).epsilon(1e-8));
    }
    SUBCASE("residual is the discrete gradient") {
        // Directional derivative of J along v equals (2/n^2) sum r.v.
        const TorusField r = J.residual(f);
        CHECK(std::abs(r.mean()) <= 1e-10);
        const double h = 1e-6;
        for (int dir = 0; dir < 20; ++dir) {
            TorusField v(n);
            for (double& x : v.data()) x = u(rng);
            TorusField fp = f, fm = f;
            for (size_t i = 0; i < f.size(); ++i) {
                fp[i] += h * v[i];
                fm[i] -= h * v[i];
            }
            const double fd = (J.value(fp) - J.value(fm)) / (2 * h);
            double rv = 0.0;
            for (size_t i = 0; i < f.size(); ++i) rv += r[i] * v[i];
            rv *= 2.0 / (static_cast<double>(n) * n);
            CHECK(fd == doctest::Approx(rv).epsilon(1e-5));
        }
    }
    SUBCASE("bubbles are not critical points") {
        Barycenter pinned;
        pinned.atoms.push_back({1.0, {0.25, 0.25}, 1});
        // The pattern needs rho > 2 pi to be admissible; J itself stays at
        // rho = pi.
        const TorusField phi =
            sample_multibump(MultiBump(pinned, half_cfg(3 * kPi), 3.0, 0.1), n);
        CHECK(J.residual_norm(phi) > 1e-2);
    }
}

TEST_CASE("coercive solver") {
    SingularConfig cfg = half_cfg(kPi);
    SingularWeight w(cfg);
    SUBCASE("regular problem is solved by constants") {
        SingularConfig reg;
        reg.rho = 0.8 * kPi;
        SolveResult res = coercive_solve(SingularWeight(reg), reg.rho, 64);
        CHECK(res.converged);
        CHECK(res.u.max_abs() <= 1e-10);
    }
    SUBCASE("refuses outside the coercive range") {
        CHECK_THROWS_AS(coercive_solve(w, 0.95 * kFourPi * 0.5, 64), CoercivityError);
    }
    SUBCASE("solves at rho = pi and the trace is monotone") {
        SolveResult res = coercive_solve(w, kPi, 128);
        CHECK(res.converged);
        CHECK(res.residual <= 1e-6);
        for (size_t i = 1; i < res.j_trace.size(); ++i)
            CHECK(res.j_trace[i] <= res.j_trace[i - 1] + 1e-10);
    }
    SUBCASE("solution is invariant under randomized initial guesses") {
        SolveResult base = coercive_solve(w, kPi, 64);
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        TorusField init(64);
        for (double& v : init.data()) v = u(rng);
        const double norm = std::sqrt(dirichlet_energy(init) + 1.0);
        for (double& v : init.data()) v /= norm;
        SolveResult other = coercive_solve(w, kPi, 64, {}, &init);
        CHECK(other.converged);
        double mb = base.u.mean(), mo = other.u.mean();
        double diff = 0.0;
        for (size_t i = 0; i < base.u.size(); ++i) {
            const double d = (base.u[i] - mb) - (other.u[i] - mo);
            diff += d * d;
        }
        CHECK(std::sqrt(diff / static_cast<double>(base.u.size())) <= 1e-5);
    }
}

TEST_CASE("patchwork quadrature integrates singular radial weights") {
    // Exact radial oracle: on the fundamental square the torus distance to c
    // is Euclidean, so int d^{2 alpha} = int_0^{sqrt(2)/2} A(r) r^{2 alpha} dr
    // with A(r) the arc length of the circle of radius r inside the square,
    //   A(r) = 2 pi r                              r <= 1/2
    //   A(r) = r (2 pi - 8 arccos(1/(2r)))         1/2 < r <= sqrt(2)/2.
    const Vec2 c{0.4, 0.6};
    for (double alpha : {-0.3, -0.5, -0.8}) {
        auto f = [&](const Vec2& x) { return std::pow(torus_dist(x, c), 2 * alpha); };
        const double val = patchwork_integral(f, make_patches({c}));
        double ref = 2 * kPi * std::pow(0.5, 2 + 2 * alpha) / (2 + 2 * alpha);
        const int ns = 20000;  // Simpson on the smooth corner band
        const double a = 0.5, b = 0.5 * std::sqrt(2.0);
        auto corner = [&](double r) {
            return r * (2 * kPi - 8 * std::acos(0.5 / r)) * std::pow(r, 2 * alpha);
        };
        double s = corner(a) + corner(b);
        for (int i = 1; i < ns; ++i)
            s += corner(a + (b - a) * i / ns) * ((i % 2) ? 4.0 : 2.0);
        ref += s * (b - a) / (3.0 * ns);
        CHECK(val == doctest::Approx(ref).epsilon(1e-4));
    }
}

TEST_CASE("ball integral captures a bubble core") {
    // int_{R^2} lambda^2/(1+lambda^2 r^2)^2 = pi, so a ball of radius r
    // captures pi * lambda^2 r^2/(1+lambda^2 r^2).
    const Vec2 c{0.5, 0.5};
    const double lambda = 500.0;
    auto f = [&](const Vec2& x) {
        const double d = torus_dist(x, c);
        const double t = 1.0 + lambda * lambda * d * d;
        return lambda * lambda / (t * t);
    };
    for (double r : {0.01, 0.05, 0.2}) {
        const double expect = kPi * lambda * lambda * r * r / (1.0 + lambda * lambda * r * r);
        CHECK(ball_integral(f, c, r) == doctest::Approx(expect).epsilon(1e-3));
    }
}
