#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "wbary/green.hpp"
#include "wbary/grid.hpp"
#include "wbary/measures.hpp"
#include "wbary/quadrature.hpp"
#include "wbary/strata.hpp"

using namespace wbary;

namespace {

constexpr double kPi = 3.14159265358979323846;

Barycenter random_barycenter(int atoms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Barycenter b;
    double total = 0.0;
    for (int i = 0; i < atoms; ++i) {
        const double t = 0.1 + u(rng);
        b.atoms.push_back({t, {u(rng), u(rng)}, 0});
        total += t;
    }
    for (auto& a : b.atoms) a.weight /= total;
    return b;
}

}  // namespace

static void BM_BlDistance(benchmark::State& state) {
    const int atoms = static_cast<int>(state.range(0));
    const Barycenter s1 = random_barycenter(atoms, 7);
    const Barycenter s2 = random_barycenter(atoms, 11);
    for (auto _ : state) benchmark::DoNotOptimize(bl_distance(s1, s2));
}
BENCHMARK(BM_BlDistance)->Arg(4)->Arg(16)->Arg(64);

static void BM_EnumerateStrata(benchmark::State& state) {
    SingularConfig cfg;
    const int m = static_cast<int>(state.range(0));
    for (int i = 0; i < m; ++i) {
        cfg.alphas.push_back(-0.9 + 0.1 * i);
        cfg.positions.push_back({0.1 + 0.1 * i, 0.2});
    }
    cfg.rho = 10.3 * kPi;
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_strata(cfg));
}
BENCHMARK(BM_EnumerateStrata)->Arg(2)->Arg(4)->Arg(6);

static void BM_DirichletEnergy(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    TorusField f(n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            f.at(ix, iy) = std::sin(2 * kPi * ix / n) * std::cos(2 * kPi * iy / n);
    for (auto _ : state) benchmark::DoNotOptimize(dirichlet_energy(f));
}
BENCHMARK(BM_DirichletEnergy)->Arg(128)->Arg(256)->Arg(512);

static void BM_GreenSpectral(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(green_spectral(n, {0.3, 0.7}));
}
BENCHMARK(BM_GreenSpectral)->Arg(128)->Arg(256);

static void BM_PatchworkSingular(benchmark::State& state) {
    const Vec2 c{0.4, 0.6};
    const double alpha = -0.05 * static_cast<double>(state.range(0));
    auto f = [&](const Vec2& x) { return std::pow(torus_dist(x, c), 2 * alpha); };
    const auto patches = make_patches({c});
    for (auto _ : state) benchmark::DoNotOptimize(patchwork_integral(f, patches));
}
BENCHMARK(BM_PatchworkSingular)->Arg(6)->Arg(16);

static void BM_CellWeights(benchmark::State& state) {
    SingularConfig cfg;
    cfg.alphas = {-0.5};
    cfg.positions = {{0.25, 0.25}};
    cfg.rho = kPi;
    const SingularWeight w(cfg);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cell_weights(w, n));
}
BENCHMARK(BM_CellWeights)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
