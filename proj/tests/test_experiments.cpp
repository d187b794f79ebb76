#include <doctest.h>

#include <cmath>

#include "wbary/experiments.hpp"
#include "wbary/report.hpp"

using namespace wbary;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Short lambda grid: fast, still spans 1.5 decades for the slope fits.
const std::vector<double> kShortGrid{32, 64, 128, 256, 512, 1024};

SingularConfig regular_cfg(double rho) {
    SingularConfig cfg;
    cfg.rho = rho;
    return cfg;
}

SingularConfig half_cfg(double rho) {
    SingularConfig cfg;
    cfg.alphas = {-0.5};
    cfg.rho = rho;
    cfg.positions = {{0.25, 0.25}};
    return cfg;
}

Barycenter free_atom(const Vec2& q) {
    Barycenter b;
    b.atoms.push_back({1.0, q, 0});
    return b;
}

Barycenter pinned_atom(const SingularConfig& cfg, int j) {
    Barycenter b;
    b.atoms.push_back({1.0, cfg.positions[static_cast<size_t>(j - 1)], j});
    return b;
}

}  // namespace

TEST_CASE("energy scan fits the bubble asymptotics") {
    SingularConfig cfg = regular_cfg(5 * kPi);
    ScanReport rep = energy_scan(cfg, free_atom({0.31, 0.47}), kShortGrid, 0.1, cfg.rho);
    CHECK(rep.all_pass());
    CHECK(rep.fits.at("dirichlet").slope ==
          doctest::Approx(8 * kPi).epsilon(0.10));
    CHECK(rep.fits.at("mean").slope == doctest::Approx(-1.0).epsilon(0.05));
    // rho > 4 pi chi: the functional must run off to -infinity.
    CHECK(rep.fits.at("J").slope < 0.0);
}

TEST_CASE("energy scan is deterministic and translation invariant") {
    SingularConfig cfg = regular_cfg(5 * kPi);
    const std::vector<double> grid{32, 64, 128, 256};
    ScanReport a = energy_scan(cfg, free_atom({0.31, 0.47}), grid, 0.1, cfg.rho);
    ScanReport b = energy_scan(cfg, free_atom({0.31, 0.47}), grid, 0.1, cfg.rho);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.to_csv() == b.to_csv());
    // Translation by a multiple of the smooth-quadrature cell keeps the
    // quadrature nodes aligned, so the slopes match to round-off.
    ScanReport t = energy_scan(cfg, free_atom({0.31 + 0.25, 0.47 + 0.25}), grid, 0.1, cfg.rho);
    CHECK(std::abs(a.fits.at("dirichlet").slope - t.fits.at("dirichlet").slope) <= 1e-6);
    CHECK(std::abs(a.fits.at("J").slope - t.fits.at("J").slope) <= 1e-6);
}

TEST_CASE("concentration scan captures the bubble mass") {
    SingularConfig cfg = regular_cfg(5 * kPi);
    ScanReport rep = concentration_scan(cfg, free_atom({0.31, 0.47}), 500.0, 0.05, 0.1);
    CHECK(rep.all_pass());
    // Fractions are non-decreasing in lambda (single atom: one row per scale).
    const std::vector<double> frac = rep.column("ball_fraction");
    for (size_t i = 1; i < frac.size(); ++i) CHECK(frac[i] >= frac[i - 1] - 1e-9);
}

TEST_CASE("symmetric two-atom measure concentrates symmetrically") {
    SingularConfig cfg = regular_cfg(9 * kPi);
    Barycenter sym;
    sym.atoms.push_back({0.5, {0.25, 0.5}, 0});
    sym.atoms.push_back({0.5, {0.75, 0.5}, 0});
    ScanReport rep = concentration_scan(cfg, sym, 500.0, 0.05, 0.1);
    CHECK(rep.all_pass());
    const std::vector<double> atom = rep.column("atom");
    const std::vector<double> tw = rep.column("limit_weight");
    for (size_t i = 0; i + 1 < tw.size(); i += 2) {
        CHECK(atom[i] != atom[i + 1]);
        CHECK(tw[i] == doctest::Approx(tw[i + 1]).epsilon(1e-3));
    }
}

TEST_CASE("trace inequality probes") {
    SUBCASE("regular family stays below 1/(4pi)") {
        SingularConfig cfg = regular_cfg(5 * kPi);
        ScanReport rep = mt_probe(cfg, free_atom({0.31, 0.47}), kShortGrid, 0.1);
        CHECK(rep.verdicts.at("below_bound"));
        for (double r : rep.column("ratio")) CHECK(r <= 1.05 / (4 * kPi));
    }
    SUBCASE("singular family exceeds the unweighted constant") {
        SingularConfig cfg = half_cfg(3 * kPi);
        ScanReport rep = mt_probe(cfg, pinned_atom(cfg, 1), kShortGrid, 0.1);
        CHECK(rep.verdicts.at("below_bound"));
        CHECK(rep.verdicts.at("exceeds_free_constant"));
        for (double r : rep.column("ratio")) CHECK(r <= 1.05 / (2 * kPi));
    }
}

TEST_CASE("improved probe enforces its hypotheses") {
    SingularConfig cfg = regular_cfg(9 * kPi);
    Barycenter spread;
    spread.atoms.push_back({0.5, {0.25, 0.5}, 0});
    spread.atoms.push_back({0.5, {0.75, 0.5}, 0});
    ScanReport rep = improved_probe(cfg, spread, kShortGrid, 0.1, 0.2, 0.05);
    CHECK(rep.all_pass());

    // Atoms closer than 4 delta0 violate the separation hypothesis.
    Barycenter close;
    close.atoms.push_back({0.5, {0.25, 0.5}, 0});
    close.atoms.push_back({0.5, {0.29, 0.5}, 0});
    CHECK_THROWS_AS(improved_probe(cfg, close, kShortGrid, 0.1, 0.2, 0.05),
                    std::invalid_argument);
}

TEST_CASE("coercive solve scan") {
    SingularConfig cfg = half_cfg(kPi);
    ScanReport rep = coercive_solve_scan(cfg, kPi, 128);
    CHECK(rep.all_pass());
    CHECK(rep.scalars.at("residual") <= 1e-6);
}

TEST_CASE("parameter sweep tabulates the stratified regimes") {
    SingularConfig cfg = half_cfg(kPi);
    cfg.alphas = {-0.5, -0.25};
    cfg.positions = {{0.25, 0.25}, {0.75, 0.75}};
    ScanReport rep = parameter_sweep(cfg, {0.5 * kPi, 2.5 * kPi, 4.5 * kPi, 2 * kPi});
    CHECK(rep.scalars.at("skipped_singular_rho") == doctest::Approx(1.0));  // 2 pi is singular
    REQUIRE(rep.rows.size() == 3);

    // Known regimes: rho = 2.5 pi sits between 4 pi (1+a2) = 3 pi? no --
    // masses are 2 pi and 3 pi, so 2.5 pi admits only the lighter point.
    const std::vector<double> n_strata = rep.column("n_strata");
    CHECK(n_strata[0] == doctest::Approx(0.0));  // rho = 0.5 pi: nothing admissible
    CHECK(n_strata[1] == doctest::Approx(1.0));  // rho = 2.5 pi: (0,{1}) only
    const std::vector<double> p1 = rep.column("p1_stable");
    CHECK(p1[2] == doctest::Approx(0.0));  // 4.5 pi: (1,{}) in, (1,{1}) out
}

TEST_CASE("randomized stability sweep finds no propagation violations") {
    ScanReport rep = stability_sweep(12345, 500);
    CHECK(rep.verdicts.at("propagation"));
    CHECK(rep.scalars.at("propagation_violations") == doctest::Approx(0.0));
    // Deterministic given the seed.
    ScanReport again = stability_sweep(12345, 500);
    CHECK(rep.to_json().dump() == again.to_json().dump());
}
