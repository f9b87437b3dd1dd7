#include <doctest.h>

#include <random>

#include "llspec/eigensolve.hpp"
#include "llspec/errors.hpp"
#include "llspec/landscape.hpp"
#include "oracles.hpp"

using namespace llspec;

namespace {

// Dense LU solve of (H + s) u = 1.
std::vector<double> dense_landscape(const Potential& p, double s) {
    const Eigen::MatrixXd H = oracle::hamiltonian(p) + s * Eigen::MatrixXd::Identity(p.grid.N, p.grid.N);
    const Eigen::VectorXd u = H.partialPivLu().solve(Eigen::VectorXd::Ones(p.grid.N));
    return {u.data(), u.data() + u.size()};
}

}  // namespace

TEST_CASE("landscape matches a dense solve") {
    const Potential p4 = Potential::from_samples(Grid::make(4.0, 1.0), {1, 2, 1, 2});
    const Landscape l4 = solve_landscape(p4);
    const auto r4 = dense_landscape(p4, 0.0);
    for (int x = 0; x < 4; ++x) {
        CHECK(l4.u[x] == doctest::Approx(r4[x]).epsilon(1e-12));
        CHECK(l4.v_u[x] == doctest::Approx(1.0 / r4[x]).epsilon(1e-12));
    }
    CHECK(l4.shift == 0.0);
    const Potential p = gen_potential(Grid::make(40.0, 0.1), {DisorderKind::SpeckleGauss, 1.0}, 7);
    const Landscape l = solve_landscape(p);
    const auto r = dense_landscape(p, 0.0);
    for (int x = 0; x < p.grid.N; ++x) CHECK(l.u[x] == doctest::Approx(r[x]).epsilon(1e-9));
}

TEST_CASE("constant potential gives u = 1/c") {
    const Grid g = Grid::make(10.0, 0.1);
    for (double c : {0.01, 1.0, 40.0}) {
        const Landscape l = solve_landscape(Potential::from_samples(g, std::vector<double>(g.N, c)));
        for (int x = 0; x < g.N; ++x) {
            CHECK(l.u[x] == doctest::Approx(1.0 / c).epsilon(1e-12));
            CHECK(l.v_u[x] == doctest::Approx(c).epsilon(1e-12));
        }
    }
}

TEST_CASE("residual and maximum principle on speckle") {
    const Grid g = Grid::make(300.0, 0.05);
    for (int s = 0; s < 5; ++s) {
        Potential p = gen_potential(g, {DisorderKind::SpeckleGauss, 1.0}, s);
        const Landscape l = solve_landscape(p);
        CHECK(landscape_residual(p, l) <= 1e-10);
        for (auto& v : p.V) v += 0.1;
        const Landscape m = solve_landscape(p);
        for (int x = 0; x < g.N; ++x) {
            CHECK(m.u[x] > 0.0);
            CHECK(m.u[x] <= 1.0 / p.min() + 1e-8);
        }
    }
}

TEST_CASE("forced shift reproduces the shifted potential") {
    const Grid g = Grid::make(100.0, 0.05);
    Potential p = gen_potential(g, {DisorderKind::SpeckleGauss, 1.0}, 9);
    for (auto& v : p.V) v += 0.05;
    const double c = 0.7;
    Potential q = p;
    for (auto& v : q.V) v += c;
    const Landscape a = solve_landscape(p);
    const Landscape b = solve_landscape_shifted(q, -c);
    CHECK(b.shift == -c);
    CHECK(landscape_residual(q, b) <= 1e-10);
    for (int x = 0; x < g.N; ++x) CHECK(std::abs((b.v_u[x] - c) - a.v_u[x]) <= 1e-8);
}

TEST_CASE("shift rule for potentials with negative values") {
    const Grid g = Grid::make(100.0, 0.05);
    const Potential p = gen_potential(g, {DisorderKind::GaussGauss, 1.0}, 4);
    const double e0 = ground_energy(p);
    REQUIRE(e0 < 0.0);
    const Landscape a = solve_landscape(p, 0.1);
    CHECK(a.ground_energy_used == doctest::Approx(e0).epsilon(1e-12));
    CHECK(a.shift == doctest::Approx(-e0 + 0.1).epsilon(1e-12));
    CHECK(landscape_residual(p, a) <= 1e-10);
    for (double u : a.u) CHECK(u > 0.0);

    // Positive ground energy with some negative samples: no shift.
    std::vector<double> V(g.N, 2.0);
    V[0] = -1.0;
    const Landscape c = solve_landscape(Potential::from_samples(g, V));
    CHECK(c.shift == 0.0);
    CHECK_THROWS_AS(solve_landscape(p, 0.0), ParameterError);
}

TEST_CASE("singular and indefinite systems are reported") {
    const Grid g = Grid::make(10.0, 0.1);
    const Potential z = Potential::from_samples(g, std::vector<double>(g.N, 0.0));
    CHECK_THROWS_AS(solve_landscape_shifted(z, 0.0), NumericalError);
    CHECK_THROWS_AS(solve_landscape_shifted(Potential::from_samples(g, std::vector<double>(g.N, 0.5)), -1.0),
                    NumericalError);
}

TEST_CASE("Weyl count") {
    const Grid g = Grid::make(oracle::pi, oracle::pi / 100.0);
    const std::vector<double> zero(g.N, 0.0);
    // L = pi, E = 1/2: (1/2pi) * L * 2 sqrt(2E) = 1.
    CHECK(idos_weyl(zero, g, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(idos_weyl(zero, g, -0.1) == 0.0);
    const Potential p = gen_potential(Grid::make(50.0, 0.05), {DisorderKind::SpeckleGauss, 1.0}, 1);
    double prev = -1.0;
    for (double E = -0.5; E < 4.0; E += 0.01) {
        const double n = idos_weyl(p.V, p.grid, E);
        CHECK(n >= prev);
        prev = n;
    }
    CHECK(idos_weyl(p.V, p.grid, p.min() - 1e-9) == 0.0);
}

TEST_CASE("effective potential approaches V in the semiclassical regime") {
    const Grid g = Grid::make(100.0, 0.05);
    auto mean_gap = [&](double eta) {
        const Potential p = gen_potential(g, {DisorderKind::SpeckleGauss, eta}, 31);
        const Landscape l = solve_landscape(p);
        double s = 0.0;
        for (int x = 0; x < g.N; ++x) s += std::abs(l.v_u[x] - p.V[x]) / (eta * g.N);
        return s;
    };
    CHECK(mean_gap(50.0) < mean_gap(0.5));
}

TEST_CASE("claims: V_u pointwise independent of epsilon within 1% when epsilon is halved" * doctest::test_suite("claims")) {
    const Grid g = Grid::make(100.0, 0.05);
    const Potential p = gen_potential(g, {DisorderKind::GaussGauss, 1.0}, 4);
    const Landscape a = solve_landscape(p, 0.1);
    const Landscape b = solve_landscape(p, 0.05);
    double spread = 0.0, dv = 0.0;
    for (int x = 0; x < g.N; ++x) {
        dv = std::max(dv, std::abs(a.v_u[x] - b.v_u[x]));
        spread = std::max(spread, std::abs(a.v_u[x]));
    }
    MESSAGE("max |dV_u| under halved epsilon: " << dv << " (max |V_u| " << spread << ")");
    CHECK(dv <= 0.01 * spread);
}
