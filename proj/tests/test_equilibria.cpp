#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sispatch/equilibria.hpp"

using namespace sispatch;
using namespace sispatch::testing;

TEST_CASE("homogeneous oracle: exactly one endemic equilibrium at S = I = (1,1)") {
    const Model m = homogeneous_model(4.0);
    const auto eqs = find_endemic_equilibria(m);
    REQUIRE(eqs.size() == 1);
    CHECK((eqs[0].S - Vector::Ones(2)).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK((eqs[0].I - Vector::Ones(2)).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK(eqs[0].stability == Stability::Stable);
    CHECK(steady_state_residual(m, eqs[0].S, eqs[0].I) < 1e-9);
}

TEST_CASE("family solution bounds and balance identity") {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const Model m = random_model(seed, 2 + static_cast<int>(seed % 4));
        const double r0 = basic_reproduction_number(m);
        const double l = 1.5 / r0;
        const auto fam = solve_family(m, l);
        REQUIRE(fam.has_value());
        // 0 < dI U < N alpha componentwise
        CHECK(fam->U.minCoeff() > 0.0);
        CHECK(((m.dI * fam->U).array() < (m.N * m.alpha()).array()).all());
        // (r_m / alpha_M) alpha <= Z <= (r_M / alpha_m) alpha
        const double lo = m.r.minCoeff() / m.alpha().maxCoeff();
        const double hi = m.r.maxCoeff() / m.alpha().minCoeff();
        CHECK((fam->Z.array() >= (lo * m.alpha()).array() - 1e-8).all());
        CHECK((fam->Z.array() <= (hi * m.alpha()).array() + 1e-8).all());
        // balance function assembles from the family sum
        CHECK(balance_F(m, m.dS, l) ==
              doctest::Approx(capital_N(m, l) + m.dS * l * fam->U.sum()).epsilon(1e-10));
    }
}

TEST_CASE("family solution does not exist at or below the threshold") {
    const Model m = homogeneous_model(4.0); // r0 = 2
    CHECK_FALSE(solve_family(m, 0.4).has_value());
    CHECK(solve_family(m, 0.6).has_value());
}

TEST_CASE("family solution is strictly increasing in l") {
    const Model m = random_model(42, 3);
    const double r0 = basic_reproduction_number(m);
    Vector prev;
    for (double f : {1.2, 1.6, 2.4, 4.0, 8.0}) {
        const auto fam = solve_family(m, f / r0);
        REQUIRE(fam.has_value());
        if (prev.size()) CHECK((fam->U.array() > prev.array()).all());
        prev = fam->U;
    }
}

TEST_CASE("assembled equilibria satisfy the steady state and conservation") {
    for (unsigned seed = 20; seed < 26; ++seed) {
        const Model m = random_model(seed, 2 + static_cast<int>(seed % 3));
        for (const auto& eq : find_endemic_equilibria(m)) {
            CHECK(steady_state_residual(m, eq.S, eq.I) <
                  1e-8 * m.N * (1.0 + m.beta.lpNorm<Eigen::Infinity>() * m.N));
            CHECK(eq.S.sum() + eq.I.sum() == doctest::Approx(m.N).epsilon(1e-8));
            CHECK(eq.S.minCoeff() > 0.0);
            CHECK(eq.I.minCoeff() > 0.0);
            // kappa* N = dS N + (dI - dS) sum(I)
            const double kappaN = m.dS * m.N + (m.dI - m.dS) * eq.I.sum();
            CHECK(eq.kappa_star * m.N == doctest::Approx(kappaN).epsilon(1e-8));
        }
    }
}

TEST_CASE("equal dispersal shortcut matches the general root finder") {
    Model m = random_model(77, 3, 0.8, 0.8);
    if (basic_reproduction_number(m) <= 1.0) m.N *= 4.0;
    const auto direct = special_ee_equal_dispersal(m);
    const auto eqs = find_endemic_equilibria(m);
    REQUIRE(eqs.size() == 1);
    CHECK((direct.S - eqs[0].S).lpNorm<Eigen::Infinity>() < 1e-7 * m.N);
    CHECK((direct.I - eqs[0].I).lpNorm<Eigen::Infinity>() < 1e-7 * m.N);
}

TEST_CASE("sensitivity of the family sum agrees with finite differences") {
    for (unsigned seed = 30; seed < 36; ++seed) {
        const Model m = random_model(seed, 2 + static_cast<int>(seed % 4));
        const double l = 2.0 / basic_reproduction_number(m);
        const double k = sensitivity_K(m, l);
        const double k_fd = sensitivity_K_fd(m, l);
        CHECK(k == doctest::Approx(k_fd).epsilon(1e-6));
    }
}

TEST_CASE("sensitivity approaches N / dI for large l") {
    const Model m = random_model(5, 3);
    const double l = 1e4 / basic_reproduction_number(m);
    CHECK(sensitivity_K(m, l) == doctest::Approx(m.N / m.dI).epsilon(0.01));
}

TEST_CASE("jacobian stability tags the DFE by the sign of r0 - 1") {
    Model sup = homogeneous_model(4.0); // r0 = 2
    CHECK(jacobian_stability(sup, dfe(sup)).tag == Stability::Unstable);
    Model sub = homogeneous_model(1.5); // r0 = 0.75
    CHECK(jacobian_stability(sub, dfe(sub)).tag == Stability::Stable);
}

TEST_CASE("uniqueness margin is exactly 1 for proportional rates") {
    Matrix L(2, 2);
    L << -2, 1, 2, -1; // alpha = (1/3, 2/3)
    Vector beta(2);
    beta << 6.0, 1.5;
    const Vector alpha = (Vector(2) << 1.0 / 3, 2.0 / 3).finished();
    const Vector gamma = 0.9 * beta.cwiseProduct(alpha);
    const Model m = build_model(L, beta, gamma, 0.5, 1.0, 4.0);
    CHECK(uniqueness_margin(m) == 1.0);
}

TEST_CASE("dS sweep orders thresholds and counts equilibria") {
    const Model m = homogeneous_model(4.0);
    std::vector<double> grid = {0.25, 0.5, 1.0, 2.0, 4.0};
    const auto sweep = bifurcation_sweep_dS(m, grid);
    REQUIRE(sweep.points.size() == grid.size());
    for (const auto& pt : sweep.points) CHECK(pt.equilibria.size() == 1);
}
