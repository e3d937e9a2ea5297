#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sispatch/asymptotics.hpp"
#include "sispatch/equilibria.hpp"

using namespace sispatch;
using namespace sispatch::testing;

namespace {

// 2-patch instance with alpha = (1/2, 1/2) and r = (1, 2).
Model two_risk_levels(double N, double dS = 1.0, double dI = 1.0) {
    Matrix L(2, 2);
    L << -1, 1, 1, -1;
    Vector beta = Vector::Ones(2);
    Vector gamma(2);
    gamma << 1.0, 2.0;
    return build_model(L, beta, gamma, dS, dI, N);
}

// 3-patch symmetric ring: alpha uniform, r = (1, 1, 2) ties the first two.
Model tied_minima(double N, double dS = 1.0, double dI = 1.0) {
    Matrix L(3, 3);
    L << -2, 1, 1, 1, -2, 1, 1, 1, -2;
    Vector beta = Vector::Ones(3);
    Vector gamma(3);
    gamma << 1.0, 1.0, 2.0;
    return build_model(L, beta, gamma, dS, dI, N);
}

} // namespace

TEST_CASE("omega_star picks the minimizers of r_i / alpha_i") {
    // alpha = (1/3, 2/3), r = (2/3, 2/3) -> ratios (2, 1)
    Matrix L(2, 2);
    L << -2, 1, 2, -1;
    Vector beta = Vector::Ones(2);
    Vector gamma = Vector::Constant(2, 2.0 / 3.0);
    const Model m = build_model(L, beta, gamma, 1, 1, 4);
    CHECK(omega_star(m) == std::vector<int>{1});

    CHECK(omega_star(homogeneous_model(4.0)) == std::vector<int>{0, 1});
    CHECK(omega_star(tied_minima(4.0)) == std::vector<int>{0, 1});
}

TEST_CASE("dS -> 0 profile, supercritical branch") {
    const Model m = homogeneous_model(4.0); // sum r = 2 < N = 4
    const auto p = profile_dS_to_zero(m);
    CHECK(p.branch == DsZeroCase::AboveTotalRisk);
    CHECK((p.S_limit - Vector::Ones(2)).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK((p.I_limit - Vector::Ones(2)).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("dS -> 0 profile, subcritical branch has vanishing infection") {
    const Model m = two_risk_levels(2.5, 1.0, 0.5); // sum r = 3 > N
    const auto p = profile_dS_to_zero(m);
    CHECK(p.branch == DsZeroCase::BelowTotalRisk);
    CHECK(p.I_limit.lpNorm<Eigen::Infinity>() == 0.0);
    REQUIRE(p.I_bar.has_value());
    CHECK(p.S_limit.sum() == doctest::Approx(m.N).epsilon(1e-8));
}

TEST_CASE("reduced infected system: marching collapses to zero for safe patches") {
    // N alpha_i < r_i everywhere forces decay
    const Model m = two_risk_levels(1.8);
    const Vector Ibar = solve_barI(m);
    CHECK(Ibar.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("dS -> 0 boundary case reports both admissible limits") {
    // alpha = (1/3, 2/3) aligned with r = (1, 2): N = sum r and the reduced
    // system is stationary at alpha-proportional data
    Matrix L(2, 2);
    L << -2, 1, 2, -1;
    Vector beta = Vector::Ones(2);
    Vector gamma(2);
    gamma << 1.0, 2.0;
    const Model m = build_model(L, beta, gamma, 1.0, 0.5, 3.0);
    const auto p = profile_dS_to_zero(m);
    CHECK(p.branch == DsZeroCase::AtTotalRisk);
    CHECK((p.S_limit - m.r).lpNorm<Eigen::Infinity>() < 1e-12);
    REQUIRE(p.S_limit_alt.has_value());
    CHECK(p.S_limit_alt->sum() == doctest::Approx(m.N).epsilon(1e-8));
}

TEST_CASE("dI -> 0 profile: concentration on the single riskiest patch") {
    const Model m = two_risk_levels(4.0); // ratios (2, 4): omega = {0}
    const auto p = profile_dI_to_zero(m);
    CHECK(p.omega == std::vector<int>{0});
    const double rm = 2.0;
    CHECK((p.S_limit - rm * m.alpha()).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(p.I_total == doctest::Approx(m.N - rm).epsilon(1e-12));
    REQUIRE(p.I_star.size() == 1);
    CHECK(p.I_star(0) == doctest::Approx(p.I_total).epsilon(1e-12));
    // closed form: C* = (I_total - dS L_00 / beta_0) / alpha_0
    const double expect = (p.I_total - m.dS * m.L()(0, 0) / m.beta(0)) / m.alpha()(0);
    CHECK(p.C_star == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("dI -> 0 profile with tied minima solves the reduced system by bisection") {
    const Model m = tied_minima(4.0, 0.3); // (r/alpha)_m = 3, omega = {0, 1}
    const auto p = profile_dI_to_zero(m);
    CHECK(p.omega == std::vector<int>{0, 1});
    CHECK(p.I_star.sum() == doctest::Approx(p.I_total).epsilon(1e-9));
    CHECK(p.C_star >= p.bracket_lo * (1 - 1e-9));
    CHECK(p.C_star <= p.bracket_hi * (1 + 1e-9));
    // small-dS limit distributes the infected mass alpha-proportionally
    const auto tight = profile_dI_to_zero(tied_minima(4.0, 1e-5));
    const Vector even = Vector::Constant(2, p.I_total / 2.0);
    CHECK((tight.I_star - even).lpNorm<Eigen::Infinity>() < 1e-3);
}

TEST_CASE("dI -> 0 profile rejects degenerate instances") {
    CHECK_THROWS_AS(profile_dI_to_zero(homogeneous_model(4.0)), Error);
    CHECK_THROWS_AS(profile_dI_to_zero(two_risk_levels(1.5)), Error); // N < (r/alpha)_m
}

TEST_CASE("sigma profile reproduces the worked two-patch example") {
    const Model m = two_risk_levels(4.0);
    const auto p = sigma_profile(m, 1.0);
    CHECK(p.l_sigma == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.S_limit(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.S_limit(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p.I_limit(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.I_limit(1) == 0.0);
}

TEST_CASE("sigma profile conserves the population identically") {
    for (unsigned seed = 0; seed < 8; ++seed) {
        const Model m = random_model(seed, 2 + static_cast<int>(seed % 4));
        for (double sigma : {0.1, 1.0, 7.5}) {
            const auto p = sigma_profile(m, sigma);
            CHECK(p.S_limit.sum() + p.I_limit.sum() == doctest::Approx(m.N).epsilon(1e-12));
            CHECK((p.I_limit.array() >= 0.0).all());
        }
    }
    CHECK_THROWS_AS(sigma_profile(random_model(1, 2), 0.0), Error);
}

TEST_CASE("sigma sublimits cover the three large-sigma cases") {
    // case 2: N = sum r
    const auto s2 = sigma_sublimits(two_risk_levels(3.0));
    CHECK(s2.inf_case == 2);
    CHECK(s2.l_inf == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK((s2.S_inf - two_risk_levels(3.0).r).lpNorm<Eigen::Infinity>() < 1e-12);

    // case 1: N < sum r, interior root
    const Model m1 = two_risk_levels(2.5);
    const auto s1 = sigma_sublimits(m1);
    CHECK(s1.inf_case == 1);
    CHECK(s1.l_inf > 2.0 / m1.N);
    CHECK(s1.l_inf < 4.0 / m1.N);
    CHECK(s1.S_inf.sum() == doctest::Approx(m1.N).epsilon(1e-12));
    CHECK_THROWS_AS(sigma_inf_l_root(two_risk_levels(4.0)), Error);

    // case 3: N > sum r; large-sigma profile approaches the closed form
    const Model m3 = two_risk_levels(4.0);
    const auto s3 = sigma_sublimits(m3);
    CHECK(s3.inf_case == 3);
    const double sigma = 1e6;
    const auto p = sigma_profile(m3, sigma);
    const double l_closed = (sigma * (m3.N - m3.r.sum()) + m3.r.sum()) / m3.N;
    CHECK(p.l_sigma == doctest::Approx(l_closed).epsilon(1e-4));
    CHECK((p.S_limit - s3.S_inf).lpNorm<Eigen::Infinity>() < 1e-4);
    CHECK((p.I_limit - s3.I_inf).lpNorm<Eigen::Infinity>() < 1e-4);

    // sigma -> 0 endpoint
    const auto p0 = sigma_profile(m3, 1e-6);
    CHECK((p0.S_limit - s3.S_sigma_zero).lpNorm<Eigen::Infinity>() < 1e-4);
    CHECK((p0.I_limit - s3.I_sigma_zero).lpNorm<Eigen::Infinity>() < 1e-4);
}

TEST_CASE("critical population estimate respects the analytic bracket") {
    const Model m = two_risk_levels(4.0, 1.0, 0.7);
    const auto est = critical_N_estimate(m);
    CHECK(est.bracket_hi == doctest::Approx(4.0).epsilon(1e-12)); // (r/alpha)_M
    CHECK(est.estimate >= est.bracket_lo - 1e-6);
    CHECK(est.estimate < est.bracket_hi);
    CHECK_THROWS_AS(critical_N_estimate(homogeneous_model(4.0)), Error);
}

TEST_CASE("family sum depends on l and N only through their product") {
    const Model m = two_risk_levels(4.0, 1.0, 0.7);
    Model scaled = m;
    scaled.N = 2.0;
    // l N equal in both: capital_N must agree
    CHECK(capital_N(m, 1.1) == doctest::Approx(capital_N(scaled, 2.2)).epsilon(1e-8));
}
