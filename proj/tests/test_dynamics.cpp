#include <doctest.h>

#include "helpers.hpp"
#include "sispatch/dynamics.hpp"
#include "sispatch/equilibria.hpp"

using namespace sispatch;
using namespace sispatch::testing;

TEST_CASE("simulate validates initial data") {
    const Model m = homogeneous_model(4.0);
    const Vector good = Vector::Ones(2);
    CHECK_THROWS_AS(simulate(m, Vector::Ones(3), good, 1.0), Error);
    CHECK_THROWS_AS(simulate(m, -good, 3.0 * good, 1.0), Error);
    CHECK_THROWS_AS(simulate(m, good, 2.0 * good, 1.0), Error); // sum != N
    CHECK_THROWS_AS(simulate(m, good, good, -1.0), Error);      // bad horizon
}

TEST_CASE("mass conservation and positivity along trajectories") {
    for (unsigned seed = 0; seed < 6; ++seed) {
        const Model m = random_model(seed, 2 + static_cast<int>(seed % 3));
        const auto [S0, I0] = random_interior_state(seed + 1000, m);
        const auto traj = simulate(m, S0, I0, 50.0);
        CHECK(traj.max_conservation_drift <= 1e-8 * m.N);
        for (const auto& s : traj.S) CHECK(s.minCoeff() >= 0.0);
        for (const auto& i : traj.I) CHECK(i.minCoeff() >= 0.0);
        CHECK(traj.accepted_steps > 0);
    }
}

TEST_CASE("disease-free initial data relaxes to N alpha") {
    const Model m = random_model(11, 3);
    Vector I0 = Vector::Zero(3);
    Vector S0 = Vector::Constant(3, m.N / 3.0);
    const auto traj = simulate(m, S0, I0, 300.0);
    const Vector target = m.N * m.alpha();
    CHECK((traj.S.back() - target).lpNorm<Eigen::Infinity>() < 1e-6);
    CHECK(traj.I.back().lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("trajectories approach the unique stable endemic equilibrium") {
    const Model m = homogeneous_model(4.0);
    const auto eqs = find_endemic_equilibria(m);
    REQUIRE(eqs.size() == 1);
    for (unsigned seed = 0; seed < 3; ++seed) {
        const auto [S0, I0] = random_interior_state(seed, m);
        const auto traj = simulate(m, S0, I0, 200.0);
        const auto rep = detect_convergence(traj, eqs[0], 5, 1e-6);
        CHECK(rep.converged);
    }
}

TEST_CASE("persistence floor is positive above threshold") {
    const Model m = homogeneous_model(4.0);
    const auto [S0, I0] = random_interior_state(3, m);
    const auto traj = simulate(m, S0, I0, 200.0);
    CHECK(persistence_floor(traj, 0.5) > 0.1);
}

TEST_CASE("pure dispersal drifts to the alpha ray") {
    const Model m = random_model(21, 4);
    Vector X0(4);
    X0 << 1.0, 0.2, 0.5, 2.0;
    CHECK(drift_projection_check(m.conn, 1.3, X0, 200.0) < 1e-7);
}
