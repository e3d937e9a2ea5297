#ifndef SISPATCH_TEST_HELPERS_HPP
#define SISPATCH_TEST_HELPERS_HPP

#include <random>

#include "sispatch/model.hpp"

namespace sispatch::testing {

// Random fully connected instance; every off-diagonal positive, so the
// movement digraph is strongly connected by construction.
inline Model random_model(unsigned seed, int n, double dS = -1.0, double dI = -1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> conn(0.2, 1.2);
    std::uniform_real_distribution<double> rate(0.5, 2.0);
    std::uniform_real_distribution<double> disp(0.1, 2.0);
    std::uniform_real_distribution<double> pop(1.0, 6.0);

    Matrix L = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) L(i, j) = conn(rng);
    Vector beta(n), gamma(n);
    for (int i = 0; i < n; ++i) beta(i) = rate(rng);
    for (int i = 0; i < n; ++i) gamma(i) = rate(rng);
    const double ds = dS > 0 ? dS : disp(rng);
    const double di = dI > 0 ? dI : disp(rng);
    return build_model(L, beta, gamma, ds, di, n * pop(rng));
}

// 2-patch symmetric instance with unit rates: alpha = (1/2, 1/2), r = (1, 1).
inline Model homogeneous_model(double N = 4.0, double dS = 1.0, double dI = 1.0) {
    Matrix L(2, 2);
    L << -1, 1, 1, -1;
    Vector ones = Vector::Ones(2);
    return build_model(L, ones, ones, dS, dI, N);
}

// Random interior state with the given infected mass fraction.
inline std::pair<Vector, Vector> random_interior_state(unsigned seed, const Model& m) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    Vector S(m.n()), I(m.n());
    for (int i = 0; i < m.n(); ++i) S(i) = unit(rng);
    for (int i = 0; i < m.n(); ++i) I(i) = unit(rng);
    const double scale = m.N / (S.sum() + I.sum());
    return {scale * S, scale * I};
}

} // namespace sispatch::testing

#endif
