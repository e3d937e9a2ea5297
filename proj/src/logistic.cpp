#include "sispatch/logistic.hpp"

#include <cmath>

namespace sispatch {

namespace {

Vector rhs(const Matrix& m, const Vector& a, const Vector& b, const Vector& u) {
    return m * u + (a - b.cwiseProduct(u)).cwiseProduct(u);
}

} // namespace

Vector solve_cooperative_logistic(const Matrix& m, const Vector& a, const Vector& b,
                                  Vector u, double target_residual) {
    const int n = static_cast<int>(m.rows());
    const double floor = 1e-300;
    u = u.cwiseMax(1e-16 * (u.cwiseAbs().maxCoeff() + 1.0));

    // Phase 1: explicit marching of the monotone flow. The step size tracks
    // the stiffest local rate so the iteration stays stable.
    const int max_march = 400000;
    int calm = 0;
    for (int it = 0; it < max_march; ++it) {
        const Vector f = rhs(m, a, b, u);
        double rate = 1e-12;
        for (int i = 0; i < n; ++i)
            rate = std::max(rate, std::abs(m(i, i) + a(i) - 2.0 * b(i) * u(i)));
        double dt = 0.5 / rate;
        Vector next = u + dt * f;
        while ((next.array() <= floor).any() && dt > 1e-18 / rate) {
            dt *= 0.5;
            next = u + dt * f;
        }
        const double change = (next - u).lpNorm<Eigen::Infinity>();
        u = next;
        if (change <= 1e-7 * std::max(u.lpNorm<Eigen::Infinity>(), 1e-30)) {
            if (++calm >= 3) break;
        } else {
            calm = 0;
        }
        if (u.lpNorm<Eigen::Infinity>() > 1e12 * (a.cwiseAbs().maxCoeff() + 1.0) / b.minCoeff())
            throw Error(ErrorCode::NoConvergence, "logistic marching diverged");
    }

    // Phase 2: damped Newton, run until the residual stops improving.
    double best_res = rhs(m, a, b, u).lpNorm<Eigen::Infinity>();
    Vector best_u = u;
    int stalled = 0;
    for (int it = 0; it < 200 && stalled < 4; ++it) {
        const Vector f = rhs(m, a, b, u);
        Matrix jac = m;
        jac.diagonal() += a - 2.0 * b.cwiseProduct(u);
        Eigen::PartialPivLU<Matrix> lu(jac);
        Vector step = lu.solve(-f);
        if (!step.allFinite())
            throw Error(ErrorCode::NoConvergence, "logistic Newton produced non-finite step");
        double damp = 1.0;
        Vector next = u + step;
        while ((next.array() <= 0.0).any() && damp > 1e-12) {
            damp *= 0.5;
            next = u + damp * step;
        }
        if (damp <= 1e-12)
            throw Error(ErrorCode::NoConvergence, "logistic Newton lost positivity");
        u = next;
        const double res = rhs(m, a, b, u).lpNorm<Eigen::Infinity>();
        if (res < 0.5 * best_res) {
            stalled = 0;
        } else {
            ++stalled;
        }
        if (res < best_res) {
            best_res = res;
            best_u = u;
        }
    }
    if (best_res <= target_residual) return best_u;
    throw Error(ErrorCode::NoConvergence, "logistic Newton budget exhausted");
}

} // namespace sispatch
