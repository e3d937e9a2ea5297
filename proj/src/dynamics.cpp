#include "sispatch/dynamics.hpp"

#include <cmath>
#include <functional>

namespace sispatch {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// Embedded 4th-order weights (error = b - bhat).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

using Rhs = std::function<Vector(const Vector&)>;

// Integrates y' = f(y) from t=0 to `horizon`, storing samples at the output
// times via exact stepping onto them. on_state is called for every accepted
// state (including interior steps) so callers can track invariants.
struct Integrator {
    Rhs f;
    double rel_tol;
    double abs_tol;
    long accepted = 0;
    long rejected = 0;

    // positivity guard: reject any step with a negative component
    bool enforce_nonneg = true;

    void run(Vector y, double horizon, const std::vector<double>& output_times,
             const std::function<void(double, const Vector&)>& emit) {
        double t = 0.0;
        size_t next_out = 0;
        Vector k1 = f(y);
        double h = initial_step(y, k1, horizon);
        const double h_min = 1e-14 * horizon;

        if (!output_times.empty() && output_times[0] == 0.0) {
            emit(0.0, y);
            ++next_out;
        }

        while (t < horizon) {
            // underflow means the controller collapsed, not that the remaining
            // interval or the gap to an output time happens to be tiny
            if (h < h_min) throw Error(ErrorCode::StepUnderflow, "step size underflow");
            bool hit_output = false;
            double h_eff = std::min(h, horizon - t);
            if (next_out < output_times.size() && t + h_eff >= output_times[next_out] - 1e-15 * horizon) {
                h_eff = output_times[next_out] - t;
                hit_output = true;
            }
            if (h_eff <= 0.0) { // fell exactly on the boundary in floating point
                t = hit_output ? output_times[next_out] : horizon;
                if (hit_output && next_out < output_times.size()) {
                    emit(t, y);
                    ++next_out;
                }
                continue;
            }

            Vector k2 = f(y + h_eff * (a21 * k1));
            Vector k3 = f(y + h_eff * (a31 * k1 + a32 * k2));
            Vector k4 = f(y + h_eff * (a41 * k1 + a42 * k2 + a43 * k3));
            Vector k5 = f(y + h_eff * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            Vector k6 = f(y + h_eff * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            Vector ynew = y + h_eff * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            Vector k7 = f(ynew);
            Vector err = h_eff * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double err_norm = 0.0;
            for (int i = 0; i < y.size(); ++i) {
                const double sc = abs_tol + rel_tol * std::max(std::abs(y(i)), std::abs(ynew(i)));
                err_norm = std::max(err_norm, std::abs(err(i)) / sc);
            }

            const bool went_negative = enforce_nonneg && (ynew.array() < 0.0).any();
            if (err_norm <= 1.0 && !went_negative) {
                t += h_eff;
                y = ynew;
                k1 = k7;
                ++accepted;
                if (hit_output && next_out < output_times.size()) {
                    emit(t, y);
                    ++next_out;
                }
                const double fac = 0.9 * std::pow(std::max(err_norm, 1e-10), -0.2);
                h = h_eff * std::min(5.0, std::max(0.2, fac));
            } else {
                ++rejected;
                if (went_negative)
                    h = 0.5 * h_eff;
                else
                    h = h_eff * std::max(0.1, 0.9 * std::pow(err_norm, -0.2));
            }
        }
    }

    double initial_step(const Vector& y, const Vector& dy, double horizon) const {
        const double rate = dy.lpNorm<Eigen::Infinity>() / (1.0 + y.lpNorm<Eigen::Infinity>());
        const double guess = rate > 0 ? 0.01 / rate : horizon * 1e-3;
        // keep the first trial well above the underflow floor; the controller
        // shrinks it if the error estimate demands so
        return std::min(std::max(guess, 1e-10 * horizon), 1e-3 * horizon);
    }
};

} // namespace

Trajectory simulate(const Model& m, const Vector& S0, const Vector& I0, double horizon,
                    const SimulateOptions& opts) {
    const int n = m.n();
    if (S0.size() != n || I0.size() != n)
        throw Error(ErrorCode::DimensionMismatch, "initial data length must equal patch count");
    if ((S0.array() < 0.0).any() || (I0.array() < 0.0).any())
        throw Error(ErrorCode::InvalidInitialData, "initial data must be nonnegative");
    if (std::abs(S0.sum() + I0.sum() - m.N) > 1e-9 * m.N)
        throw Error(ErrorCode::InvalidInitialData, "initial data must sum to the total population N");
    if (!(horizon > 0.0))
        throw Error(ErrorCode::InvalidInitialData, "horizon must be positive");

    Vector y0(2 * n);
    y0 << S0, I0;

    Integrator ode;
    ode.rel_tol = opts.rel_tol;
    ode.abs_tol = opts.abs_tol;
    ode.f = [&](const Vector& y) {
        const auto S = y.head(n);
        const auto I = y.tail(n);
        const Vector infections = m.beta.cwiseProduct(S).cwiseProduct(I);
        const Vector recoveries = m.gamma.cwiseProduct(I);
        Vector dy(2 * n);
        dy.head(n) = m.dS * (m.L() * S) - infections + recoveries;
        dy.tail(n) = m.dI * (m.L() * I) + infections - recoveries;
        return dy;
    };

    const int samples = std::max(opts.output_samples, 2);
    std::vector<double> out_times(samples);
    for (int k = 0; k < samples; ++k)
        out_times[k] = horizon * k / (samples - 1);

    Trajectory traj;
    ode.run(y0, horizon, out_times, [&](double t, const Vector& y) {
        traj.times.push_back(t);
        traj.S.push_back(y.head(n));
        traj.I.push_back(y.tail(n));
        traj.max_conservation_drift =
            std::max(traj.max_conservation_drift, std::abs(y.sum() - m.N));
    });
    traj.accepted_steps = ode.accepted;
    traj.rejected_steps = ode.rejected;
    return traj;
}

ConvergenceReport detect_convergence(const Trajectory& traj, const EquilibriumSolution& target,
                                     int window, double tol) {
    ConvergenceReport rep;
    const size_t count = traj.times.size();
    if (count == 0) return rep;
    const size_t w = std::min<size_t>(std::max(window, 1), count);
    rep.converged = true;
    for (size_t k = count - w; k < count; ++k) {
        const double dist = std::max((traj.S[k] - target.S).lpNorm<Eigen::Infinity>(),
                                     (traj.I[k] - target.I).lpNorm<Eigen::Infinity>());
        rep.max_residual = std::max(rep.max_residual, dist);
        if (dist > tol) rep.converged = false;
    }
    return rep;
}

double persistence_floor(const Trajectory& traj, double burn_in_fraction) {
    if (traj.times.empty()) return 0.0;
    const double t_burn = traj.times.back() * burn_in_fraction;
    double floor = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < traj.times.size(); ++k) {
        if (traj.times[k] < t_burn) continue;
        floor = std::min(floor, traj.I[k].minCoeff());
    }
    return std::isfinite(floor) ? floor : 0.0;
}

double drift_projection_check(const ConnectivityMatrix& conn, double d, const Vector& X0, double T) {
    if (!(d > 0.0))
        throw Error(ErrorCode::NonPositiveParameter, "dispersal rate must be positive");
    Integrator ode;
    ode.rel_tol = 1e-10;
    ode.abs_tol = 1e-12;
    ode.enforce_nonneg = false; // linear drift; X may have any sign
    ode.f = [&](const Vector& x) { return Vector(d * (conn.entries * x)); };
    Vector last = X0;
    ode.run(X0, T, {T}, [&](double, const Vector& x) { last = x; });
    return (last - X0.sum() * conn.alpha).lpNorm<1>();
}

} // namespace sispatch
