#ifndef SISPATCH_DYNAMICS_HPP
#define SISPATCH_DYNAMICS_HPP

#include <vector>

#include "sispatch/equilibrium.hpp"
#include "sispatch/model.hpp"

namespace sispatch {

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> S;
    std::vector<Vector> I;
    long accepted_steps = 0;
    long rejected_steps = 0;
    double max_conservation_drift = 0.0;
};

struct SimulateOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    int output_samples = 200; ///< fixed output cadence, decoupled from internal steps
};

/// Adaptive Dormand-Prince 5(4) integration of the 2n-dimensional system.
/// Steps producing a negative component are rejected and halved.
Trajectory simulate(const Model& m, const Vector& S0, const Vector& I0, double horizon,
                    const SimulateOptions& opts = {});

struct ConvergenceReport {
    bool converged = false;
    double max_residual = 0.0; ///< largest inf-norm distance over the window
};

/// Distance of the last `window` stored states to the target equilibrium.
ConvergenceReport detect_convergence(const Trajectory& traj, const EquilibriumSolution& target,
                                     int window, double tol);

/// Post-burn-in floor of min_j I_j(t); estimates the persistence constant.
double persistence_floor(const Trajectory& traj, double burn_in_fraction);

/// Integrates X' = d L X to time T and returns ||X(T) - (sum X0) alpha||_1.
double drift_projection_check(const ConnectivityMatrix& conn, double d, const Vector& X0, double T);

} // namespace sispatch

#endif
