#ifndef SISPATCH_EQUILIBRIA_HPP
#define SISPATCH_EQUILIBRIA_HPP

#include <optional>
#include <vector>

#include "sispatch/equilibrium.hpp"
#include "sispatch/model.hpp"

namespace sispatch {

/// Positive solution U^l of the scalar-reduction family at parameter l,
/// together with Z^l = l(N alpha - dI U^l) and the achieved residual.
struct FamilySolution {
    double l = 0.0;
    Vector U;
    Vector Z;
    double residual = 0.0;
};

struct StabilityReport {
    Stability tag = Stability::Unknown;
    double sigma_star = 0.0; ///< spectral bound on the mass-conserving hyperplane
};

struct SweepPoint {
    double dS = 0.0;
    std::vector<EquilibriumSolution> equilibria;
};

/// Per-grid-point equilibrium branches of a dS sweep, with threshold estimates
/// d1_hat (largest dS carrying >= 2 EE) and d2_hat (largest dS carrying >= 1 EE).
struct SweepResult {
    std::vector<SweepPoint> points;
    std::optional<double> d1_hat;
    std::optional<double> d2_hat;
};

struct FindRootsOptions {
    int scan_points = 400;      ///< log-spaced scan resolution in l
    double l_cap = 0.0;         ///< initial cap for the scan (0 = automatic)
    double merge_tol_rel = 1e-8;
    double bisect_tol_rel = 1e-12;
};

/// The disease-free equilibrium (N alpha, 0).
EquilibriumSolution dfe(const Model& m);

/// Unique positive solution of the family at l, or nullopt when l <= 1/R0
/// (exact criterion: sigma_*(dI L + diag(l N alpha o beta - gamma)) <= 0).
std::optional<FamilySolution> solve_family(const Model& m, double l);

/// N(l) = l * sum_j (N alpha_j - dI U_j^l) = sum_j Z_j^l.
double capital_N(const Model& m, double l);

/// F(dS, l) = N(l) + dS * l * sum_j U_j^l; strictly increasing in dS.
double balance_F(const Model& m, double dS, double l);

/// Assembles the EE (l(N alpha - dI U^l), dS l U^l) at a root of F(dS,l) = N.
EquilibriumSolution ee_from_l(const Model& m, double l);

/// All endemic equilibria: roots of F(dS, l) = N over l in (1/R0, l_cap],
/// sorted by l. Stability tags are attached.
std::vector<EquilibriumSolution> find_endemic_equilibria(const Model& m,
                                                         const FindRootsOptions& opts = {});

/// Spectral bound of the equilibrium Jacobian restricted to the invariant
/// hyperplane sum(S+I) = N, with the resulting stability tag.
StabilityReport jacobian_stability(const Model& m, const EquilibriumSolution& eq);

/// K(l) = l * sum_j dU_j/dl + sum_j U_j via the linearized family system.
double sensitivity_K(const Model& m, double l);

/// Central finite-difference cross-check of sensitivity_K.
double sensitivity_K_fd(const Model& m, double l);

/// Estimate m_hat = N / (dI * sup_l K(l)) over a log grid of l; exactly 1
/// when gamma is a multiple of beta o alpha.
double uniqueness_margin(const Model& m);

/// find_endemic_equilibria across a strictly increasing dS grid, with the
/// threshold estimates refined by bisection to relative 1e-4.
SweepResult bifurcation_sweep_dS(const Model& m, const std::vector<double>& grid,
                                 const FindRootsOptions& opts = {});

/// The unique EE (N alpha - I0, I0) when dS = dI and R0 > 1 (I0 = dI * U^1).
EquilibriumSolution special_ee_equal_dispersal(const Model& m);

/// Infinity norm of the steady-state residual of the full model at (S, I).
double steady_state_residual(const Model& m, const Vector& S, const Vector& I);

} // namespace sispatch

#endif
