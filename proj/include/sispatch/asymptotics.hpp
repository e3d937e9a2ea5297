#ifndef SISPATCH_ASYMPTOTICS_HPP
#define SISPATCH_ASYMPTOTICS_HPP

#include <optional>
#include <vector>

#include "sispatch/model.hpp"

namespace sispatch {

/// Most-at-risk patches: indices where r_i / alpha_i attains its minimum
/// within relative tolerance 1e-9.
std::vector<int> omega_star(const Model& m);

/// Smallest per-patch risk ratio (r / alpha)_m.
double min_risk_ratio(const Model& m);

enum class DsZeroCase {
    BelowTotalRisk, ///< N < sum_j r_j: infection dies out in the limit
    AtTotalRisk,    ///< N = sum_j r_j: two admissible susceptible limits
    AboveTotalRisk, ///< N > sum_j r_j: limit (r, (N - sum r) alpha)
};

/// Endemic-equilibrium limit as dS -> 0 with dI fixed.
struct DsZeroProfile {
    DsZeroCase branch = DsZeroCase::AboveTotalRisk;
    Vector S_limit;
    Vector I_limit;
    /// Second admissible S-limit in the boundary case N = sum r (the other is r).
    std::optional<Vector> S_limit_alt;
    /// Reduced-system solution backing the subcritical S-limit.
    std::optional<Vector> I_bar;
};

DsZeroProfile profile_dS_to_zero(const Model& m);

/// Nonnegative solution of the reduced infected system
///   dI (L Ibar)_i + beta_i (alpha_i N - r_i + dI alpha_i sum(Ibar) - dI Ibar_i) Ibar_i = 0,
/// obtained by time-marching from alpha-proportional data (Ibar0 = N alpha)
/// and Newton polishing. The zero vector is a valid outcome.
Vector solve_barI(const Model& m);

/// Endemic-equilibrium limit as dI -> 0 with dS fixed: susceptibles flatten to
/// the minimal risk ratio and infecteds concentrate on the most-at-risk patches.
struct DiZeroProfile {
    std::vector<int> omega;  ///< most-at-risk patch indices
    Vector S_limit;          ///< (r/alpha)_m * alpha
    double I_total = 0.0;    ///< N - (r/alpha)_m
    Vector I_star;           ///< |omega|-vector, limits of I on omega
    double C_star = 0.0;     ///< effective carrying-capacity scale
    double bracket_lo = 0.0; ///< analytic lower bound on C_star
    double bracket_hi = 0.0; ///< analytic upper bound on C_star
};

DiZeroProfile profile_dI_to_zero(const Model& m);

/// Joint limit dI -> 0 with dI/dS -> sigma.
struct SigmaProfile {
    double sigma = 0.0;
    double l_sigma = 0.0; ///< root of N = sum_j [min{l N a_j, r_j} + (l N a_j - r_j)_+ / sigma]
    Vector S_limit;       ///< S_i = min{l N alpha_i, r_i}
    Vector I_limit;       ///< I_i = (l N alpha_i - r_i)_+ / sigma
};

SigmaProfile sigma_profile(const Model& m, double sigma);

/// Root of N = sum_j min{l N alpha_j, r_j}; exists only when N < sum_j r_j.
double sigma_inf_l_root(const Model& m);

/// Closed-form endpoints of the sigma-profile as sigma -> 0 and sigma -> inf.
struct SigmaSublimits {
    Vector S_sigma_zero; ///< (r/alpha)_m alpha
    Vector I_sigma_zero; ///< concentrated on the most-at-risk patches
    int inf_case = 0;    ///< 1: N < sum r, 2: N = sum r, 3: N > sum r
    double l_inf = 0.0;  ///< finite limit of l^sigma in cases 1-2, +inf in case 3
    Vector S_inf;
    Vector I_inf;
};

SigmaSublimits sigma_sublimits(const Model& m);

/// Estimate of the critical total population above which the dS -> 0 limit is
/// (r, (N - sum r) alpha) along every sequence.
struct CriticalNEstimate {
    double estimate = 0.0;
    double bracket_lo = 0.0;   ///< max{sum_j r_j, R_*}
    double bracket_hi = 0.0;   ///< (r/alpha)_M, strict upper bound
    double lambda_at_max = 0.0; ///< effective parameter achieving the max (0 if at a boundary limit)
    bool interior_max = false; ///< whether the grid search beat both boundary limits
};

CriticalNEstimate critical_N_estimate(const Model& m);

} // namespace sispatch

#endif
