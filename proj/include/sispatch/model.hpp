#ifndef SISPATCH_MODEL_HPP
#define SISPATCH_MODEL_HPP

#include <string>
#include <vector>

#include "sispatch/linalg.hpp"

namespace sispatch {

/// Full parameter set of the patch model with derived quantities attached.
struct Model {
    ConnectivityMatrix conn;
    Vector beta;   ///< transmission rates, componentwise positive
    Vector gamma;  ///< recovery rates, componentwise positive
    double dS = 0; ///< susceptible dispersal rate
    double dI = 0; ///< infected dispersal rate
    double N = 0;  ///< conserved total population
    Vector r;      ///< per-patch risk, r_j = gamma_j / beta_j

    int n() const { return conn.n; }
    const Vector& alpha() const { return conn.alpha; }
    const Matrix& L() const { return conn.entries; }
};

struct ReproductionAnalysis {
    Matrix F;            ///< diag(N * alpha o beta)
    Matrix V;            ///< diag(gamma) - dI * L
    double r0 = 0;       ///< rho(F V^-1)
    double sigma_star = 0; ///< sigma_*(F - V)
    double limit_dI_zero = 0;
    double limit_dI_inf = 0;
};

/// Which of the sufficient global-stability conditions for the DFE hold.
struct DfeClassification {
    bool cond_i = false;    ///< N * rho(diag(beta) V^-1) <= 1
    bool cond_ii_possible = false; ///< r0 < 1; large-dS regime possible (no computable threshold)
    bool cond_iii = false;  ///< r0 <= 1 and dS = dI
    bool cond_iv = false;   ///< r0 <= 1 and gamma = m * beta o alpha
    double cond_iv_m = 0;   ///< the multiplier m when cond_iv holds
    double rho_beta_vinv = 0;
    bool conclusive() const { return cond_i || cond_iii || cond_iv; }
};

struct EeNonexistenceCheck {
    bool cond_i = false;  ///< r0 <= 1 and dS >= dI * r0
    bool cond_ii = false; ///< N <= min_j(r_j / alpha_j)
    bool no_ee_guaranteed() const { return cond_i || cond_ii; }
};

// Dead-band around r0 = 1 inside which the sign is treated as zero.
inline constexpr double kR0DeadBand = 1e-10;

Model build_model(const Matrix& conn_raw, const Vector& beta, const Vector& gamma,
                  double dS, double dI, double N);

/// Variant taking an already validated connectivity matrix.
Model build_model(const ConnectivityMatrix& conn, const Vector& beta, const Vector& gamma,
                  double dS, double dI, double N);

ReproductionAnalysis reproduction_analysis(const Model& m);

/// Basic reproduction number only (spectral radius of F V^-1).
double basic_reproduction_number(const Model& m);

DfeClassification classify_dfe_global_stability(const Model& m);

EeNonexistenceCheck ee_nonexistence_check(const Model& m);

} // namespace sispatch

#endif
