#include "sispatch/model.hpp"

#include <cmath>

namespace sispatch {

namespace {

void check_positive(const Vector& v, const char* name) {
    if ((v.array() <= 0.0).any())
        throw Error(ErrorCode::NonPositiveParameter, std::string(name) + " must be strictly positive");
}

Matrix v_matrix(const Model& m) {
    return Matrix(m.gamma.asDiagonal()) - m.dI * m.L();
}

// V^-1 by LU solves against the identity; V is a nonsingular M-matrix for
// any valid model, so a singular factorization signals numerical failure.
Matrix v_inverse(const Matrix& v) {
    Eigen::FullPivLU<Matrix> lu(v);
    if (!lu.isInvertible())
        throw Error(ErrorCode::SingularV, "V = diag(gamma) - dI*L is numerically singular");
    return lu.solve(Matrix::Identity(v.rows(), v.cols()));
}

} // namespace

Model build_model(const ConnectivityMatrix& conn, const Vector& beta, const Vector& gamma,
                  double dS, double dI, double N) {
    if (beta.size() != conn.n || gamma.size() != conn.n)
        throw Error(ErrorCode::DimensionMismatch, "beta/gamma length must equal patch count");
    check_positive(beta, "beta");
    check_positive(gamma, "gamma");
    if (!(dS > 0.0) || !(dI > 0.0) || !(N > 0.0))
        throw Error(ErrorCode::NonPositiveParameter, "dS, dI, N must be strictly positive");

    Model m;
    m.conn = conn;
    m.beta = beta;
    m.gamma = gamma;
    m.dS = dS;
    m.dI = dI;
    m.N = N;
    m.r = gamma.cwiseQuotient(beta);
    return m;
}

Model build_model(const Matrix& conn_raw, const Vector& beta, const Vector& gamma,
                  double dS, double dI, double N) {
    return build_model(validate_connectivity(conn_raw), beta, gamma, dS, dI, N);
}

double basic_reproduction_number(const Model& m) {
    const Matrix v = v_matrix(m);
    const Vector f = m.N * m.alpha().cwiseProduct(m.beta);
    Matrix fvinv = f.asDiagonal() * v_inverse(v);
    fvinv = fvinv.cwiseMax(0.0); // clip roundoff negatives of the M-matrix inverse
    return spectral_radius(fvinv);
}

ReproductionAnalysis reproduction_analysis(const Model& m) {
    ReproductionAnalysis out;
    const Vector f = m.N * m.alpha().cwiseProduct(m.beta);
    out.F = f.asDiagonal();
    out.V = v_matrix(m);
    out.r0 = basic_reproduction_number(m);
    out.sigma_star = spectral_bound(m.dI * m.L() + Matrix((f - m.gamma).asDiagonal()), true);
    out.limit_dI_zero = (f.cwiseQuotient(m.gamma)).maxCoeff();
    out.limit_dI_inf = (m.N * m.alpha().array().square() * m.beta.array()).sum()
                       / (m.alpha().cwiseProduct(m.gamma)).sum();
    return out;
}

DfeClassification classify_dfe_global_stability(const Model& m) {
    DfeClassification c;
    const double r0 = basic_reproduction_number(m);
    const Matrix vinv = v_inverse(v_matrix(m)).cwiseMax(0.0);
    c.rho_beta_vinv = spectral_radius(Matrix(m.beta.asDiagonal()) * vinv);
    c.cond_i = m.N * c.rho_beta_vinv <= 1.0 + kR0DeadBand;
    c.cond_ii_possible = r0 < 1.0 - kR0DeadBand;

    const bool r0_le_1 = r0 <= 1.0 + kR0DeadBand;
    c.cond_iii = r0_le_1 && m.dS == m.dI;

    const Vector ratio = m.gamma.cwiseQuotient(m.beta.cwiseProduct(m.alpha()));
    const double spread = (ratio.maxCoeff() - ratio.minCoeff()) / ratio.minCoeff();
    if (r0_le_1 && spread <= 1e-9) {
        c.cond_iv = true;
        c.cond_iv_m = ratio.mean();
    }
    return c;
}

EeNonexistenceCheck ee_nonexistence_check(const Model& m) {
    EeNonexistenceCheck c;
    const double r0 = basic_reproduction_number(m);
    const bool r0_le_1 = r0 <= 1.0 + kR0DeadBand;
    c.cond_i = r0_le_1 && m.dS >= m.dI * r0;
    c.cond_ii = m.N <= m.r.cwiseQuotient(m.alpha()).minCoeff();
    return c;
}

} // namespace sispatch
