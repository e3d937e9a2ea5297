#include "sispatch/linalg.hpp"

#include <cmath>
#include <vector>

namespace sispatch {

namespace {

// Reachability of every node from node 0 in the digraph of positive entries.
bool all_reachable(const Matrix& m, bool transpose) {
    const int n = static_cast<int>(m.rows());
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int j = stack.back();
        stack.pop_back();
        for (int i = 0; i < n; ++i) {
            if (i == j || seen[i]) continue;
            const double w = transpose ? m(j, i) : m(i, j);
            if (w > 0.0) {
                seen[i] = 1;
                ++count;
                stack.push_back(i);
            }
        }
    }
    return count == n;
}

// Power iteration on a nonnegative matrix. Returns the Perron root and
// leaves the (normalized) iterate in x. Convergence: relative change of the
// eigenvalue estimate below tol over three consecutive iterates.
double power_iteration(const Matrix& a, Vector& x, double tol, int max_iter) {
    const int n = static_cast<int>(a.rows());
    if (x.size() != n) x = Vector::Ones(n);
    x /= x.sum();
    double lambda = 0.0;
    int stable = 0;
    for (int it = 0; it < max_iter; ++it) {
        Vector y = a * x;
        const double norm = y.lpNorm<1>();
        if (norm == 0.0) return 0.0; // nilpotent direction, Perron root 0
        const double lambda_new = x.dot(y) / x.dot(x);
        y /= norm;
        const double denom = std::max(std::abs(lambda_new), 1e-300);
        if (std::abs(lambda_new - lambda) <= tol * denom) {
            if (++stable >= 3) {
                x = y;
                return lambda_new;
            }
        } else {
            stable = 0;
        }
        lambda = lambda_new;
        x = y;
    }
    throw Error(ErrorCode::NoConvergence, "power iteration budget exhausted");
}

} // namespace

bool is_irreducible(const Matrix& m) {
    return all_reachable(m, false) && all_reachable(m, true);
}

double spectral_radius(const Matrix& m) {
    if (m.rows() != m.cols())
        throw Error(ErrorCode::DimensionMismatch, "spectral_radius needs a square matrix");
    if ((m.array() < 0.0).any())
        throw Error(ErrorCode::NegativeEntry, "spectral_radius needs a nonnegative matrix");
    // Shift keeps the iteration away from modulus ties (e.g. permutation
    // matrices); for nonnegative M, rho(M + sI) = rho(M) + s.
    const double s = 1.0 + m.diagonal().cwiseAbs().maxCoeff();
    Vector x;
    const double lambda = power_iteration(m + s * Matrix::Identity(m.rows(), m.cols()), x, 1e-12, 100000);
    return std::max(lambda - s, 0.0);
}

double spectral_bound(const Matrix& m, bool quasi_positive) {
    if (m.rows() != m.cols())
        throw Error(ErrorCode::DimensionMismatch, "spectral_bound needs a square matrix");
    if (quasi_positive) {
        const double s = 1.0 + m.diagonal().cwiseAbs().maxCoeff();
        Matrix shifted = m + s * Matrix::Identity(m.rows(), m.cols());
        if ((shifted.array() < 0.0).any())
            throw Error(ErrorCode::NegativeEntry, "matrix is not quasi-positive");
        Vector x;
        return power_iteration(shifted, x, 1e-12, 100000) - s;
    }
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw Error(ErrorCode::NoConvergence, "dense eigensolve failed");
    return es.eigenvalues().real().maxCoeff();
}

Vector perron_vector(const Matrix& l) {
    const int n = static_cast<int>(l.rows());
    if (l.cols() != n || n < 2)
        throw Error(ErrorCode::DimensionMismatch, "perron_vector needs a square matrix, n >= 2");
    if (!is_irreducible(l))
        throw Error(ErrorCode::NotIrreducible, "support digraph is not strongly connected");
    // With zero column sums, sigma_*(L) = 0 and the Perron vector of the
    // shifted matrix L + sI is the right null vector of L.
    const double s = 1.0 + l.diagonal().cwiseAbs().maxCoeff();
    Vector x;
    power_iteration(l + s * Matrix::Identity(n, n), x, 1e-13, 200000);
    x /= x.sum();
    const double lnorm = l.cwiseAbs().rowwise().sum().maxCoeff();
    if ((l * x).lpNorm<Eigen::Infinity>() > kEigenResidualTolRel * lnorm)
        throw Error(ErrorCode::NoConvergence, "Perron vector residual too large");
    return x;
}

ConnectivityMatrix validate_connectivity(const Matrix& off_diagonal_entries) {
    const int n = static_cast<int>(off_diagonal_entries.rows());
    if (off_diagonal_entries.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "connectivity matrix must be square");
    if (n < 2)
        throw Error(ErrorCode::DimensionMismatch, "patch count must be at least 2");

    Matrix l = off_diagonal_entries;
    for (int j = 0; j < n; ++j) {
        double out = 0.0;
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            if (l(i, j) < 0.0)
                throw Error(ErrorCode::NegativeOffDiagonal, "off-diagonal movement degree must be >= 0");
            out += l(i, j);
        }
        l(j, j) = -out;
    }
    if (!is_irreducible(l))
        throw Error(ErrorCode::NotIrreducible, "support digraph is not strongly connected");

    ConnectivityMatrix conn;
    conn.n = n;
    conn.entries = l;
    conn.alpha = perron_vector(l);

    for (int j = 0; j < n; ++j) {
        if (std::abs(conn.entries.col(j).sum()) > kColumnSumTolAbs)
            throw Error(ErrorCode::NoConvergence, "column sums failed to cancel");
    }
    return conn;
}

} // namespace sispatch
