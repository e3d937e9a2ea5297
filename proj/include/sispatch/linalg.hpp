#ifndef SISPATCH_LINALG_HPP
#define SISPATCH_LINALG_HPP

#include <Eigen/Dense>

#include "sispatch/errors.hpp"

namespace sispatch {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Quasi-positive irreducible movement matrix with zero column sums and its
/// Perron vector alpha (L*alpha = 0, sum(alpha) = 1, alpha >> 0).
struct ConnectivityMatrix {
    int n = 0;
    Matrix entries;
    Vector alpha;
};

// Residual tolerances used throughout the spectral routines.
inline constexpr double kColumnSumTolAbs = 1e-12;
inline constexpr double kEigenResidualTolRel = 1e-10;

/// Builds a ConnectivityMatrix from off-diagonal movement degrees.
/// The supplied diagonal is ignored and recomputed so columns sum to zero.
ConnectivityMatrix validate_connectivity(const Matrix& off_diagonal_entries);

/// Strong connectivity of the digraph {j -> i : M(i,j) > 0, i != j}.
bool is_irreducible(const Matrix& m);

/// Perron root of an entrywise nonnegative matrix, by power iteration.
double spectral_radius(const Matrix& m);

/// Max real part of the spectrum. With quasi_positive set, computed as the
/// Perron root of the shifted nonnegative matrix M + sI minus s, which is
/// exact for quasi-positive irreducible M; otherwise a dense eigensolve.
double spectral_bound(const Matrix& m, bool quasi_positive = false);

/// Positive right null vector of a zero-column-sum quasi-positive irreducible
/// matrix, normalized to sum 1.
Vector perron_vector(const Matrix& l);

} // namespace sispatch

#endif
