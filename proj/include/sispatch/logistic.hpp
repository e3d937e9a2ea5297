#ifndef SISPATCH_LOGISTIC_HPP
#define SISPATCH_LOGISTIC_HPP

#include "sispatch/linalg.hpp"

namespace sispatch {

/// Positive steady state of the cooperative logistic system
///   U' = M U + (a - b o U) o U,
/// with M quasi-positive and b >> 0, found by time marching from the given
/// positive initial guess followed by damped Newton polishing.
///
/// Existence must be established by the caller (sign of sigma_*(M + diag(a))).
/// target_residual is the infinity-norm bound demanded of M U + (a - b o U) o U.
Vector solve_cooperative_logistic(const Matrix& m, const Vector& a, const Vector& b,
                                  Vector guess, double target_residual);

} // namespace sispatch

#endif
