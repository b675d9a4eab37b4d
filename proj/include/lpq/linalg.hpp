#pragma once

#include <Eigen/Dense>

namespace lpq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative eigenvalue floor (times the trace) below which a covariance is treated as singular.
inline constexpr double kSingularFloor = 1e-14;

bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

/// Eigen-decomposition of a symmetric matrix. Throws InvalidArgument when m is not symmetric.
struct SymmetricSpectrum {
    Vector eigenvalues;  // ascending
    Matrix eigenvectors; // columns
};
SymmetricSpectrum symmetric_eigen(const Matrix& m);

/// det(m) as the product of eigenvalues. Throws SingularMatrixError when the
/// smallest eigenvalue is below kSingularFloor * trace or the determinant below 1e-300.
double spd_determinant(const Matrix& m);

/// m^{1/2} and m^{-1/2} for symmetric positive definite m; eigenvalues are
/// clamped at kSingularFloor * trace before the power is taken.
Matrix spd_sqrt(const Matrix& m);
Matrix spd_inv_sqrt(const Matrix& m);

/// First-order absolute error of det(m) given per-entry absolute errors.
double determinant_error(const Matrix& m, const Matrix& entry_errors);

} // namespace lpq
