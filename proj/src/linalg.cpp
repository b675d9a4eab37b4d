#include "lpq/linalg.hpp"

#include "lpq/error.hpp"

#include <algorithm>
#include <cmath>

namespace lpq {

bool is_symmetric(const Matrix& m, double rel_tol)
{
    if (m.rows() != m.cols())
        return false;
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    return ((m - m.transpose()).cwiseAbs().maxCoeff()) <= rel_tol * scale;
}

SymmetricSpectrum symmetric_eigen(const Matrix& m)
{
    if (!is_symmetric(m))
        throw InvalidArgument("matrix is not symmetric");
    const Matrix sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symmetric eigendecomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

Vector clamped_eigenvalues(const SymmetricSpectrum& s, double trace)
{
    const double floor = kSingularFloor * std::max(trace, 0.0);
    return s.eigenvalues.unaryExpr([floor](double v) { return std::max(v, floor); });
}

Matrix spectral_power(const Matrix& m, double power)
{
    const SymmetricSpectrum s = symmetric_eigen(m);
    const double trace = m.trace();
    if (!(trace > 0.0))
        throw SingularMatrixError("matrix power requires a positive trace");
    const Vector ev = clamped_eigenvalues(s, trace).unaryExpr([power](double v) { return std::pow(v, power); });
    return s.eigenvectors * ev.asDiagonal() * s.eigenvectors.transpose();
}

} // namespace

double spd_determinant(const Matrix& m)
{
    const SymmetricSpectrum s = symmetric_eigen(m);
    const double trace = m.trace();
    if (!(trace > 0.0) || s.eigenvalues.minCoeff() < kSingularFloor * trace)
        throw SingularMatrixError("covariance is singular (eigenvalue below 1e-14 * trace)");
    double det = 1.0;
    for (double v : s.eigenvalues)
        det *= v;
    if (det < 1e-300)
        throw SingularMatrixError("covariance determinant below 1e-300");
    return det;
}

Matrix spd_sqrt(const Matrix& m) { return spectral_power(m, 0.5); }

Matrix spd_inv_sqrt(const Matrix& m) { return spectral_power(m, -0.5); }

double determinant_error(const Matrix& m, const Matrix& entry_errors)
{
    // d det = det * tr(m^{-1} dm)
    const double det = m.determinant();
    const Matrix inv = m.inverse();
    return std::fabs(det) * (inv.cwiseAbs().cwiseProduct(entry_errors.cwiseAbs())).sum();
}

} // namespace lpq
