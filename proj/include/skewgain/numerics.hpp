#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "skewgain/tolerance.hpp"

namespace skewgain {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Dense square complex matrix, d >= 1. Dense storage is intended for d <= 64.
class ComplexMatrix {
 public:
  /// Throws Error{DimensionMismatch} unless `m` is square and non-empty.
  explicit ComplexMatrix(Eigen::MatrixXcd m);

  static ComplexMatrix zero(std::size_t dim);
  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> entries);
  static ComplexMatrix diagonal(const ComplexVector& entries);
  /// |a><b|
  static ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  Complex operator()(std::size_t row, std::size_t col) const {
    return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  const Eigen::MatrixXcd& eigen() const noexcept { return m_; }

  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix operator*(Complex s) const;

 private:
  Eigen::MatrixXcd m_;
};

struct HermitianEigenResult {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors; // unitary, columns are eigenvectors
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& m);
Complex trace(const ComplexMatrix& m);
double frobenius_norm(const ComplexMatrix& m);
/// AB - BA
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// ||M - M^dagger||_F, the quantity the hermiticity checks compare against.
double hermiticity_defect(const ComplexMatrix& m);

/// Throws Error{NotHermitian} if ||M - M^dagger||_F > tol.validation * max(1, ||M||_F).
/// The solver runs on the symmetrized matrix (M + M^dagger)/2.
HermitianEigenResult hermitian_eigh(const ComplexMatrix& m, const ToleranceConfig& tol = {});

/// Principal square root of a Hermitian PSD matrix. Eigenvalues at or below
/// tol.spectral_floor * max|w| (including the tolerated negatives down to
/// -tol.validation) are set to zero; anything more negative throws
/// Error{NotPositiveSemidefinite}.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, const ToleranceConfig& tol = {});

}  // namespace skewgain
