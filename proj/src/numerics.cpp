#include "skewgain/numerics.hpp"

#include <cmath>
#include <string>

#include "skewgain/errors.hpp"

namespace skewgain {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(op) + ": dimension " + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix must be square and non-empty, got " + std::to_string(m_.rows()) + "x" +
                    std::to_string(m_.cols()));
  }
}

ComplexMatrix ComplexMatrix::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return ComplexMatrix(Eigen::MatrixXcd::Zero(n, n));
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return ComplexMatrix(Eigen::MatrixXcd::Identity(n, n));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> entries) {
  ComplexVector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  return diagonal(v);
}

ComplexMatrix ComplexMatrix::diagonal(const ComplexVector& entries) {
  return ComplexMatrix(Eigen::MatrixXcd(entries.asDiagonal()));
}

ComplexMatrix ComplexMatrix::outer(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "outer: vector lengths differ");
  }
  return ComplexMatrix(a * b.adjoint());
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  require_same_dim(*this, rhs, "add");
  return ComplexMatrix(m_ + rhs.m_);
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
  require_same_dim(*this, rhs, "subtract");
  return ComplexMatrix(m_ - rhs.m_);
}

ComplexMatrix ComplexMatrix::operator*(Complex s) const { return ComplexMatrix(m_ * s); }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "matmul");
  return ComplexMatrix(a.eigen() * b.eigen());
}

ComplexMatrix dagger(const ComplexMatrix& m) { return ComplexMatrix(m.eigen().adjoint()); }

Complex trace(const ComplexMatrix& m) { return m.eigen().trace(); }

double frobenius_norm(const ComplexMatrix& m) { return m.eigen().norm(); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return ComplexMatrix(a.eigen() * b.eigen() - b.eigen() * a.eigen());
}

double hermiticity_defect(const ComplexMatrix& m) {
  return (m.eigen() - m.eigen().adjoint()).norm();
}

HermitianEigenResult hermitian_eigh(const ComplexMatrix& m, const ToleranceConfig& tol) {
  const double defect = hermiticity_defect(m);
  if (defect > ToleranceConfig::scaled(tol.validation, frobenius_norm(m))) {
    throw Error(ErrorKind::NotHermitian,
                "matrix is not Hermitian (||M - M^dagger||_F = " + std::to_string(defect) + ")",
                defect);
  }
  const Eigen::MatrixXcd sym = 0.5 * (m.eigen() + m.eigen().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalInstability, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), ComplexMatrix(solver.eigenvectors())};
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m, const ToleranceConfig& tol) {
  const auto eig = hermitian_eigh(m, tol);
  const double scale = eig.eigenvalues.cwiseAbs().maxCoeff();
  const double negative_limit = -ToleranceConfig::scaled(tol.validation, scale);
  const double noise = tol.spectral_floor * scale;
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double w = eig.eigenvalues(i);
    if (w < negative_limit) {
      throw Error(ErrorKind::NotPositiveSemidefinite,
                  "matrix has eigenvalue " + std::to_string(w) + " below zero", w);
    }
    // The square root would turn rounding noise of order eps into errors of order sqrt(eps).
    roots(i) = w > noise ? std::sqrt(w) : 0.0;
  }
  const auto& v = eig.eigenvectors.eigen();
  return ComplexMatrix(v * roots.cast<Complex>().asDiagonal() * v.adjoint());
}

}  // namespace skewgain
