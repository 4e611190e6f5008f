#include "skewgain/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skewgain/errors.hpp"

namespace skewgain {

namespace {

void require_dims(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(op) + ": dimension " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

double entropy_bits(const RealVector& probabilities) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    const double p = std::max(probabilities(i), 0.0);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return s;
}

}  // namespace

PureState PureState::make(ComplexVector amplitudes, const ToleranceConfig& tol) {
  if (amplitudes.size() == 0) {
    throw Error(ErrorKind::StateValidation, "pure state needs at least one amplitude");
  }
  if (!amplitudes.allFinite()) {
    throw Error(ErrorKind::StateValidation, "pure state has non-finite amplitudes");
  }
  const double norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > tol.validation) {
    throw Error(ErrorKind::StateValidation,
                "pure state is not normalized (sum |a|^2 = " + std::to_string(norm2) + ")",
                norm2 - 1.0);
  }
  return PureState(std::move(amplitudes));
}

PureState PureState::uniform(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return PureState(ComplexVector::Constant(n, Complex(1.0 / std::sqrt(double(dim)), 0.0)));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) {
    throw Error(ErrorKind::DimensionMismatch, "basis index out of range");
  }
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(v));
}

DensityMatrix DensityMatrix::make(ComplexMatrix m, const ToleranceConfig& tol) {
  if (!m.eigen().allFinite()) {
    throw Error(ErrorKind::StateValidation, "density matrix has non-finite entries");
  }
  const double herm = hermiticity_defect(m);
  if (herm > ToleranceConfig::scaled(tol.validation, frobenius_norm(m))) {
    throw Error(ErrorKind::StateValidation,
                "density matrix is not Hermitian (defect " + std::to_string(herm) + ")", herm);
  }
  const Complex tr = trace(m);
  if (std::abs(tr - Complex(1.0, 0.0)) > tol.validation) {
    throw Error(ErrorKind::StateValidation,
                "density matrix trace is " + std::to_string(tr.real()) + ", expected 1",
                tr.real() - 1.0);
  }
  const auto eig = hermitian_eigh(m, tol);
  const double min_eig = eig.eigenvalues.minCoeff();
  if (min_eig < -tol.validation) {
    throw Error(ErrorKind::StateValidation,
                "density matrix has negative eigenvalue " + std::to_string(min_eig), min_eig);
  }
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities,
                                      const ToleranceConfig& tol) {
  if (probabilities.empty()) {
    throw Error(ErrorKind::StateValidation, "density matrix needs at least one entry");
  }
  return make(ComplexMatrix::diagonal(probabilities), tol);
}

DiagonalObservable DiagonalObservable::make(std::vector<double> lambdas, const ToleranceConfig& tol) {
  if (lambdas.empty()) {
    throw Error(ErrorKind::InvalidInput, "observable needs at least one eigenvalue");
  }
  double scale = 0.0;
  for (double l : lambdas) {
    if (!std::isfinite(l)) throw Error(ErrorKind::InvalidInput, "observable has a non-finite eigenvalue");
    scale = std::max(scale, std::abs(l));
  }
  std::vector<double> sorted = lambdas;
  std::sort(sorted.begin(), sorted.end());
  const double gap_floor = ToleranceConfig::scaled(tol.validation, scale);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const double gap = sorted[i] - sorted[i - 1];
    if (gap <= gap_floor) {
      throw Error(ErrorKind::DegenerateObservable,
                  "observable is degenerate (eigenvalue gap " + std::to_string(gap) + ")", gap);
    }
  }
  return DiagonalObservable(std::move(lambdas));
}

double skew_information(const DensityMatrix& rho, const DiagonalObservable& k,
                        const ToleranceConfig& tol) {
  require_dims(rho.dim(), k.dim(), "skew_information");
  const ComplexMatrix root = psd_sqrt(rho.matrix(), tol);
  const ComplexMatrix comm = commutator(root, k.matrix());
  const Complex tr = trace(matmul(comm, comm));
  const double value = -0.5 * tr.real();
  const double residue = 0.5 * std::abs(tr.imag());
  if (residue > ToleranceConfig::scaled(tol.validation, std::abs(value))) {
    throw Error(ErrorKind::NumericalInstability,
                "skew information has imaginary residue " + std::to_string(residue), residue);
  }
  if (value < 0.0) {
    if (value < -ToleranceConfig::scaled(tol.validation, frobenius_norm(comm))) {
      throw Error(ErrorKind::NumericalInstability,
                  "skew information is negative (" + std::to_string(value) + ")", value);
    }
    return 0.0;
  }
  return value;
}

double skew_information_pure(const PureState& psi, const DiagonalObservable& k) {
  require_dims(psi.dim(), k.dim(), "skew_information_pure");
  double mean = 0.0;
  double second = 0.0;
  const auto& a = psi.amplitudes();
  for (std::size_t i = 0; i < k.dim(); ++i) {
    const double p = std::norm(a(static_cast<Eigen::Index>(i)));
    mean += p * k[i];
    second += p * k[i] * k[i];
  }
  return std::max(second - mean * mean, 0.0);
}

double observable_variance(const DensityMatrix& rho, const DiagonalObservable& k) {
  require_dims(rho.dim(), k.dim(), "observable_variance");
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < k.dim(); ++i) {
    const double p = rho.matrix()(i, i).real();
    mean += p * k[i];
    second += p * k[i] * k[i];
  }
  return second - mean * mean;
}

double l1_coherence(const DensityMatrix& rho) {
  const auto& m = rho.matrix().eigen();
  return m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum();
}

double von_neumann_entropy(const DensityMatrix& rho, const ToleranceConfig& tol) {
  return entropy_bits(hermitian_eigh(rho.matrix(), tol).eigenvalues);
}

double relative_entropy_coherence(const DensityMatrix& rho, const ToleranceConfig& tol) {
  const RealVector diag = rho.matrix().eigen().diagonal().real();
  return std::max(entropy_bits(diag) - von_neumann_entropy(rho, tol), 0.0);
}

std::string_view to_string(MeasureKind kind) noexcept {
  switch (kind) {
    case MeasureKind::Skew: return "skew";
    case MeasureKind::L1: return "l1";
    case MeasureKind::RelativeEntropy: return "relent";
  }
  return "unknown";
}

std::optional<MeasureKind> parse_measure(std::string_view name) noexcept {
  if (name == "skew") return MeasureKind::Skew;
  if (name == "l1") return MeasureKind::L1;
  if (name == "relent") return MeasureKind::RelativeEntropy;
  return std::nullopt;
}

double evaluate_measure(MeasureKind kind, const DensityMatrix& rho, const DiagonalObservable* k,
                        const ToleranceConfig& tol) {
  switch (kind) {
    case MeasureKind::Skew:
      if (k == nullptr) throw Error(ErrorKind::InvalidInput, "skew information needs an observable K");
      return skew_information(rho, *k, tol);
    case MeasureKind::L1: return l1_coherence(rho);
    case MeasureKind::RelativeEntropy: return relative_entropy_coherence(rho, tol);
  }
  throw Error(ErrorKind::InvalidInput, "unknown measure");
}

ConvexityCheck check_convexity(const StateMeasure& measure, std::span<const WeightedState> ensemble,
                               const ToleranceConfig& tol) {
  if (ensemble.empty()) throw Error(ErrorKind::BadEnsemble, "ensemble is empty");
  const std::size_t dim = ensemble.front().state.dim();
  double total = 0.0;
  for (const auto& member : ensemble) {
    if (!(member.weight > 0.0) || !std::isfinite(member.weight)) {
      throw Error(ErrorKind::BadEnsemble, "ensemble weights must be positive", member.weight);
    }
    require_dims(member.state.dim(), dim, "check_convexity");
    total += member.weight;
  }
  if (std::abs(total - 1.0) > tol.validation) {
    throw Error(ErrorKind::BadEnsemble,
                "ensemble weights sum to " + std::to_string(total) + ", expected 1", total - 1.0);
  }

  Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim));
  double average = 0.0;
  for (const auto& member : ensemble) {
    mixed += member.weight * member.state.matrix().eigen();
    average += member.weight * measure(member.state);
  }
  const double mixture = measure(DensityMatrix::make(ComplexMatrix(std::move(mixed)), tol));
  const double slack = average - mixture;
  return {slack >= -tol.reconstruction, mixture, average, slack};
}

ConvexityCheck check_convexity(std::span<const WeightedState> ensemble, const DiagonalObservable& k,
                               const ToleranceConfig& tol) {
  return check_convexity([&](const DensityMatrix& rho) { return skew_information(rho, k, tol); },
                         ensemble, tol);
}

}  // namespace skewgain
