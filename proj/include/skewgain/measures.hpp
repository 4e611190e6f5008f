#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "skewgain/numerics.hpp"

namespace skewgain {

/// A normalized pure state |psi>.
class PureState {
 public:
  /// Throws Error{StateValidation} unless sum |a_i|^2 = 1 within tol.validation.
  static PureState make(ComplexVector amplitudes, const ToleranceConfig& tol = {});
  /// (1/sqrt d, ..., 1/sqrt d)
  static PureState uniform(std::size_t dim);
  /// |index>, zero-based.
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const ComplexVector& amplitudes() const noexcept { return amps_; }
  /// |psi><psi|
  ComplexMatrix projector() const { return ComplexMatrix::outer(amps_, amps_); }

 private:
  explicit PureState(ComplexVector a) : amps_(std::move(a)) {}
  ComplexVector amps_;
};

/// Hermitian, positive semidefinite, unit-trace d x d matrix.
class DensityMatrix {
 public:
  /// Throws Error{StateValidation} when hermiticity, trace or the minimum
  /// eigenvalue fall outside tol.validation.
  static DensityMatrix make(ComplexMatrix m, const ToleranceConfig& tol = {});
  static DensityMatrix from_pure(const PureState& psi);
  /// diag(p_1, ..., p_d); the probabilities are validated like any other state.
  static DensityMatrix diagonal(std::span<const double> probabilities,
                                const ToleranceConfig& tol = {});

  std::size_t dim() const noexcept { return m_.dim(); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// The observable K = sum_i lambda_i |i><i|, kept as its diagonal in basis order.
class DiagonalObservable {
 public:
  /// Throws Error{DegenerateObservable} if two eigenvalues are closer than
  /// tol.validation * max(1, max |lambda|), or Error{InvalidInput} on an empty
  /// or non-finite list. Zero eigenvalues are allowed.
  static DiagonalObservable make(std::vector<double> lambdas, const ToleranceConfig& tol = {});

  std::size_t dim() const noexcept { return lambdas_.size(); }
  std::span<const double> lambdas() const noexcept { return lambdas_; }
  double operator[](std::size_t i) const { return lambdas_[i]; }
  ComplexMatrix matrix() const { return ComplexMatrix::diagonal(std::span<const double>(lambdas_)); }

 private:
  explicit DiagonalObservable(std::vector<double> l) : lambdas_(std::move(l)) {}
  std::vector<double> lambdas_;
};

/// Wigner-Yanase skew information -1/2 Tr([sqrt(rho), K]^2).
double skew_information(const DensityMatrix& rho, const DiagonalObservable& k,
                        const ToleranceConfig& tol = {});

/// Pure-state fast path: the variance <K^2> - <K>^2 in |psi>.
double skew_information_pure(const PureState& psi, const DiagonalObservable& k);

/// Tr(rho K^2) - Tr(rho K)^2; upper bound for the skew information, equal on pure states.
double observable_variance(const DensityMatrix& rho, const DiagonalObservable& k);

/// Sum of |rho_ij| over i != j.
double l1_coherence(const DensityMatrix& rho);

/// Von Neumann entropy in bits; eigenvalues are clamped at zero and 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho, const ToleranceConfig& tol = {});

/// S(diag(rho)) - S(rho) in bits.
double relative_entropy_coherence(const DensityMatrix& rho, const ToleranceConfig& tol = {});

enum class MeasureKind { Skew, L1, RelativeEntropy };

std::string_view to_string(MeasureKind kind) noexcept;
/// Accepts "skew", "l1" and "relent".
std::optional<MeasureKind> parse_measure(std::string_view name) noexcept;

/// Dispatches on `kind`; `k` is required for MeasureKind::Skew and ignored otherwise.
double evaluate_measure(MeasureKind kind, const DensityMatrix& rho, const DiagonalObservable* k,
                        const ToleranceConfig& tol = {});

using StateMeasure = std::function<double(const DensityMatrix&)>;

struct WeightedState {
  double weight;
  DensityMatrix state;
};

struct ConvexityCheck {
  bool holds;
  double mixture_value;  // C(sum p_n rho_n)
  double average_value;  // sum p_n C(rho_n)
  double slack;          // average_value - mixture_value; negative means the mixture gained
};

/// Tests C(sum p_n rho_n) <= sum p_n C(rho_n) + tol.reconstruction.
/// Throws Error{BadEnsemble} on an empty ensemble, non-positive weights or
/// weights not summing to one within tol.validation, and
/// Error{DimensionMismatch} on mixed dimensions.
ConvexityCheck check_convexity(const StateMeasure& measure, std::span<const WeightedState> ensemble,
                               const ToleranceConfig& tol = {});

/// Convexity check of the skew information for observable `k`.
ConvexityCheck check_convexity(std::span<const WeightedState> ensemble, const DiagonalObservable& k,
                               const ToleranceConfig& tol = {});

}  // namespace skewgain
