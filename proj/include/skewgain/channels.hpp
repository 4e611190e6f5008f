#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "skewgain/measures.hpp"

namespace skewgain {

enum class IncoherenceStatus { Unchecked, Incoherent, NotIncoherent };

/// Kraus decomposition {A_n} with sum A_n^dagger A_n = I. Immutable; the
/// incoherence flag is fixed when the value is created.
class KrausChannel {
 public:
  /// Throws Error{DimensionMismatch} on an empty set or unequal dimensions and
  /// Error{IncompleteKrausSet} (magnitude = deficit) when
  /// ||sum A^dagger A - I||_F > tol.validation * sqrt(d).
  static KrausChannel validate_completeness(std::vector<ComplexMatrix> ops,
                                            const ToleranceConfig& tol = {});

  std::size_t dim() const noexcept { return ops_.front().dim(); }
  std::size_t size() const noexcept { return ops_.size(); }
  const std::vector<ComplexMatrix>& kraus_ops() const noexcept { return ops_; }
  IncoherenceStatus incoherence() const noexcept { return status_; }

  /// Copy of this channel with the incoherence flag resolved by the structural check.
  KrausChannel verified(const ToleranceConfig& tol = {}) const;

 private:
  KrausChannel(std::vector<ComplexMatrix> ops, IncoherenceStatus s)
      : ops_(std::move(ops)), status_(s) {}
  std::vector<ComplexMatrix> ops_;
  IncoherenceStatus status_;
};

/// ||sum A_n^dagger A_n - I||_F. Throws Error{DimensionMismatch} on an empty or ragged set.
double completeness_deficit(const std::vector<ComplexMatrix>& ops);

/// True iff every column of A has at most one entry with modulus above
/// tol.structural_zero * ||A||_F. Such an A maps each |j><j| to a multiple of
/// a single |i><i|, and by linearity maps every diagonal state to a diagonal one.
bool is_incoherent_kraus(const ComplexMatrix& a, const ToleranceConfig& tol = {});

bool is_incoherent_channel(const KrausChannel& channel, const ToleranceConfig& tol = {});

/// Brute-force check of the definition: every Kraus branch applied to the d
/// basis states and to `trials` random diagonal states must give a diagonal
/// normalized output (off-diagonal Frobenius mass <= tol.validation). Branches
/// with weight below tol.branch_weight are skipped.
bool incoherence_oracle(const KrausChannel& channel, std::size_t trials, std::uint64_t seed,
                        const ToleranceConfig& tol = {});
/// Same check on a raw operator list, which need not be complete.
bool incoherence_oracle(const std::vector<ComplexMatrix>& ops, std::size_t trials,
                        std::uint64_t seed, const ToleranceConfig& tol = {});
/// Structural check on a raw operator list.
bool is_incoherent_set(const std::vector<ComplexMatrix>& ops, const ToleranceConfig& tol = {});

/// sum_n A_n rho A_n^dagger, revalidated as a state (Error{StateValidation} on failure).
DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho,
                            const ToleranceConfig& tol = {});

struct BranchOutput {
  ComplexVector amplitudes;  // A|psi>, unnormalized
  double weight;             // ||A|psi>||^2
};

BranchOutput apply_kraus_to_pure(const ComplexMatrix& a, const PureState& psi);

/// Channel `second` after `first`: Kraus set {B_m A_n}. Both must be complete;
/// the flag is Incoherent when both inputs are verified incoherent, else Unchecked.
KrausChannel compose(const KrausChannel& first, const KrausChannel& second,
                     const ToleranceConfig& tol = {});

/// Frobenius norm of the off-diagonal part.
double offdiagonal_mass(const ComplexMatrix& m);

}  // namespace skewgain
