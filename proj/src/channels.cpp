#include "skewgain/channels.hpp"

#include <cmath>
#include <string>

#include "skewgain/errors.hpp"
#include "skewgain/random.hpp"

namespace skewgain {

namespace {

void require_uniform_dims(const std::vector<ComplexMatrix>& ops) {
  if (ops.empty()) throw Error(ErrorKind::DimensionMismatch, "Kraus set is empty");
  for (const auto& a : ops) {
    if (a.dim() != ops.front().dim()) {
      throw Error(ErrorKind::DimensionMismatch, "Kraus operators have unequal dimensions");
    }
  }
}

}  // namespace

double completeness_deficit(const std::vector<ComplexMatrix>& ops) {
  require_uniform_dims(ops);
  const auto n = static_cast<Eigen::Index>(ops.front().dim());
  Eigen::MatrixXcd sum = -Eigen::MatrixXcd::Identity(n, n);
  for (const auto& a : ops) sum.noalias() += a.eigen().adjoint() * a.eigen();
  return sum.norm();
}

KrausChannel KrausChannel::validate_completeness(std::vector<ComplexMatrix> ops,
                                                 const ToleranceConfig& tol) {
  const double deficit = completeness_deficit(ops);
  const double limit = tol.validation * std::sqrt(double(ops.front().dim()));
  if (!(deficit <= limit)) {
    throw Error(ErrorKind::IncompleteKrausSet,
                "Kraus set is not complete (||sum A^dagger A - I||_F = " + std::to_string(deficit) +
                    ")",
                deficit);
  }
  return KrausChannel(std::move(ops), IncoherenceStatus::Unchecked);
}

KrausChannel KrausChannel::verified(const ToleranceConfig& tol) const {
  const bool ok = is_incoherent_channel(*this, tol);
  return KrausChannel(ops_, ok ? IncoherenceStatus::Incoherent : IncoherenceStatus::NotIncoherent);
}

bool is_incoherent_kraus(const ComplexMatrix& a, const ToleranceConfig& tol) {
  const double cutoff = tol.structural_zero * frobenius_norm(a);
  const auto& m = a.eigen();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    int nonzero = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) > cutoff && ++nonzero > 1) return false;
    }
  }
  return true;
}

bool is_incoherent_set(const std::vector<ComplexMatrix>& ops, const ToleranceConfig& tol) {
  for (const auto& a : ops) {
    if (!is_incoherent_kraus(a, tol)) return false;
  }
  return true;
}

bool is_incoherent_channel(const KrausChannel& channel, const ToleranceConfig& tol) {
  return is_incoherent_set(channel.kraus_ops(), tol);
}

double offdiagonal_mass(const ComplexMatrix& m) {
  Eigen::MatrixXcd off = m.eigen();
  off.diagonal().setZero();
  return off.norm();
}

bool incoherence_oracle(const KrausChannel& channel, std::size_t trials, std::uint64_t seed,
                        const ToleranceConfig& tol) {
  return incoherence_oracle(channel.kraus_ops(), trials, seed, tol);
}

bool incoherence_oracle(const std::vector<ComplexMatrix>& ops, std::size_t trials,
                        std::uint64_t seed, const ToleranceConfig& tol) {
  require_uniform_dims(ops);
  const std::size_t d = ops.front().dim();
  Rng rng(seed);
  auto branches_stay_diagonal = [&](const Eigen::MatrixXcd& rho) {
    for (const auto& a : ops) {
      const Eigen::MatrixXcd out = a.eigen() * rho * a.eigen().adjoint();
      const double weight = out.trace().real();
      if (weight < tol.branch_weight) continue;
      if (offdiagonal_mass(ComplexMatrix(out / weight)) > tol.validation) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < d; ++i) {
    if (!branches_stay_diagonal(PureState::basis(d, i).projector().eigen())) return false;
  }
  for (std::size_t t = 0; t < trials; ++t) {
    if (!branches_stay_diagonal(random_diagonal_state(rng, d).matrix().eigen())) return false;
  }
  return true;
}

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho,
                            const ToleranceConfig& tol) {
  if (channel.dim() != rho.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "apply_channel: channel dimension " +
                                                  std::to_string(channel.dim()) + " vs state " +
                                                  std::to_string(rho.dim()));
  }
  const auto n = static_cast<Eigen::Index>(rho.dim());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& a : channel.kraus_ops()) {
    out.noalias() += a.eigen() * rho.matrix().eigen() * a.eigen().adjoint();
  }
  return DensityMatrix::make(ComplexMatrix(std::move(out)), tol);
}

BranchOutput apply_kraus_to_pure(const ComplexMatrix& a, const PureState& psi) {
  if (a.dim() != psi.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "apply_kraus_to_pure: dimension mismatch");
  }
  ComplexVector out = a.eigen() * psi.amplitudes();
  const double weight = out.squaredNorm();
  return {std::move(out), weight};
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second,
                     const ToleranceConfig& tol) {
  if (first.dim() != second.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "compose: channel dimensions differ");
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(first.size() * second.size());
  for (const auto& b : second.kraus_ops()) {
    for (const auto& a : first.kraus_ops()) ops.push_back(matmul(b, a));
  }
  auto out = KrausChannel::validate_completeness(std::move(ops), tol);
  if (first.incoherence() == IncoherenceStatus::Incoherent &&
      second.incoherence() == IncoherenceStatus::Incoherent) {
    return out.verified(tol);
  }
  return out;
}

}  // namespace skewgain
