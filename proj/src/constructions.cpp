#include "skewgain/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "skewgain/errors.hpp"

namespace skewgain {

std::string_view to_string(ConstructionTag tag) noexcept {
  switch (tag) {
    case ConstructionTag::Intro: return "intro";
    case ConstructionTag::CaseI: return "case_i";
    case ConstructionTag::CaseII: return "case_ii";
    case ConstructionTag::CasePerm: return "case_perm";
    case ConstructionTag::GeneralD: return "general_d";
    case ConstructionTag::GeneralPlacement: return "general_placement";
    case ConstructionTag::Search: return "search";
  }
  return "unknown";
}

std::optional<ConstructionTag> parse_construction_tag(std::string_view name) noexcept {
  for (auto tag : {ConstructionTag::Intro, ConstructionTag::CaseI, ConstructionTag::CaseII,
                   ConstructionTag::CasePerm, ConstructionTag::GeneralD,
                   ConstructionTag::GeneralPlacement, ConstructionTag::Search}) {
    if (to_string(tag) == name) return tag;
  }
  return std::nullopt;
}

CounterexampleInstance make_instance(DiagonalObservable k, PureState input, KrausChannel channel,
                                     ConstructionTag tag, const ToleranceConfig& tol) {
  if (channel.incoherence() == IncoherenceStatus::Unchecked) channel = channel.verified(tol);
  if (channel.incoherence() != IncoherenceStatus::Incoherent) {
    throw Error(ErrorKind::InvalidInstance, "counterexample channel is not incoherent");
  }
  DensityMatrix output = apply_channel(channel, DensityMatrix::from_pure(input), tol);
  const double c_in = skew_information_pure(input, k);
  const double c_out = skew_information(output, k, tol);
  return {std::move(k), std::move(input), std::move(channel), std::move(output),
          c_in,         c_out,            c_out - c_in,       tag};
}

void validate_instance(const CounterexampleInstance& inst, const ToleranceConfig& tol) {
  auto fail = [](const std::string& why, double magnitude = 0.0) {
    throw Error(ErrorKind::InvalidInstance, "invalid counterexample: " + why, magnitude);
  };
  const std::size_t d = inst.observable.dim();
  if (inst.input.dim() != d || inst.channel.dim() != d || inst.output.dim() != d) {
    fail("dimensions disagree");
  }
  const double deficit = completeness_deficit(inst.channel.kraus_ops());
  if (deficit > tol.validation * std::sqrt(double(d))) fail("channel is not complete", deficit);
  if (inst.channel.incoherence() != IncoherenceStatus::Incoherent ||
      !is_incoherent_channel(inst.channel, tol)) {
    fail("channel is not incoherent");
  }
  const DensityMatrix fresh = apply_channel(inst.channel, DensityMatrix::from_pure(inst.input), tol);
  const double drift = frobenius_norm(fresh.matrix() - inst.output.matrix());
  if (drift > tol.reconstruction) fail("stored output differs from channel output", drift);
  const double c_in = skew_information_pure(inst.input, inst.observable);
  const double c_out = skew_information(fresh, inst.observable, tol);
  const double scale = std::max({1.0, std::abs(c_in), std::abs(c_out)});
  if (std::abs(c_in - inst.c_in) > tol.reconstruction * scale) fail("c_in mismatch");
  if (std::abs(c_out - inst.c_out) > tol.reconstruction * scale) fail("c_out mismatch");
  if (std::abs((c_out - c_in) - inst.delta) > tol.reconstruction * scale) fail("delta mismatch");
}

std::size_t cyclic_index(std::size_t x, std::size_t d) {
  return x - ((x - 1) / d) * d;
}

std::vector<ComplexMatrix> cyclic_kraus_family(std::span<const Complex> amplitudes) {
  const std::size_t d = amplitudes.size();
  std::vector<ComplexMatrix> ops;
  ops.reserve(d);
  for (std::size_t i = 1; i <= d; ++i) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d));
    for (std::size_t s = 1; s <= d; ++s) {
      const std::size_t col = cyclic_index(s + i - 1, d);
      a(static_cast<Eigen::Index>(s - 1), static_cast<Eigen::Index>(col - 1)) = amplitudes[s - 1];
    }
    ops.emplace_back(std::move(a));
  }
  return ops;
}

std::vector<ComplexMatrix> cyclic_kraus_family(std::span<const double> amplitudes) {
  std::vector<Complex> c(amplitudes.begin(), amplitudes.end());
  return cyclic_kraus_family(std::span<const Complex>(c));
}

namespace {

KrausChannel exact_channel(std::vector<ComplexMatrix> ops, const ToleranceConfig& tol) {
  return KrausChannel::validate_completeness(std::move(ops), tol).verified(tol);
}

void require_dim_at_least_3(std::size_t d, const char* op) {
  if (d < 3) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(op) + " needs d >= 3, got " + std::to_string(d));
  }
}

}  // namespace

CounterexampleInstance construct_intro_example(const ToleranceConfig& tol) {
  const double h = 1.0 / std::sqrt(2.0);
  const std::array<double, 3> phi{h, h, 0.0};
  return make_instance(DiagonalObservable::make({1.0, 10.0, 5.0}, tol), PureState::uniform(3),
                       exact_channel(cyclic_kraus_family(std::span<const double>(phi)), tol),
                       ConstructionTag::Intro, tol);
}

Ordering3 ordering_of(std::span<const double> lambdas) {
  if (lambdas.size() != 3) throw Error(ErrorKind::DimensionMismatch, "ordering needs three eigenvalues");
  const auto idx = ascending_order(lambdas);
  return {idx[0], idx[1], idx[2]};
}

std::array<double, 3> case_amplitudes(const Ordering3& order) {
  std::array<double, 3> phi{};
  phi[order[0]] = 1.0 / std::sqrt(2.0);
  phi[order[1]] = 1.0 / std::sqrt(6.0);
  phi[order[2]] = 1.0 / std::sqrt(3.0);
  return phi;
}

CounterexampleInstance construct_case(const DiagonalObservable& k, const ToleranceConfig& tol) {
  if (k.dim() != 3) {
    throw Error(ErrorKind::DimensionMismatch,
                "construct_case needs d = 3, got " + std::to_string(k.dim()));
  }
  const Ordering3 order = ordering_of(k.lambdas());
  ConstructionTag tag = ConstructionTag::CasePerm;
  if (order == Ordering3{0, 2, 1}) tag = ConstructionTag::CaseI;
  else if (order == Ordering3{1, 2, 0}) tag = ConstructionTag::CaseII;
  const auto phi = case_amplitudes(order);
  return make_instance(k, PureState::uniform(3),
                       exact_channel(cyclic_kraus_family(std::span<const double>(phi)), tol), tag, tol);
}

double delta_closed_form(std::span<const double> lambdas, const Ordering3& order) {
  if (lambdas.size() != 3) throw Error(ErrorKind::DimensionMismatch, "closed form needs three eigenvalues");
  const double lo = lambdas[order[0]];
  const double mid = lambdas[order[1]];
  const double hi = lambdas[order[2]];
  return (mid - lo) * (3.0 * hi - 3.0 * mid + hi - lo) / 36.0;
}

double delta_closed_form(const DiagonalObservable& k) {
  return delta_closed_form(k.lambdas(), ordering_of(k.lambdas()));
}

std::vector<double> general_d_amplitudes(std::size_t d) {
  require_dim_at_least_3(d, "general_d_amplitudes");
  const double n = static_cast<double>(d);
  std::vector<double> phi(d, std::sqrt(1.0 / n));
  phi[0] = std::sqrt(3.0 / (2.0 * n));
  phi[1] = std::sqrt(1.0 / (2.0 * n));
  return phi;
}

CounterexampleInstance construct_general_d(const DiagonalObservable& k, const ToleranceConfig& tol) {
  require_dim_at_least_3(k.dim(), "construct_general_d");
  const auto l = k.lambdas();
  if (!std::is_sorted(l.begin(), l.end(), std::less_equal<>())) {
    throw Error(ErrorKind::NotSorted, "construct_general_d needs strictly ascending eigenvalues");
  }
  const auto phi = general_d_amplitudes(k.dim());
  return make_instance(k, PureState::uniform(k.dim()),
                       exact_channel(cyclic_kraus_family(std::span<const double>(phi)), tol),
                       ConstructionTag::GeneralD, tol);
}

double delta_general_d(std::span<const double> l) {
  require_dim_at_least_3(l.size(), "delta_general_d");
  const double d = static_cast<double>(l.size());
  double upper = 0.0;
  for (std::size_t i = 2; i < l.size(); ++i) upper += l[i];
  const double bracket = 4.0 * upper - (2.0 * d - 5.0) * l[0] - (2.0 * d - 3.0) * l[1];
  return (l[1] - l[0]) * bracket / (4.0 * d * d);
}

std::vector<std::size_t> ascending_order(std::span<const double> lambdas) {
  std::vector<std::size_t> idx(lambdas.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return lambdas[a] < lambdas[b]; });
  return idx;
}

CounterexampleInstance construct_general_placement(const DiagonalObservable& k,
                                                   const ToleranceConfig& tol) {
  const std::size_t d = k.dim();
  require_dim_at_least_3(d, "construct_general_placement");
  const auto order = ascending_order(k.lambdas());
  const auto phi = general_d_amplitudes(d);
  const auto sorted_family = cyclic_kraus_family(std::span<const double>(phi));

  // P|s> = |order[s]>; each operator becomes P A P^T.
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd perm = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t s = 0; s < d; ++s) {
    perm(static_cast<Eigen::Index>(order[s]), static_cast<Eigen::Index>(s)) = 1.0;
  }
  std::vector<ComplexMatrix> ops;
  ops.reserve(d);
  for (const auto& a : sorted_family) ops.emplace_back(perm * a.eigen() * perm.transpose());
  return make_instance(k, PureState::uniform(d), exact_channel(std::move(ops), tol),
                       ConstructionTag::GeneralPlacement, tol);
}

}  // namespace skewgain
