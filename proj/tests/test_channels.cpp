#include <doctest.h>

#include <cmath>
#include <vector>

#include "skewgain/channels.hpp"
#include "skewgain/constructions.hpp"
#include "skewgain/errors.hpp"
#include "skewgain/random.hpp"
#include "skewgain/search.hpp"

using namespace skewgain;

namespace {

ComplexMatrix from_rows(std::size_t d, std::initializer_list<Complex> entries) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  auto it = entries.begin();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = *it++;
  return ComplexMatrix(std::move(m));
}

std::vector<ComplexMatrix> intro_ops() {
  const double h = 1.0 / std::sqrt(2.0);
  return {from_rows(3, {h, 0, 0, 0, h, 0, 0, 0, 0}),
          from_rows(3, {0, h, 0, 0, 0, h, 0, 0, 0}),
          from_rows(3, {0, 0, h, h, 0, 0, 0, 0, 0})};
}

ComplexMatrix hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return from_rows(2, {h, h, h, -h});
}

/// n Kraus operators cut from a random (n d) x d isometry: complete, generically coherent.
KrausChannel random_generic_channel(Rng& rng, std::size_t d, std::size_t n) {
  Eigen::MatrixXcd g(static_cast<Eigen::Index>(n * d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  const Eigen::MatrixXcd v = qr.householderQ() * Eigen::MatrixXcd::Identity(g.rows(), g.cols());
  std::vector<ComplexMatrix> ops;
  const auto dd = static_cast<Eigen::Index>(d);
  for (std::size_t k = 0; k < n; ++k) ops.emplace_back(v.block(static_cast<Eigen::Index>(k) * dd, 0, dd, dd));
  return KrausChannel::validate_completeness(std::move(ops));
}

/// A structural channel followed by a unitary close to the identity.
KrausChannel nearly_incoherent_channel(Rng& rng, std::size_t d) {
  auto base = sample_incoherent_channel(rng, d, 1 + rng.below(3));
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  h(0, 1) = 1e-3;
  h(1, 0) = -1e-3;
  const Eigen::MatrixXcd u = (Eigen::MatrixXcd::Identity(h.rows(), h.cols()) + h) *
                             (Eigen::MatrixXcd::Identity(h.rows(), h.cols()) - h).inverse();
  auto rot = KrausChannel::validate_completeness({ComplexMatrix(u)});
  return compose(base, rot);
}

}  // namespace

TEST_CASE("validate_completeness examples") {
  const auto id = KrausChannel::validate_completeness({ComplexMatrix::identity(3)});
  CHECK(id.size() == 1);
  CHECK(id.incoherence() == IncoherenceStatus::Unchecked);

  const auto intro = KrausChannel::validate_completeness(intro_ops());
  CHECK(completeness_deficit(intro.kraus_ops()) < 1e-15);

  try {
    (void)KrausChannel::validate_completeness({ComplexMatrix::identity(3) * 0.5});
    FAIL("expected IncompleteKrausSet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IncompleteKrausSet);
    // ||I/4 - I||_F = (3/4) sqrt 3
    CHECK(e.magnitude() == doctest::Approx(0.75 * std::sqrt(3.0)));
  }

  try {
    (void)KrausChannel::validate_completeness({ComplexMatrix::identity(2), ComplexMatrix::identity(3)});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
  CHECK_THROWS_AS((void)KrausChannel::validate_completeness({}), Error);
}

TEST_CASE("structural incoherence of single Kraus operators") {
  const std::array<double, 3> diag{0.3, -2.0, 1.0};
  CHECK(is_incoherent_kraus(ComplexMatrix::diagonal(std::span<const double>(diag))));
  CHECK(is_incoherent_kraus(from_rows(3, {0, 2, 0, 0, 0, Complex(0, 1), 0.5, 0, 0})));
  // |1><1| + |2><1| puts two nonzeros in the first column.
  CHECK_FALSE(is_incoherent_kraus(from_rows(2, {1, 0, 1, 0})));
  // Two nonzeros in one row but separate columns is still incoherent.
  CHECK(is_incoherent_kraus(from_rows(2, {1, 1, 0, 0})));
}

TEST_CASE("incoherence of whole channels") {
  const auto intro = KrausChannel::validate_completeness(intro_ops());
  CHECK(is_incoherent_channel(intro));
  CHECK(intro.verified().incoherence() == IncoherenceStatus::Incoherent);

  const auto case_i = construct_case(DiagonalObservable::make({1.0, 10.0, 5.0}));
  CHECK(is_incoherent_channel(case_i.channel));

  const auto had = KrausChannel::validate_completeness({hadamard()});
  CHECK_FALSE(is_incoherent_channel(had));
  CHECK(had.verified().incoherence() == IncoherenceStatus::NotIncoherent);
  CHECK_FALSE(incoherence_oracle(had, 10, 1));

  CHECK(incoherence_oracle(intro, 100, 1));
}

TEST_CASE("apply_channel examples") {
  const auto intro = KrausChannel::validate_completeness(intro_ops());
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector phi(3);
  phi << h, h, 0;
  const auto out = apply_channel(intro, DensityMatrix::from_pure(PureState::uniform(3)));
  CHECK(frobenius_norm(out.matrix() - ComplexMatrix::outer(phi, phi)) <= 1e-9);

  Rng rng(20);
  const auto rho = random_density_matrix(rng, 4, 3);
  const auto id = KrausChannel::validate_completeness({ComplexMatrix::identity(4)});
  CHECK(frobenius_norm(apply_channel(id, rho).matrix() - rho.matrix()) == 0.0);

  const auto case_i = construct_case(DiagonalObservable::make({1.0, 10.0, 5.0}));
  ComplexVector phi_i(3);
  phi_i << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(6.0);
  const auto out_i = apply_channel(case_i.channel, DensityMatrix::from_pure(PureState::uniform(3)));
  CHECK(frobenius_norm(out_i.matrix() - ComplexMatrix::outer(phi_i, phi_i)) <= 1e-9);

  CHECK_THROWS_AS((void)apply_channel(intro, rho), Error);
}

TEST_CASE("apply_kraus_to_pure examples") {
  const auto ops = intro_ops();
  const auto b = apply_kraus_to_pure(ops[1], PureState::uniform(3));
  const double h = 1.0 / std::sqrt(2.0);
  ComplexVector phi(3);
  phi << h, h, 0;
  CHECK((b.amplitudes - phi / std::sqrt(3.0)).norm() <= 1e-15);
  CHECK(b.weight == doctest::Approx(1.0 / 3.0));

  Rng rng(21);
  const auto psi = random_pure_state(rng, 5);
  const auto same = apply_kraus_to_pure(ComplexMatrix::identity(5), psi);
  CHECK((same.amplitudes - psi.amplitudes()).norm() == 0.0);
  CHECK(same.weight == doctest::Approx(1.0));

  // General-d operator A_2 at d = 4 on the uniform state: row s picks column
  // s + 1 (mod 4), so the product is phi / 2 with phi the general-d amplitudes.
  const auto phi4 = general_d_amplitudes(4);
  const auto fam = cyclic_kraus_family(std::span<const double>(phi4));
  const auto b4 = apply_kraus_to_pure(fam[1], PureState::uniform(4));
  for (Eigen::Index s = 0; s < 4; ++s) CHECK(std::abs(b4.amplitudes(s) - phi4[std::size_t(s)] / 2.0) < 1e-15);
  CHECK(b4.weight == doctest::Approx(0.25));
}

TEST_CASE("compose keeps completeness and incoherence") {
  Rng rng(22);
  const auto a = sample_incoherent_channel(rng, 4, 2);
  const auto b = sample_incoherent_channel(rng, 4, 3);
  const auto ab = compose(a, b);
  CHECK(ab.size() == 6);
  CHECK(completeness_deficit(ab.kraus_ops()) < 1e-12);
  CHECK(ab.incoherence() == IncoherenceStatus::Incoherent);

  const auto rho = random_density_matrix(rng, 4, 2);
  const auto seq = apply_channel(b, apply_channel(a, rho));
  CHECK(frobenius_norm(apply_channel(ab, rho).matrix() - seq.matrix()) < 1e-12);
}

TEST_CASE("property: trace preservation and incoherence closure") {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 2 + rng.below(6);
    const bool structural = trial % 2 == 0;
    const auto ch = structural ? sample_incoherent_channel(rng, d, 1 + rng.below(4))
                               : random_generic_channel(rng, d, 1 + rng.below(3));
    const auto out = apply_channel(ch, random_density_matrix(rng, d, 1 + rng.below(d)));
    CHECK(std::abs(trace(out.matrix()) - Complex(1.0, 0.0)) <= 1e-9);
    if (structural) {
      CHECK(offdiagonal_mass(apply_channel(ch, random_diagonal_state(rng, d)).matrix()) <= 1e-9);
    }
  }
}

TEST_CASE("property: structural check agrees with the sampling oracle on 1000 channels") {
  Rng rng(24);
  int disagreements = 0;
  int incoherent = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + rng.below(5);
    KrausChannel ch = [&] {
      switch (trial % 3) {
        case 0: return sample_incoherent_channel(rng, d, 1 + rng.below(4));
        case 1: return random_generic_channel(rng, d, 1 + rng.below(3));
        default: return nearly_incoherent_channel(rng, d);
      }
    }();
    const bool structural = is_incoherent_channel(ch);
    incoherent += structural;
    if (structural != incoherence_oracle(ch, 20, rng.next_u64())) ++disagreements;
  }
  CHECK(disagreements == 0);
  CHECK(incoherent > 300);
  CHECK(incoherent < 700);
}

TEST_CASE("property: baseline measures do not increase under constructed incoherent channels") {
  Rng rng(25);
  std::vector<CounterexampleInstance> instances{construct_intro_example()};
  for (const auto& l : std::vector<std::vector<double>>{{1, 10, 5}, {10, 1, 5}, {5, 10, 1}}) {
    instances.push_back(construct_case(DiagonalObservable::make(l)));
  }
  for (std::size_t d = 3; d <= 7; ++d) {
    instances.push_back(construct_general_placement(random_observable(rng, d, 0.0, 10.0)));
  }
  for (const auto& inst : instances) {
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t d = inst.channel.dim();
      const auto rho = trial % 2 ? DensityMatrix::from_pure(random_pure_state(rng, d))
                                 : random_density_matrix(rng, d, 1 + rng.below(d));
      const auto out = apply_channel(inst.channel, rho);
      CHECK(l1_coherence(out) <= l1_coherence(rho) + 1e-8);
      CHECK(relative_entropy_coherence(out) <= relative_entropy_coherence(rho) + 1e-8);
    }
  }
}
