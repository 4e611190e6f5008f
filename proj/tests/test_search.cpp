#include <doctest.h>

#include <cmath>
#include <vector>

#include "skewgain/errors.hpp"
#include "skewgain/search.hpp"
#include "skewgain/serialization.hpp"

using namespace skewgain;

namespace {

SearchConfig config_for(std::size_t dim, std::size_t trials, std::uint64_t seed, ChannelFamily family) {
  SearchConfig c;
  c.dim = dim;
  c.trials = trials;
  c.seed = seed;
  c.family = family;
  return c;
}

const MeasureOutcome& outcome(const ViolationReport& r, MeasureKind m) {
  for (const auto& o : r.results) {
    if (o.measure == m) return o;
  }
  throw std::runtime_error("measure missing from report");
}

}  // namespace

TEST_CASE("Rng is reproducible and seeds streams independently") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(Rng::derive_seed(42, 0) != Rng::derive_seed(42, 1));
  CHECK(Rng::derive_seed(42, 0) != Rng::derive_seed(43, 0));
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.below(5) < 5);
  }
}

TEST_CASE("search config validation") {
  auto expect_invalid = [](const SearchConfig& c) {
    try {
      c.validate();
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidConfig);
    }
  };
  auto c = config_for(3, 10, 1, ChannelFamily::PaperSeeded);
  CHECK_NOTHROW(c.validate());

  auto zero = c;
  zero.trials = 0;
  expect_invalid(zero);

  auto small = c;
  small.dim = 1;
  expect_invalid(small);

  auto seeded2 = c;
  seeded2.dim = 2;
  expect_invalid(seeded2);
  seeded2.family = ChannelFamily::RandomIncoherent;
  CHECK_NOTHROW(seeded2.validate());

  auto range = c;
  range.lambda_hi = range.lambda_lo;
  expect_invalid(range);

  auto dup = c;
  dup.measures = {MeasureKind::L1, MeasureKind::L1};
  expect_invalid(dup);

  auto none = c;
  none.measures.clear();
  expect_invalid(none);

  CHECK_THROWS_AS((void)run_search(zero), Error);
}

TEST_CASE("channel family names round-trip") {
  for (auto f : {ChannelFamily::CyclicUniform, ChannelFamily::RandomIncoherent, ChannelFamily::PaperSeeded}) {
    CHECK(parse_channel_family(to_string(f)) == f);
  }
  CHECK_FALSE(parse_channel_family("seeded").has_value());
}

TEST_CASE("monomial Kraus set with one branch, identity targets and unit weights is the identity") {
  const std::size_t d = 4;
  const std::vector<std::vector<std::size_t>> targets{{0, 1, 2, 3}};
  const std::vector<std::vector<double>> weights{{1, 1, 1, 1}};
  const std::vector<std::vector<Complex>> phases{{1, 1, 1, 1}};
  const auto ops = monomial_kraus_set(targets, weights, phases);
  REQUIRE(ops.size() == 1);
  CHECK(frobenius_norm(ops[0] - ComplexMatrix::identity(d)) == 0.0);
}

TEST_CASE("property: sampled incoherent channels are complete and structurally incoherent") {
  Rng rng(40);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 2 + rng.below(7);
    const auto ch = sample_incoherent_channel(rng, d, 1 + rng.below(5));
    CHECK(completeness_deficit(ch.kraus_ops()) <= 1e-12);
    CHECK(is_incoherent_channel(ch));
    CHECK(ch.incoherence() == IncoherenceStatus::Incoherent);
  }
  // A single branch is a phased permutation, hence unitary.
  const auto u = sample_incoherent_channel(rng, 5, 1);
  const auto& a = u.kraus_ops()[0].eigen();
  CHECK((a.adjoint() * a - Eigen::MatrixXcd::Identity(5, 5)).norm() < 1e-12);
}

TEST_CASE("jittered seeded channels stay complete with the same sparsity") {
  Rng rng(41);
  const auto inst = construct_general_placement(random_observable(rng, 6, 0.0, 10.0));
  const auto jittered = jitter_channel(rng, inst.channel, 0.2);
  CHECK(completeness_deficit(jittered.kraus_ops()) <= 1e-12);
  CHECK(jittered.incoherence() == IncoherenceStatus::Incoherent);
  for (std::size_t n = 0; n < jittered.size(); ++n) {
    const auto& a = inst.channel.kraus_ops()[n].eigen();
    const auto& b = jittered.kraus_ops()[n].eigen();
    CHECK(((a.array().abs() > 0.0) == (b.array().abs() > 0.0)).all());
  }
  CHECK(frobenius_norm(jittered.kraus_ops()[0] - inst.channel.kraus_ops()[0]) > 1e-6);
}

TEST_CASE("trial samples depend only on (seed, trial index)") {
  const auto c = config_for(4, 50, 9, ChannelFamily::RandomIncoherent);
  const auto a = sample_trial(c, 17);
  auto bigger = c;
  bigger.trials = 5000;
  const auto b = sample_trial(bigger, 17);
  CHECK(a.channel.size() == b.channel.size());
  CHECK((a.input.amplitudes() - b.input.amplitudes()).norm() == 0.0);
  for (std::size_t i = 0; i < a.observable.dim(); ++i) CHECK(a.observable[i] == b.observable[i]);
}

TEST_CASE("paper-seeded anchor trial reproduces the case-i gain") {
  const auto c = config_for(3, 1, 123, ChannelFamily::PaperSeeded);
  const auto sample = sample_trial(c, 0);
  CHECK_FALSE(sample.jittered);
  CHECK(std::abs(trial_delta(sample, MeasureKind::Skew) - 8.0 / 3.0) <= 1e-9);

  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const auto r = run_search(config_for(3, 200, seed, ChannelFamily::PaperSeeded));
    const auto& skew = outcome(r, MeasureKind::Skew);
    CHECK(skew.violations > 0);
    CHECK(*skew.best_delta >= 8.0 / 3.0 - 1e-9);
  }
}

TEST_CASE("property: every unjittered paper-seeded trial violates monotonicity, d = 3..8") {
  for (std::size_t d = 3; d <= 8; ++d) {
    const auto c = config_for(d, 100, 1000 + d, ChannelFamily::PaperSeeded);
    for (std::size_t t = 0; t < c.trials; t += 2) {
      const auto sample = sample_trial(c, t);
      REQUIRE_FALSE(sample.jittered);
      CHECK(trial_delta(sample, MeasureKind::Skew) > 1e-8);
    }
  }
}

TEST_CASE("search reports are deterministic and independent of worker count") {
  for (auto family : {ChannelFamily::PaperSeeded, ChannelFamily::RandomIncoherent, ChannelFamily::CyclicUniform}) {
    auto c = config_for(4, 300, 77, family);
    const auto serial = dump(report_to_json(run_search(c), false));
    CHECK(serial == dump(report_to_json(run_search(c), false)));
    c.workers = 3;
    CHECK(serial == dump(report_to_json(run_search(c), false)));
  }
}

TEST_CASE("reported best instances are sound") {
  const auto r = run_search(config_for(5, 400, 5, ChannelFamily::RandomIncoherent));
  const auto& skew = outcome(r, MeasureKind::Skew);
  REQUIRE(skew.best.has_value());
  CHECK(skew.best->tag == ConstructionTag::Search);
  CHECK_NOTHROW(validate_instance(*skew.best));
  // Fresh evaluation of both sides through the density-matrix path.
  const double c_in = skew_information(DensityMatrix::from_pure(skew.best->input), skew.best->observable);
  const double c_out = skew_information(apply_channel(skew.best->channel, DensityMatrix::from_pure(skew.best->input)),
                                        skew.best->observable);
  CHECK(c_out - c_in > 0.0);
  CHECK(std::abs((c_out - c_in) - *skew.best_delta) <= 1e-8);
  CHECK(skew.max_delta == *skew.best_delta);
}

TEST_CASE("baseline measures report no violations under incoherent channels") {
  for (std::size_t d = 2; d <= 6; ++d) {
    for (auto family : {ChannelFamily::RandomIncoherent, ChannelFamily::CyclicUniform, ChannelFamily::PaperSeeded}) {
      if (family == ChannelFamily::PaperSeeded && d < 3) continue;
      const auto r = run_search(config_for(d, 300, 11 * d, family));
      CHECK(outcome(r, MeasureKind::L1).violations == 0);
      CHECK(outcome(r, MeasureKind::RelativeEntropy).violations == 0);
      CHECK_FALSE(outcome(r, MeasureKind::L1).best.has_value());
    }
  }
}

TEST_CASE("measure subset is honored") {
  auto c = config_for(3, 20, 1, ChannelFamily::CyclicUniform);
  c.measures = {MeasureKind::RelativeEntropy};
  const auto r = run_search(c);
  REQUIRE(r.results.size() == 1);
  CHECK(r.results[0].measure == MeasureKind::RelativeEntropy);
  CHECK(r.rng == Rng::kAlgorithm);
}

TEST_CASE("minimize_instance keeps the gain") {
  const auto intro = construct_intro_example();
  const auto small = minimize_instance(intro);
  CHECK(small.delta > 1e-6);
  CHECK(small.delta >= 0.9 * intro.delta);
  CHECK(small.channel.size() <= intro.channel.size());
  CHECK_NOTHROW(validate_instance(small));

  const auto c = config_for(5, 1, 3, ChannelFamily::PaperSeeded);
  const auto jittered_sample = sample_trial(c, 1);
  REQUIRE(jittered_sample.jittered);
  const auto jittered = make_instance(jittered_sample.observable, jittered_sample.input, jittered_sample.channel,
                                      ConstructionTag::Search);
  if (jittered.delta > 1e-6) {
    const auto m = minimize_instance(jittered);
    CHECK(m.delta >= 0.9 * jittered.delta);
    CHECK_NOTHROW(validate_instance(m));
  }

  auto broken = intro;
  broken.delta = -1.0;
  try {
    (void)minimize_instance(broken);
    FAIL("expected InvalidInstance");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInstance);
  }
}
