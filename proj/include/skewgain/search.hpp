#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skewgain/constructions.hpp"
#include "skewgain/random.hpp"

namespace skewgain {

enum class ChannelFamily { CyclicUniform, RandomIncoherent, PaperSeeded };

std::string_view to_string(ChannelFamily family) noexcept;
/// Accepts "cyclic-uniform", "random-incoherent" and "paper-seeded".
std::optional<ChannelFamily> parse_channel_family(std::string_view name) noexcept;

struct SearchConfig {
  std::size_t dim = 3;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  ChannelFamily family = ChannelFamily::PaperSeeded;
  std::vector<MeasureKind> measures{MeasureKind::Skew, MeasureKind::L1, MeasureKind::RelativeEntropy};
  double lambda_lo = 0.0;
  double lambda_hi = 10.0;
  /// Relative amplitude noise applied to odd paper-seeded trials.
  double jitter = 0.05;
  /// Worker threads. Does not affect the report.
  unsigned workers = 1;

  /// Throws Error{InvalidConfig}.
  void validate() const;
};

/// Kraus set {P_n D_n}: branch n sends column j to row targets[n][j] with
/// amplitude sqrt(weights[n][j]) * phases[n][j]. Each targets[n] must be a
/// permutation of 0..d-1 and the weights in every column must sum to one, so
/// the set is complete and each operator has one nonzero per column.
std::vector<ComplexMatrix> monomial_kraus_set(const std::vector<std::vector<std::size_t>>& targets,
                                              const std::vector<std::vector<double>>& weights,
                                              const std::vector<std::vector<Complex>>& phases);

/// Random structurally incoherent channel with `branches` Kraus operators:
/// uniform random permutation and phases per branch, flat-Dirichlet weights per column.
KrausChannel sample_incoherent_channel(Rng& rng, std::size_t dim, std::size_t branches,
                                       const ToleranceConfig& tol = {});

/// Multiplies each nonzero Kraus entry by (1 + jitter u), u uniform in [-1, 1),
/// then rescales every column so the set stays complete. Sparsity, and with it
/// structural incoherence, is unchanged.
KrausChannel jitter_channel(Rng& rng, const KrausChannel& channel, double jitter,
                            const ToleranceConfig& tol = {});

/// Everything a single trial evaluates. Trial t is drawn from its own stream
/// Rng::derive_seed(config.seed, t), independent of every other trial.
struct TrialSample {
  DiagonalObservable observable;
  PureState input;
  KrausChannel channel;
  bool jittered;
};

/// Paper-seeded trials use the three-level case construction for d = 3 and
/// the general placement construction otherwise, on uniform input. Trial 0 is
/// anchored at K = diag(1, 10, 5) for d = 3 and K = diag(1, ..., d) for d > 3;
/// odd trials are jittered.
TrialSample sample_trial(const SearchConfig& config, std::size_t trial, const ToleranceConfig& tol = {});

/// Gain of `measure` for one trial: C(channel(rho_in)) - C(rho_in).
double trial_delta(const TrialSample& sample, MeasureKind measure, const ToleranceConfig& tol = {});

struct MeasureOutcome {
  MeasureKind measure;
  std::size_t violations = 0;  // trials with delta > tol.reconstruction
  double max_delta = 0.0;      // largest delta over all trials, violation or not
  std::optional<std::size_t> best_trial;
  std::optional<double> best_delta;
  std::optional<CounterexampleInstance> best;  // present iff violations > 0
};

struct ViolationReport {
  SearchConfig config;
  std::string rng;
  std::vector<MeasureOutcome> results;  // in config.measures order
  double wall_time_s = 0.0;
};

/// Runs every trial, keeps the largest gain per measure (ties: fewer Kraus
/// operators, then lower trial index) and revalidates each retained instance
/// from scratch. Deterministic for a given config regardless of `workers`.
ViolationReport run_search(const SearchConfig& config, const ToleranceConfig& tol = {});

/// Greedy shrink: repeatedly drops a Kraus operator or zeroes the smallest
/// nonzero entry, renormalizing columns, and keeps the change when the gain
/// stays above 1e-6 and at least 90% of the original. The input is validated
/// first (Error{InvalidInstance}).
CounterexampleInstance minimize_instance(const CounterexampleInstance& inst,
                                         const ToleranceConfig& tol = {});

}  // namespace skewgain
