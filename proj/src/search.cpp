#include "skewgain/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "skewgain/errors.hpp"

namespace skewgain {

namespace {

constexpr double kMinimizeFloor = 1e-6;
constexpr double kMinimizeKeep = 0.9;
constexpr std::size_t kMaxDim = 64;

/// Rescales each column so that sum_n sum_i |A_n[i, j]|^2 = 1 and drops
/// all-zero operators. Returns nullopt if some column has no weight left.
std::optional<std::vector<ComplexMatrix>> renormalize_columns(std::vector<Eigen::MatrixXcd> ops) {
  if (ops.empty()) return std::nullopt;
  const Eigen::Index d = ops.front().cols();
  for (Eigen::Index j = 0; j < d; ++j) {
    double norm2 = 0.0;
    for (const auto& a : ops) norm2 += a.col(j).squaredNorm();
    if (!(norm2 > 0.0)) return std::nullopt;
    const double s = 1.0 / std::sqrt(norm2);
    for (auto& a : ops) a.col(j) *= s;
  }
  std::vector<ComplexMatrix> out;
  for (auto& a : ops) {
    if (a.cwiseAbs().maxCoeff() > 0.0) out.emplace_back(std::move(a));
  }
  return out;
}

std::vector<std::size_t> random_permutation(Rng& rng, std::size_t d) {
  std::vector<std::size_t> p(d);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = d; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

DiagonalObservable anchor_observable(std::size_t d) {
  if (d == 3) return DiagonalObservable::make({1.0, 10.0, 5.0});
  std::vector<double> l(d);
  std::iota(l.begin(), l.end(), 1.0);
  return DiagonalObservable::make(std::move(l));
}

struct TrialRecord {
  std::vector<double> deltas;  // per config.measures entry
  std::size_t branches = 0;
};

bool better(double delta, std::size_t branches, std::size_t trial, double best_delta,
            std::size_t best_branches, std::size_t best_trial) {
  if (delta != best_delta) return delta > best_delta;
  if (branches != best_branches) return branches < best_branches;
  return trial < best_trial;
}

}  // namespace

std::string_view to_string(ChannelFamily family) noexcept {
  switch (family) {
    case ChannelFamily::CyclicUniform: return "cyclic-uniform";
    case ChannelFamily::RandomIncoherent: return "random-incoherent";
    case ChannelFamily::PaperSeeded: return "paper-seeded";
  }
  return "unknown";
}

std::optional<ChannelFamily> parse_channel_family(std::string_view name) noexcept {
  for (auto f : {ChannelFamily::CyclicUniform, ChannelFamily::RandomIncoherent,
                 ChannelFamily::PaperSeeded}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

void SearchConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidConfig, why); };
  if (trials < 1) fail("trials must be at least 1");
  if (dim < 2) fail("dim must be at least 2");
  if (dim > kMaxDim) fail("dim must be at most " + std::to_string(kMaxDim));
  if (family == ChannelFamily::PaperSeeded && dim < 3) fail("the paper-seeded family needs dim >= 3");
  if (!std::isfinite(lambda_lo) || !std::isfinite(lambda_hi) || !(lambda_hi > lambda_lo)) {
    fail("lambda range must be a nonempty finite interval");
  }
  if (measures.empty()) fail("at least one measure is required");
  for (std::size_t i = 0; i < measures.size(); ++i) {
    for (std::size_t j = i + 1; j < measures.size(); ++j) {
      if (measures[i] == measures[j]) fail("measure listed twice: " + std::string(to_string(measures[i])));
    }
  }
  if (!(jitter >= 0.0 && jitter < 1.0)) fail("jitter must be in [0, 1)");
  if (workers < 1) fail("workers must be at least 1");
}

std::vector<ComplexMatrix> monomial_kraus_set(const std::vector<std::vector<std::size_t>>& targets,
                                              const std::vector<std::vector<double>>& weights,
                                              const std::vector<std::vector<Complex>>& phases) {
  if (targets.empty() || targets.size() != weights.size() || targets.size() != phases.size()) {
    throw Error(ErrorKind::DimensionMismatch, "monomial_kraus_set: branch lists disagree");
  }
  const std::size_t d = targets.front().size();
  std::vector<ComplexMatrix> ops;
  ops.reserve(targets.size());
  for (std::size_t n = 0; n < targets.size(); ++n) {
    if (targets[n].size() != d || weights[n].size() != d || phases[n].size() != d) {
      throw Error(ErrorKind::DimensionMismatch, "monomial_kraus_set: ragged branch");
    }
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
      if (targets[n][j] >= d) throw Error(ErrorKind::InvalidInput, "target row out of range");
      a(static_cast<Eigen::Index>(targets[n][j]), static_cast<Eigen::Index>(j)) =
          std::sqrt(weights[n][j]) * phases[n][j];
    }
    ops.emplace_back(std::move(a));
  }
  return ops;
}

KrausChannel sample_incoherent_channel(Rng& rng, std::size_t dim, std::size_t branches,
                                       const ToleranceConfig& tol) {
  if (dim < 1 || branches < 1) throw Error(ErrorKind::InvalidInput, "need dim >= 1 and branches >= 1");
  std::vector<std::vector<std::size_t>> targets(branches);
  std::vector<std::vector<double>> weights(branches, std::vector<double>(dim));
  std::vector<std::vector<Complex>> phases(branches, std::vector<Complex>(dim));
  for (auto& t : targets) t = random_permutation(rng, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    double total = 0.0;
    for (std::size_t n = 0; n < branches; ++n) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      weights[n][j] = -std::log(u);
      total += weights[n][j];
    }
    for (std::size_t n = 0; n < branches; ++n) {
      weights[n][j] /= total;
      phases[n][j] = rng.phase();
    }
  }
  return KrausChannel::validate_completeness(monomial_kraus_set(targets, weights, phases), tol)
      .verified(tol);
}

KrausChannel jitter_channel(Rng& rng, const KrausChannel& channel, double jitter,
                            const ToleranceConfig& tol) {
  std::vector<Eigen::MatrixXcd> ops;
  for (const auto& a : channel.kraus_ops()) {
    Eigen::MatrixXcd m = a.eigen();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (m(i, j) != Complex(0.0, 0.0)) m(i, j) *= 1.0 + jitter * rng.uniform(-1.0, 1.0);
      }
    }
    ops.push_back(std::move(m));
  }
  auto renorm = renormalize_columns(std::move(ops));
  if (!renorm) throw Error(ErrorKind::NumericalInstability, "jitter emptied a column");
  return KrausChannel::validate_completeness(std::move(*renorm), tol).verified(tol);
}

TrialSample sample_trial(const SearchConfig& config, std::size_t trial, const ToleranceConfig& tol) {
  const std::size_t d = config.dim;
  Rng rng(Rng::derive_seed(config.seed, trial));
  switch (config.family) {
    case ChannelFamily::PaperSeeded: {
      DiagonalObservable k = trial == 0 ? anchor_observable(d)
                                        : random_observable(rng, d, config.lambda_lo, config.lambda_hi);
      auto inst = d == 3 ? construct_case(k, tol) : construct_general_placement(k, tol);
      const bool jittered = trial % 2 == 1 && config.jitter > 0.0;
      KrausChannel channel = jittered ? jitter_channel(rng, inst.channel, config.jitter, tol)
                                      : inst.channel;
      return {std::move(k), PureState::uniform(d), std::move(channel), jittered};
    }
    case ChannelFamily::CyclicUniform: {
      DiagonalObservable k = random_observable(rng, d, config.lambda_lo, config.lambda_hi);
      std::vector<Complex> phi(d);
      double norm2 = 0.0;
      for (auto& a : phi) {
        a = Complex(rng.normal(), rng.normal());
        norm2 += std::norm(a);
      }
      for (auto& a : phi) a /= std::sqrt(norm2);
      auto channel = KrausChannel::validate_completeness(
                         cyclic_kraus_family(std::span<const Complex>(phi)), tol)
                         .verified(tol);
      return {std::move(k), PureState::uniform(d), std::move(channel), false};
    }
    case ChannelFamily::RandomIncoherent: {
      DiagonalObservable k = random_observable(rng, d, config.lambda_lo, config.lambda_hi);
      const std::size_t branches = 1 + rng.below(d + 1);
      auto channel = sample_incoherent_channel(rng, d, branches, tol);
      return {std::move(k), random_pure_state(rng, d), std::move(channel), false};
    }
  }
  throw Error(ErrorKind::InvalidConfig, "unknown channel family");
}

double trial_delta(const TrialSample& sample, MeasureKind measure, const ToleranceConfig& tol) {
  const DensityMatrix in = DensityMatrix::from_pure(sample.input);
  const DensityMatrix out = apply_channel(sample.channel, in, tol);
  if (measure == MeasureKind::Skew) {
    return skew_information(out, sample.observable, tol) -
           skew_information_pure(sample.input, sample.observable);
  }
  return evaluate_measure(measure, out, nullptr, tol) - evaluate_measure(measure, in, nullptr, tol);
}

namespace {

TrialRecord evaluate_trial(const SearchConfig& config, std::size_t t, const ToleranceConfig& tol) {
  const TrialSample sample = sample_trial(config, t, tol);
  const DensityMatrix in = DensityMatrix::from_pure(sample.input);
  const DensityMatrix out = apply_channel(sample.channel, in, tol);
  TrialRecord rec;
  rec.branches = sample.channel.size();
  for (MeasureKind m : config.measures) {
    double delta;
    if (m == MeasureKind::Skew) {
      delta = skew_information(out, sample.observable, tol) -
              skew_information_pure(sample.input, sample.observable);
    } else {
      delta = evaluate_measure(m, out, nullptr, tol) - evaluate_measure(m, in, nullptr, tol);
    }
    rec.deltas.push_back(delta);
  }
  return rec;
}

}  // namespace

ViolationReport run_search(const SearchConfig& config, const ToleranceConfig& tol) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<TrialRecord> records(config.trials);
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(config.workers, config.trials));
  if (workers <= 1) {
    for (std::size_t t = 0; t < config.trials; ++t) records[t] = evaluate_trial(config, t, tol);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = w; t < config.trials; t += workers) {
            records[t] = evaluate_trial(config, t, tol);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ViolationReport report;
  report.config = config;
  report.rng = std::string(Rng::kAlgorithm);
  for (std::size_t mi = 0; mi < config.measures.size(); ++mi) {
    MeasureOutcome out;
    out.measure = config.measures[mi];
    std::size_t best_trial = 0;
    for (std::size_t t = 0; t < config.trials; ++t) {
      const auto& r = records[t];
      const double delta = r.deltas[mi];
      if (delta > tol.reconstruction) ++out.violations;
      if (t == 0 || better(delta, r.branches, t, out.max_delta, records[best_trial].branches, best_trial)) {
        out.max_delta = delta;
        best_trial = t;
      }
    }
    if (out.violations > 0) {
      // Rebuild from the trial stream and re-evaluate with fresh decompositions.
      TrialSample sample = sample_trial(config, best_trial, tol);
      const double fresh = trial_delta(sample, out.measure, tol);
      if (!(fresh > tol.reconstruction) ||
          std::abs(fresh - out.max_delta) > tol.reconstruction * std::max(1.0, std::abs(fresh))) {
        throw Error(ErrorKind::NumericalInstability,
                    "best instance did not reproduce on re-evaluation", fresh);
      }
      auto inst = make_instance(std::move(sample.observable), std::move(sample.input),
                                std::move(sample.channel), ConstructionTag::Search, tol);
      validate_instance(inst, tol);
      out.best_trial = best_trial;
      out.best_delta = fresh;
      out.best = std::move(inst);
    }
    report.results.push_back(std::move(out));
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

CounterexampleInstance minimize_instance(const CounterexampleInstance& inst, const ToleranceConfig& tol) {
  validate_instance(inst, tol);
  const double keep = std::max(kMinimizeFloor, kMinimizeKeep * inst.delta);
  CounterexampleInstance current = inst;

  auto attempt = [&](std::vector<Eigen::MatrixXcd> ops) -> bool {
    auto renorm = renormalize_columns(std::move(ops));
    if (!renorm) return false;
    try {
      auto channel = KrausChannel::validate_completeness(std::move(*renorm), tol).verified(tol);
      auto cand = make_instance(current.observable, current.input, std::move(channel), current.tag, tol);
      if (cand.delta > kMinimizeFloor && cand.delta >= keep) {
        current = std::move(cand);
        return true;
      }
    } catch (const Error&) {
    }
    return false;
  };
  auto current_ops = [&] {
    std::vector<Eigen::MatrixXcd> ops;
    for (const auto& a : current.channel.kraus_ops()) ops.push_back(a.eigen());
    return ops;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t n = current.channel.size(); n-- > 0 && current.channel.size() > 1;) {
      auto ops = current_ops();
      ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(n));
      if (attempt(std::move(ops))) {
        changed = true;
        break;
      }
    }
    if (changed) continue;

    struct Entry {
      double modulus;
      std::size_t op;
      Eigen::Index row, col;
    };
    std::vector<Entry> entries;
    const auto ops = current_ops();
    for (std::size_t n = 0; n < ops.size(); ++n) {
      for (Eigen::Index j = 0; j < ops[n].cols(); ++j) {
        for (Eigen::Index i = 0; i < ops[n].rows(); ++i) {
          const double m = std::abs(ops[n](i, j));
          if (m > 0.0) entries.push_back({m, n, i, j});
        }
      }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.modulus < b.modulus; });
    for (const auto& e : entries) {
      auto trial = ops;
      trial[e.op](e.row, e.col) = 0.0;
      if (attempt(std::move(trial))) {
        changed = true;
        break;
      }
    }
  }
  validate_instance(current, tol);
  return current;
}

}  // namespace skewgain
