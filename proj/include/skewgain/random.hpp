#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

#include "skewgain/measures.hpp"

namespace skewgain {

/// Reproducible random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; floating-point conversions are done
/// here rather than through <random> distributions, whose algorithms vary
/// between standard libraries.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Seed for stream `index` of a run seeded with `seed` (splitmix64 finalizer).
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n); n > 0.
  std::size_t below(std::size_t n);
  /// Standard normal (Box-Muller).
  double normal();
  /// Uniform phase e^{i theta}.
  Complex phase();

 private:
  std::mt19937_64 engine_;
};

PureState random_pure_state(Rng& rng, std::size_t dim);
/// Random mixed state of the given rank (Ginibre construction, rank in 1..dim).
DensityMatrix random_density_matrix(Rng& rng, std::size_t dim, std::size_t rank);
/// Diagonal state with probabilities drawn from the flat simplex.
DensityMatrix random_diagonal_state(Rng& rng, std::size_t dim);
/// Nondegenerate observable with eigenvalues uniform in [lo, hi), redrawn until
/// the gaps clear the degeneracy threshold.
DiagonalObservable random_observable(Rng& rng, std::size_t dim, double lo, double hi);
/// Diagonal unitary diag(e^{i theta_1}, ..., e^{i theta_d}).
ComplexMatrix random_diagonal_phase(Rng& rng, std::size_t dim);

}  // namespace skewgain
