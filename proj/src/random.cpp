#include "skewgain/random.hpp"

#include <cmath>
#include <numbers>

#include "skewgain/errors.hpp"

namespace skewgain {

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "Rng::below needs n > 0");
  // Rejection keeps the result unbiased.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::phase() { return std::polar(1.0, 2.0 * std::numbers::pi * uniform()); }

PureState random_pure_state(Rng& rng, std::size_t dim) {
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (auto& a : v) a = Complex(rng.normal(), rng.normal());
  v /= v.norm();
  return PureState::make(std::move(v));
}

DensityMatrix random_density_matrix(Rng& rng, std::size_t dim, std::size_t rank) {
  if (rank == 0 || rank > dim) throw Error(ErrorKind::InvalidInput, "rank must be in 1..dim");
  Eigen::MatrixXcd g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix::make(ComplexMatrix(std::move(rho)));
}

DensityMatrix random_diagonal_state(Rng& rng, std::size_t dim) {
  std::vector<double> p(dim);
  double total = 0.0;
  for (auto& x : p) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    x = -std::log(u);
    total += x;
  }
  for (auto& x : p) x /= total;
  return DensityMatrix::diagonal(p);
}

DiagonalObservable random_observable(Rng& rng, std::size_t dim, double lo, double hi) {
  if (!(hi > lo)) throw Error(ErrorKind::InvalidInput, "observable range is empty");
  for (;;) {
    std::vector<double> l(dim);
    for (auto& x : l) x = rng.uniform(lo, hi);
    try {
      return DiagonalObservable::make(std::move(l));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateObservable) throw;
    }
  }
}

ComplexMatrix random_diagonal_phase(Rng& rng, std::size_t dim) {
  ComplexVector v(static_cast<Eigen::Index>(dim));
  for (auto& a : v) a = rng.phase();
  return ComplexMatrix::diagonal(v);
}

}  // namespace skewgain
