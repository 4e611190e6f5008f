#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <optional>
#include <vector>

#include "skewgain/channels.hpp"

namespace skewgain {

enum class ConstructionTag { Intro, CaseI, CaseII, CasePerm, GeneralD, GeneralPlacement, Search };

std::string_view to_string(ConstructionTag tag) noexcept;
std::optional<ConstructionTag> parse_construction_tag(std::string_view name) noexcept;

/// A pure input state, an incoherent channel and the skew information on
/// both sides. A positive `delta` certifies that the skew information grew.
struct CounterexampleInstance {
  DiagonalObservable observable;
  PureState input;
  KrausChannel channel;  // incoherence() == Incoherent
  DensityMatrix output;  // channel applied to |input><input|
  double c_in;           // skew_information_pure(input, observable)
  double c_out;          // skew_information(output, observable)
  double delta;          // c_out - c_in
  ConstructionTag tag;
};

/// Applies the channel, evaluates both sides and checks incoherence.
/// Throws Error{InvalidInstance} if the channel is not structurally incoherent.
CounterexampleInstance make_instance(DiagonalObservable k, PureState input, KrausChannel channel,
                                     ConstructionTag tag, const ToleranceConfig& tol = {});

/// Recomputes everything from scratch and throws Error{InvalidInstance} if the
/// channel is incomplete or not incoherent, if the stored output differs from
/// the recomputed one by more than tol.reconstruction in Frobenius norm, or if
/// c_in, c_out or delta drift by more than tol.reconstruction.
void validate_instance(const CounterexampleInstance& inst, const ToleranceConfig& tol = {});

/// The cyclic Kraus family carrying `amplitudes`: operator i (zero-based) has
/// amplitudes[s] at row s, column (s + i) mod d. Every operator maps the
/// uniform state to amplitudes / sqrt(d), and the set is complete whenever
/// sum |amplitudes[s]|^2 = 1.
std::vector<ComplexMatrix> cyclic_kraus_family(std::span<const Complex> amplitudes);
std::vector<ComplexMatrix> cyclic_kraus_family(std::span<const double> amplitudes);

/// One-based column index m_x = x - floor((x - 1)/d) d, which wraps x into 1..d.
std::size_t cyclic_index(std::size_t x, std::size_t d);

/// K = diag(1, 10, 5), uniform psi, phi = (1/sqrt2, 1/sqrt2, 0).
CounterexampleInstance construct_intro_example(const ToleranceConfig& tol = {});

/// Zero-based indices of the smallest, middle and largest eigenvalue of a
/// three-level observable.
using Ordering3 = std::array<std::size_t, 3>;
Ordering3 ordering_of(std::span<const double> lambdas);

/// Amplitudes for d = 3: 1/sqrt2 at the smallest eigenvalue, 1/sqrt6 at the
/// middle one, 1/sqrt3 at the largest.
std::array<double, 3> case_amplitudes(const Ordering3& order);

/// Three-level construction for any ordering of K. The tag is CaseI for
/// lambda_1 < lambda_3 < lambda_2, CaseII for lambda_2 < lambda_3 < lambda_1
/// and CasePerm otherwise. Throws Error{DimensionMismatch} unless d = 3.
CounterexampleInstance construct_case(const DiagonalObservable& k, const ToleranceConfig& tol = {});

/// Closed-form gain for d = 3 under `order` = (smallest, middle, largest):
/// (l_mid - l_min)(3 l_max - 3 l_mid + l_max - l_min) / 36.
/// The lambdas are not validated, so degenerate inputs may be used to probe the formula.
double delta_closed_form(std::span<const double> lambdas, const Ordering3& order);
/// Same, with the ordering read off K.
double delta_closed_form(const DiagonalObservable& k);

/// (sqrt(3/2d), sqrt(1/2d), sqrt(1/d), ..., sqrt(1/d)); requires d >= 3.
std::vector<double> general_d_amplitudes(std::size_t d);

/// General-d construction for strictly ascending eigenvalues. Throws
/// Error{NotSorted} otherwise and Error{DimensionMismatch} for d < 3.
CounterexampleInstance construct_general_d(const DiagonalObservable& k, const ToleranceConfig& tol = {});

/// (l_2 - l_1)/(4 d^2) [4 sum_{i>=3} l_i - (2d - 5) l_1 - (2d - 3) l_2] for
/// ascending lambdas, d >= 3. Not validated beyond the length.
double delta_general_d(std::span<const double> ascending_lambdas);

/// Indices of the eigenvalues in ascending order, ties broken by index.
std::vector<std::size_t> ascending_order(std::span<const double> lambdas);

/// General-d construction for arbitrary eigenvalue order: the cyclic family
/// is built on the sorted spectrum and conjugated with the permutation that
/// maps sorted positions back to the original indices, so sqrt(3/2d) lands on
/// the smallest eigenvalue and sqrt(1/2d) on the second smallest.
CounterexampleInstance construct_general_placement(const DiagonalObservable& k,
                                                   const ToleranceConfig& tol = {});

}  // namespace skewgain
