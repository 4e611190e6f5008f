#pragma once

#include <algorithm>
#include <string_view>

namespace skewgain {

/// One tolerance bundle shared by every validator. Checks are hybrid:
/// a quantity passes when |x| <= tol * max(1, scale).
struct ToleranceConfig {
  double validation = 1e-9;       // hermiticity, trace, PSD, normalization, residues
  double reconstruction = 1e-8;   // sqrt reconstruction, delta agreement, violation slack
  double structural_zero = 1e-12; // relative modulus below which a Kraus entry counts as zero
  double branch_weight = 1e-12;   // branches lighter than this are skipped by the oracle
  double spectral_floor = 1e-13;  // eigenvalues below this fraction of the largest are zero in psd_sqrt

  static ToleranceConfig defaults() { return {}; }

  /// Reads SKEWGAIN_TOL. Accepts a bare number (sets `validation`, and
  /// `reconstruction` to ten times that) or a JSON object with any of the
  /// field names above. Unset or empty means defaults; malformed throws
  /// Error{InvalidConfig}.
  static ToleranceConfig from_env();
  static ToleranceConfig parse(std::string_view text);

  static double scaled(double tol, double scale) { return tol * std::max(1.0, scale); }
};

}  // namespace skewgain
