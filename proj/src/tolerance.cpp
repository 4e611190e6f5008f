#include "skewgain/tolerance.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "skewgain/errors.hpp"

namespace skewgain {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NumericalInstability: return "NumericalInstability";
    case ErrorKind::StateValidation: return "StateValidation";
    case ErrorKind::DegenerateObservable: return "DegenerateObservable";
    case ErrorKind::NotSorted: return "NotSorted";
    case ErrorKind::IncompleteKrausSet: return "IncompleteKrausSet";
    case ErrorKind::BadEnsemble: return "BadEnsemble";
    case ErrorKind::InvalidInstance: return "InvalidInstance";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

namespace {

double positive_or_throw(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw Error(ErrorKind::InvalidConfig, std::string("tolerance '") + name + "' must be positive");
  }
  return v;
}

}  // namespace

ToleranceConfig ToleranceConfig::parse(std::string_view text) {
  ToleranceConfig tol;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("cannot parse tolerance: ") + e.what());
  }
  if (doc.is_number()) {
    tol.validation = positive_or_throw(doc.get<double>(), "validation");
    tol.reconstruction = 10.0 * tol.validation;
    return tol;
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::InvalidConfig, "tolerance must be a number or a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number()) {
      throw Error(ErrorKind::InvalidConfig, "tolerance '" + key + "' must be numeric");
    }
    const double v = value.get<double>();
    if (key == "validation") tol.validation = positive_or_throw(v, "validation");
    else if (key == "reconstruction") tol.reconstruction = positive_or_throw(v, "reconstruction");
    else if (key == "structural_zero") tol.structural_zero = positive_or_throw(v, "structural_zero");
    else if (key == "branch_weight") tol.branch_weight = positive_or_throw(v, "branch_weight");
    else if (key == "spectral_floor") tol.spectral_floor = positive_or_throw(v, "spectral_floor");
    else throw Error(ErrorKind::InvalidConfig, "unknown tolerance field '" + key + "'");
  }
  return tol;
}

ToleranceConfig ToleranceConfig::from_env() {
  const char* raw = std::getenv("SKEWGAIN_TOL");
  if (raw == nullptr || *raw == '\0') return {};
  return parse(raw);
}

}  // namespace skewgain
