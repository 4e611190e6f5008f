#pragma once

#include <string>

#include <json.hpp>

#include "skewgain/search.hpp"

namespace skewgain {

using Json = nlohmann::json;

/// Complex numbers are [re, im] pairs.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);

/// {"dim": d, "kraus": [[[re, im], ...], ...]}, each operator d*d entries in row-major order.
Json channel_to_json(const KrausChannel& channel);
/// Parses the operator list without checking completeness.
std::vector<ComplexMatrix> kraus_ops_from_json(const Json& j);
/// Parses and validates completeness. Error{InvalidInput} on malformed documents.
KrausChannel channel_from_json(const Json& j, const ToleranceConfig& tol = {});

/// Row-major d x d array of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"tag", "dim", "lambdas", "input", "kraus", "delta", "c_in", "c_out"}.
/// "kraus" holds the channel document.
Json instance_to_json(const CounterexampleInstance& inst);

Json config_to_json(const SearchConfig& config);

/// {"config", "rng", "results": {measure: {"violations", "max_delta",
/// "best_trial", "best_delta", "best"}}, "wall_time_s"}. With
/// `include_timing` false the wall time is written as 0 so that reports of
/// identical runs compare equal byte for byte.
Json report_to_json(const ViolationReport& report, bool include_timing);

/// Header plus one row per measure:
/// measure,violations,max_delta,best_trial,best_delta
std::string report_to_csv(const ViolationReport& report);

/// Serialized form used for every structured output: compact, keys sorted,
/// doubles in shortest round-trip form.
std::string dump(const Json& j);

}  // namespace skewgain
