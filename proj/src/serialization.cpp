#include "skewgain/serialization.hpp"

#include <cmath>
#include <sstream>

#include "skewgain/errors.hpp"

namespace skewgain {

namespace {

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorKind::InvalidInput, "malformed document: " + why);
}

Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(complex_to_json(z));
  return out;
}

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    malformed("complex numbers are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) malformed("matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != j.size()) malformed("matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
  }
  return ComplexMatrix(std::move(m));
}

Json channel_to_json(const KrausChannel& channel) {
  Json ops = Json::array();
  for (const auto& a : channel.kraus_ops()) {
    Json flat = Json::array();
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t k = 0; k < a.dim(); ++k) flat.push_back(complex_to_json(a(i, k)));
    ops.push_back(std::move(flat));
  }
  return {{"dim", channel.dim()}, {"kraus", std::move(ops)}};
}

std::vector<ComplexMatrix> kraus_ops_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("kraus")) {
    malformed("channel needs \"dim\" and \"kraus\"");
  }
  if (!j["dim"].is_number_unsigned() || j["dim"].get<std::size_t>() == 0) {
    malformed("\"dim\" must be a positive integer");
  }
  const std::size_t d = j["dim"].get<std::size_t>();
  const auto& kraus = j["kraus"];
  if (!kraus.is_array() || kraus.empty()) malformed("\"kraus\" must be a non-empty array");
  std::vector<ComplexMatrix> ops;
  for (const auto& flat : kraus) {
    if (!flat.is_array() || flat.size() != d * d) {
      malformed("each Kraus operator needs dim*dim row-major entries");
    }
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(flat[i * d + k]);
    ops.emplace_back(std::move(a));
  }
  return ops;
}

KrausChannel channel_from_json(const Json& j, const ToleranceConfig& tol) {
  return KrausChannel::validate_completeness(kraus_ops_from_json(j), tol);
}

Json instance_to_json(const CounterexampleInstance& inst) {
  Json lambdas = Json::array();
  for (double l : inst.observable.lambdas()) lambdas.push_back(l);
  return {{"tag", to_string(inst.tag)},
          {"dim", inst.observable.dim()},
          {"lambdas", std::move(lambdas)},
          {"input", vector_to_json(inst.input.amplitudes())},
          {"kraus", channel_to_json(inst.channel)},
          {"delta", inst.delta},
          {"c_in", inst.c_in},
          {"c_out", inst.c_out}};
}

Json config_to_json(const SearchConfig& config) {
  Json measures = Json::array();
  for (auto m : config.measures) measures.push_back(to_string(m));
  return {{"dim", config.dim},
          {"trials", config.trials},
          {"seed", config.seed},
          {"family", to_string(config.family)},
          {"measures", std::move(measures)},
          {"lambda_range", Json::array({config.lambda_lo, config.lambda_hi})},
          {"jitter", config.jitter}};
}

Json report_to_json(const ViolationReport& report, bool include_timing) {
  Json results = Json::object();
  for (const auto& r : report.results) {
    Json entry = {{"violations", r.violations}, {"max_delta", r.max_delta}};
    entry["best_trial"] = r.best_trial ? Json(*r.best_trial) : Json(nullptr);
    entry["best_delta"] = r.best_delta ? Json(*r.best_delta) : Json(nullptr);
    entry["best"] = r.best ? instance_to_json(*r.best) : Json(nullptr);
    results[std::string(to_string(r.measure))] = std::move(entry);
  }
  return {{"config", config_to_json(report.config)},
          {"rng", report.rng},
          {"results", std::move(results)},
          {"wall_time_s", include_timing ? report.wall_time_s : 0.0}};
}

std::string report_to_csv(const ViolationReport& report) {
  std::ostringstream os;
  os << "measure,violations,max_delta,best_trial,best_delta\n";
  for (const auto& r : report.results) {
    os << to_string(r.measure) << ',' << r.violations << ',' << format_double(r.max_delta) << ',';
    if (r.best_trial) os << *r.best_trial;
    os << ',';
    if (r.best_delta) os << format_double(*r.best_delta);
    os << '\n';
  }
  return os.str();
}

std::string dump(const Json& j) { return j.dump(); }

}  // namespace skewgain
