#include "skewgain/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "skewgain/errors.hpp"
#include "skewgain/serialization.hpp"

namespace skewgain::cli {

namespace {

constexpr double kReferenceTolerance = 1e-8;
constexpr double kBranchTolerance = 1e-10;
constexpr std::uint64_t kPlacementSeed = 2015;

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << dump(Json{{"error", kind}, {"message", message}}) << '\n';
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open input file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("input is not valid JSON: ") + e.what());
  }
}

std::vector<double> lambdas_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::InvalidInput, "\"K\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw Error(ErrorKind::InvalidInput, "\"K\" must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

PureState state_from_json(const Json& j, std::optional<std::size_t> dim, const ToleranceConfig& tol) {
  if (j.is_string()) {
    if (j.get<std::string>() != "uniform") {
      throw Error(ErrorKind::InvalidInput, "the only state keyword is \"uniform\"");
    }
    if (!dim) throw Error(ErrorKind::InvalidInput, "\"uniform\" needs K to fix the dimension");
    return PureState::uniform(*dim);
  }
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorKind::InvalidInput, "\"state\" must be \"uniform\" or a list of [re, im] pairs");
  }
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return PureState::make(std::move(v), tol);
}

/// The optional K, state, density and channel fields of an input document.
struct InputDocument {
  std::optional<DiagonalObservable> observable;
  std::optional<DensityMatrix> state;
  std::optional<Json> channel;
};

InputDocument parse_input(const Json& doc, const ToleranceConfig& tol) {
  if (!doc.is_object()) throw Error(ErrorKind::InvalidInput, "input must be a JSON object");
  InputDocument in;
  std::optional<std::size_t> dim;
  auto fix_dim = [&](std::size_t d, const char* what) {
    if (dim && *dim != d) {
      throw Error(ErrorKind::DimensionMismatch,
                  std::string(what) + " has dimension " + std::to_string(d) + ", expected " +
                      std::to_string(*dim));
    }
    dim = d;
  };
  if (doc.contains("K")) {
    in.observable = DiagonalObservable::make(lambdas_from_json(doc["K"]), tol);
    fix_dim(in.observable->dim(), "K");
  }
  if (doc.contains("state") && doc.contains("density")) {
    throw Error(ErrorKind::InvalidInput, "give either \"state\" or \"density\", not both");
  }
  if (doc.contains("state")) {
    auto psi = state_from_json(doc["state"], dim, tol);
    fix_dim(psi.dim(), "state");
    in.state = DensityMatrix::from_pure(psi);
  }
  if (doc.contains("density")) {
    in.state = DensityMatrix::make(matrix_from_json(doc["density"]), tol);
    fix_dim(in.state->dim(), "density");
  }
  if (doc.contains("channel")) {
    in.channel = doc["channel"];
  } else if (doc.contains("kraus")) {
    in.channel = doc;
  }
  if (in.channel) {
    const auto ops = kraus_ops_from_json(*in.channel);
    fix_dim(ops.front().dim(), "channel");
  }
  return in;
}

std::string fixed6(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

// ---------------------------------------------------------------- verify-paper

struct Block {
  std::string name;
  CounterexampleInstance inst;
  Json expected;        // field -> expected value
  std::vector<double> expected_phi;
};

bool branches_uniform(const CounterexampleInstance& inst, const std::vector<double>& phi) {
  const double d = static_cast<double>(inst.input.dim());
  ComplexVector target(static_cast<Eigen::Index>(phi.size()));
  for (std::size_t i = 0; i < phi.size(); ++i) target(static_cast<Eigen::Index>(i)) = phi[i] / std::sqrt(d);
  for (const auto& a : inst.channel.kraus_ops()) {
    const auto b = apply_kraus_to_pure(a, inst.input);
    if ((b.amplitudes - target).norm() > kBranchTolerance) return false;
    if (std::abs(b.weight - 1.0 / d) > kBranchTolerance) return false;
  }
  return true;
}

Json run_block(const Block& b, bool& all_agree) {
  Json lambdas = Json::array();
  for (double l : b.inst.observable.lambdas()) lambdas.push_back(l);
  const Json got = {{"c_in", b.inst.c_in}, {"c_out", b.inst.c_out}, {"delta", b.inst.delta}};
  bool agree = true;
  Json errors = Json::object();
  for (const auto& [field, value] : b.expected.items()) {
    const double diff = std::abs(got[field].get<double>() - value.get<double>());
    errors[field] = diff;
    agree = agree && diff <= kReferenceTolerance;
  }
  const bool incoherent = b.inst.channel.incoherence() == IncoherenceStatus::Incoherent;
  const bool uniform = branches_uniform(b.inst, b.expected_phi);
  const bool positive = b.inst.delta > 0.0;
  agree = agree && incoherent && uniform && positive;
  all_agree = all_agree && agree;
  return {{"name", b.name},
          {"tag", to_string(b.inst.tag)},
          {"dim", b.inst.observable.dim()},
          {"lambdas", std::move(lambdas)},
          {"c_in", b.inst.c_in},
          {"c_out", b.inst.c_out},
          {"delta", b.inst.delta},
          {"expected", b.expected},
          {"abs_error", std::move(errors)},
          {"incoherent", incoherent},
          {"branch_uniform", uniform},
          {"delta_positive", positive},
          {"agree", agree}};
}

std::vector<double> permuted(const std::vector<double>& sorted_phi, const std::vector<std::size_t>& order) {
  std::vector<double> phi(sorted_phi.size());
  for (std::size_t s = 0; s < order.size(); ++s) phi[order[s]] = sorted_phi[s];
  return phi;
}

std::vector<Block> reference_blocks(const ToleranceConfig& tol) {
  std::vector<Block> blocks;
  const double r2 = 1.0 / std::sqrt(2.0);
  blocks.push_back({"intro", construct_intro_example(tol),
                    Json{{"c_out", 81.0 / 4.0}, {"c_in", 122.0 / 9.0}, {"delta", 81.0 / 4.0 - 122.0 / 9.0}},
                    {r2, r2, 0.0}});

  // Case i, Case ii and the printed permuted case.
  for (const auto& [name, lambdas] :
       std::vector<std::pair<std::string, std::vector<double>>>{
           {"case_i", {1.0, 10.0, 5.0}}, {"case_ii", {10.0, 1.0, 5.0}}, {"case_perm", {5.0, 10.0, 1.0}}}) {
    auto k = DiagonalObservable::make(lambdas, tol);
    const auto amps = case_amplitudes(ordering_of(k.lambdas()));
    blocks.push_back({name, construct_case(k, tol), Json{{"delta", delta_closed_form(k)}},
                      std::vector<double>(amps.begin(), amps.end())});
  }

  for (std::size_t d = 3; d <= 8; ++d) {
    std::vector<double> l(d);
    for (std::size_t i = 0; i < d; ++i) l[i] = static_cast<double>(i + 1);
    auto k = DiagonalObservable::make(l, tol);
    blocks.push_back({"general_d_" + std::to_string(d), construct_general_d(k, tol),
                      Json{{"delta", delta_general_d(l)}}, general_d_amplitudes(d)});
  }

  Rng rng(kPlacementSeed);
  for (std::size_t i = 0; i < 5; ++i) {
    const std::size_t d = 4 + i;
    auto k = random_observable(rng, d, 0.0, 10.0);
    const auto order = ascending_order(k.lambdas());
    std::vector<double> sorted;
    for (auto idx : order) sorted.push_back(k[idx]);
    blocks.push_back({"general_placement_" + std::to_string(i + 1), construct_general_placement(k, tol),
                      Json{{"delta", delta_general_d(sorted)}},
                      permuted(general_d_amplitudes(d), order)});
  }
  return blocks;
}

int cmd_verify_paper(bool table, std::ostream& out, const ToleranceConfig& tol) {
  bool all_agree = true;
  Json blocks = Json::array();
  for (const auto& b : reference_blocks(tol)) blocks.push_back(run_block(b, all_agree));
  if (table) {
    out << std::left << std::setw(22) << "block" << std::setw(14) << "c_in" << std::setw(14) << "c_out"
        << std::setw(14) << "delta" << "agree\n";
    for (const auto& b : blocks) {
      out << std::setw(22) << b["name"].get<std::string>() << std::setw(14)
          << fixed6(b["c_in"].get<double>()) << std::setw(14) << fixed6(b["c_out"].get<double>())
          << std::setw(14) << fixed6(b["delta"].get<double>()) << (b["agree"].get<bool>() ? "yes" : "NO")
          << '\n';
    }
  } else {
    out << dump(Json{{"tolerance", kReferenceTolerance}, {"all_agree", all_agree}, {"blocks", blocks}}) << '\n';
  }
  return all_agree ? kOk : kReferenceMismatch;
}

// --------------------------------------------------------------------- compute

int cmd_compute(const std::string& measure_name, const std::string& path, std::ostream& out,
                const ToleranceConfig& tol) {
  const auto measure = parse_measure(measure_name);
  if (!measure) throw Error(ErrorKind::InvalidInput, "unknown measure '" + measure_name + "'");
  const auto in = parse_input(read_json_file(path), tol);
  if (!in.state) throw Error(ErrorKind::InvalidInput, "input needs \"state\" or \"density\"");
  if (*measure == MeasureKind::Skew && !in.observable) {
    throw Error(ErrorKind::InvalidInput, "the skew measure needs \"K\"");
  }
  const double value =
      evaluate_measure(*measure, *in.state, in.observable ? &*in.observable : nullptr, tol);
  out << dump(Json{{"measure", to_string(*measure)}, {"value", value}, {"dim", in.state->dim()}}) << '\n';
  return kOk;
}

// --------------------------------------------------------------- check-channel

constexpr std::size_t kOracleTrials = 200;

int cmd_check_channel(const std::string& path, std::ostream& out, const ToleranceConfig& tol) {
  const auto in = parse_input(read_json_file(path), tol);
  if (!in.channel) throw Error(ErrorKind::InvalidInput, "input needs a channel");
  const auto ops = kraus_ops_from_json(*in.channel);
  const double deficit = completeness_deficit(ops);
  const bool complete = deficit <= tol.validation * std::sqrt(double(ops.front().dim()));
  const bool incoherent = is_incoherent_set(ops, tol);
  const bool oracle = incoherence_oracle(ops, kOracleTrials, kPlacementSeed, tol);
  out << dump(Json{{"complete", complete},
                   {"completeness_deficit", deficit},
                   {"incoherent", incoherent},
                   {"oracle_agrees", oracle == incoherent}})
      << '\n';
  return kOk;
}

// ------------------------------------------------------------------- construct

int cmd_construct(const std::string& tag_name, const std::vector<double>& lambdas,
                  std::optional<std::size_t> dim, bool minimize, std::ostream& out,
                  const ToleranceConfig& tol) {
  auto observable = [&]() {
    if (!lambdas.empty() && dim) throw Error(ErrorKind::InvalidInput, "give --lambdas or --dim, not both");
    if (!lambdas.empty()) return DiagonalObservable::make(lambdas, tol);
    if (!dim) throw Error(ErrorKind::InvalidInput, "construction needs --lambdas or --dim");
    std::vector<double> l(*dim);
    for (std::size_t i = 0; i < *dim; ++i) l[i] = static_cast<double>(i + 1);
    return DiagonalObservable::make(std::move(l), tol);
  };

  std::optional<CounterexampleInstance> inst;
  if (tag_name == "intro") {
    if (!lambdas.empty() || dim) throw Error(ErrorKind::InvalidInput, "the intro instance is fixed");
    inst = construct_intro_example(tol);
  } else if (tag_name == "case" || tag_name == "case_i" || tag_name == "case_ii" || tag_name == "case_perm") {
    inst = construct_case(observable(), tol);
    if (tag_name != "case" && to_string(inst->tag) != tag_name) {
      throw Error(ErrorKind::InvalidInput, "K has the ordering of " + std::string(to_string(inst->tag)) +
                                               ", not " + tag_name);
    }
  } else if (tag_name == "general_d") {
    inst = construct_general_d(observable(), tol);
  } else if (tag_name == "general_placement") {
    inst = construct_general_placement(observable(), tol);
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown construction tag '" + tag_name + "'");
  }
  if (minimize) inst = minimize_instance(*inst, tol);
  out << dump(instance_to_json(*inst)) << '\n';
  return kOk;
}

// ---------------------------------------------------------------------- search

struct SearchFlags {
  std::size_t dim = 3;
  long long trials = 1000;
  std::uint64_t seed = 0;
  std::string family = "paper-seeded";
  std::vector<std::string> measures{"skew", "l1", "relent"};
  double lambda_lo = 0.0;
  double lambda_hi = 10.0;
  double jitter = 0.05;
  unsigned workers = 1;
  bool timing = false;
  std::string csv_path;
};

int cmd_search(const SearchFlags& f, std::ostream& out, std::ostream& err, const ToleranceConfig& tol) {
  SearchConfig config;
  config.dim = f.dim;
  if (f.trials < 1) throw Error(ErrorKind::InvalidConfig, "trials must be at least 1");
  config.trials = static_cast<std::size_t>(f.trials);
  config.seed = f.seed;
  const auto family = parse_channel_family(f.family);
  if (!family) throw Error(ErrorKind::InvalidConfig, "unknown channel family '" + f.family + "'");
  config.family = *family;
  config.measures.clear();
  for (const auto& name : f.measures) {
    const auto m = parse_measure(name);
    if (!m) throw Error(ErrorKind::InvalidConfig, "unknown measure '" + name + "'");
    config.measures.push_back(*m);
  }
  config.lambda_lo = f.lambda_lo;
  config.lambda_hi = f.lambda_hi;
  config.jitter = f.jitter;
  config.workers = f.workers;
  config.validate();

  const auto report = run_search(config, tol);
  out << dump(report_to_json(report, f.timing)) << '\n';
  if (!f.csv_path.empty()) {
    std::ofstream csv(f.csv_path);
    if (!csv) throw Error(ErrorKind::InvalidInput, "cannot write '" + f.csv_path + "'");
    csv << report_to_csv(report);
  }
  err << "search: " << config.trials << " trials in " << fixed6(report.wall_time_s) << " s\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Skew-information coherence checks, reference constructions and violation search", "skewgain"};
  app.require_subcommand(1);

  bool table = false;
  auto* verify = app.add_subcommand("verify-paper", "Reproduce every closed-form value and construction");
  verify->add_flag("--table", table, "Human-readable table instead of JSON");

  std::string measure;
  std::string compute_input;
  auto* compute = app.add_subcommand("compute", "Evaluate a coherence measure on a state");
  compute->add_option("--measure", measure, "skew | l1 | relent")->required();
  compute->add_option("--input", compute_input, "JSON input document")->required();

  std::string channel_input;
  auto* check = app.add_subcommand("check-channel", "Check completeness and incoherence of a Kraus set");
  check->add_option("--input", channel_input, "JSON channel or input document")->required();

  std::string tag;
  std::vector<double> lambdas;
  std::optional<std::size_t> construct_dim;
  bool minimize = false;
  auto* construct = app.add_subcommand("construct", "Emit a counterexample instance");
  construct->add_option("--tag", tag, "intro | case | case_i | case_ii | case_perm | general_d | general_placement")
      ->required();
  construct->add_option("--lambdas", lambdas, "Eigenvalues of K")->delimiter(',');
  construct->add_option("--dim", construct_dim, "Use K = diag(1, ..., N)");
  construct->add_flag("--minimize", minimize, "Greedily shrink the instance");

  SearchFlags sf;
  auto* search = app.add_subcommand("search", "Randomized search for monotonicity violations");
  search->add_option("--dim", sf.dim, "Hilbert space dimension")->required();
  search->add_option("--trials", sf.trials, "Number of trials")->required();
  search->add_option("--seed", sf.seed, "64-bit seed")->required();
  search->add_option("--family", sf.family, "cyclic-uniform | random-incoherent | paper-seeded")->required();
  search->add_option("--measures", sf.measures, "Subset of skew,l1,relent")->delimiter(',');
  search->add_option("--lambda-lo", sf.lambda_lo, "Lower end of the eigenvalue range");
  search->add_option("--lambda-hi", sf.lambda_hi, "Upper end of the eigenvalue range");
  search->add_option("--jitter", sf.jitter, "Relative amplitude noise on odd paper-seeded trials");
  search->add_option("--workers", sf.workers, "Worker threads");
  search->add_flag("--timing", sf.timing, "Record wall time in the report");
  search->add_option("--csv", sf.csv_path, "Also write a per-measure CSV summary");

  std::vector<std::string> argv_storage{"skewgain"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidInput;
  }

  try {
    const ToleranceConfig tol = ToleranceConfig::from_env();
    if (verify->parsed()) return cmd_verify_paper(table, out, tol);
    if (compute->parsed()) return cmd_compute(measure, compute_input, out, tol);
    if (check->parsed()) return cmd_check_channel(channel_input, out, tol);
    if (construct->parsed()) return cmd_construct(tag, lambdas, construct_dim, minimize, out, tol);
    if (search->parsed()) return cmd_search(sf, out, err, tol);
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what());
    return kInvalidInput;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace skewgain::cli
