#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "circirf/covariance.hpp"
#include "circirf/kriging.hpp"
#include "circirf/nil_space.hpp"
#include "circirf/simulate.hpp"
#include "csv.hpp"
#include "verify.hpp"

namespace circirf::cli {

using nlohmann::json;

std::string command_name(Command c) {
  switch (c) {
    case Command::Fit: return "fit";
    case Command::Predict: return "predict";
    case Command::Simulate: return "simulate";
    case Command::Verify: return "verify";
  }
  return "?";
}

namespace {

Command parse_command(const std::string& s) {
  for (Command c : {Command::Fit, Command::Predict, Command::Simulate, Command::Verify})
    if (command_name(c) == s) return c;
  throw ConfigurationError("unknown command '" + s + "'");
}

bool is_named_kernel(const std::string& k) { return k == "spline-m1" || k == "spline-m2" || k == "brownian-bridge"; }

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigurationError("cannot parse '" + item + "' in " + what);
    out.push_back(v);
  }
  if (out.empty()) throw ConfigurationError(what + " is empty");
  return out;
}

// Checks that `j` carries only keys from `allowed`, so typos do not pass silently.
void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigurationError(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigurationError("unknown key '" + item.key() + "' in " + where);
  }
}

}  // namespace

SpectralModel spectrum_from_json(const json& j) {
  check_keys(j, {"type", "kappa", "values", "a", "p", "n_max"}, "spectrum");
  const std::string type = j.at("type").get<std::string>();
  const int kappa = j.at("kappa").get<int>();
  if (type == "list") return SpectralModel::list(kappa, j.at("values").get<std::vector<double>>());
  if (type == "power")
    return SpectralModel::power(kappa, j.at("a").get<double>(), j.at("p").get<double>(),
                                j.value("n_max", kDefaultSeriesTerms));
  throw ConfigurationError("spectrum type must be 'list' or 'power', got '" + type + "'");
}

json spectrum_to_json(const SpectralModel& model) {
  if (model.kind() == SpectralModel::Kind::List)
    return {{"type", "list"}, {"kappa", model.kappa()}, {"values", model.values()}};
  return {{"type", "power"},
          {"kappa", model.kappa()},
          {"a", model.power_scale()},
          {"p", model.power_exponent()},
          {"n_max", model.n_max()}};
}

json to_json(const RunConfig& c) {
  json model = {{"kernel", c.model.kernel}, {"kappa", c.model.kappa}, {"nugget", c.model.nugget}};
  model["tau_points"] = c.model.tau_points.empty() ? json("equispaced") : json(c.model.tau_points);
  model["spectrum"] = c.model.spectrum ? *c.model.spectrum : json(nullptr);
  json io = {{"input", c.io.input},           {"output", c.io.output},
             {"degrees", c.io.degrees},       {"grid_size", c.io.grid_size},
             {"realizations", c.io.realizations}, {"realization", c.io.realization}};
  io["prediction_points"] = c.io.prediction_points ? json(*c.io.prediction_points) : json(nullptr);
  json verify = {{"suites", c.verify.suites},
                 {"realizations", c.verify.realizations},
                 {"tol_factor", c.verify.tol_factor},
                 {"inject_negative_gamma", c.verify.inject_negative_gamma}};
  return {{"command", command_name(c.command)}, {"seed", c.seed}, {"model", model}, {"io", io}, {"verify", verify}};
}

RunConfig config_from_json(const json& j) {
  check_keys(j, {"command", "seed", "model", "io", "verify"}, "config");
  RunConfig c;
  if (j.contains("command")) c.command = parse_command(j.at("command").get<std::string>());
  c.seed = j.value("seed", c.seed);
  if (j.contains("model")) {
    const json& m = j.at("model");
    check_keys(m, {"kernel", "kappa", "nugget", "tau_points", "spectrum"}, "model");
    c.model.kernel = m.value("kernel", c.model.kernel);
    c.model.kappa = m.value("kappa", c.model.kappa);
    c.model.nugget = m.value("nugget", c.model.nugget);
    if (m.contains("tau_points")) {
      const json& t = m.at("tau_points");
      if (t.is_string()) {
        if (t.get<std::string>() != "equispaced") throw ConfigurationError("tau_points must be 'equispaced' or a list");
      } else {
        c.model.tau_points = t.get<std::vector<double>>();
      }
    }
    if (m.contains("spectrum") && !m.at("spectrum").is_null()) c.model.spectrum = m.at("spectrum");
  }
  if (j.contains("io")) {
    const json& io = j.at("io");
    check_keys(io, {"input", "output", "degrees", "grid_size", "realizations", "realization", "prediction_points"}, "io");
    c.io.input = io.value("input", c.io.input);
    c.io.output = io.value("output", c.io.output);
    c.io.degrees = io.value("degrees", c.io.degrees);
    c.io.grid_size = io.value("grid_size", c.io.grid_size);
    c.io.realizations = io.value("realizations", c.io.realizations);
    c.io.realization = io.value("realization", c.io.realization);
    if (io.contains("prediction_points") && !io.at("prediction_points").is_null())
      c.io.prediction_points = io.at("prediction_points").get<std::vector<double>>();
  }
  if (j.contains("verify")) {
    const json& v = j.at("verify");
    check_keys(v, {"suites", "realizations", "tol_factor", "inject_negative_gamma"}, "verify");
    c.verify.suites = v.value("suites", c.verify.suites);
    c.verify.realizations = v.value("realizations", c.verify.realizations);
    c.verify.tol_factor = v.value("tol_factor", c.verify.tol_factor);
    c.verify.inject_negative_gamma = v.value("inject_negative_gamma", c.verify.inject_negative_gamma);
  }
  return c;
}

namespace {

struct Overrides {
  std::optional<std::string> config, kernel, out, input, at, tau, suites;
  std::optional<int> kappa, grid_size, realizations, realization;
  std::optional<double> nugget;
  std::optional<std::uint64_t> seed;
  bool degrees = false;
  bool inject_negative_gamma = false;
};

void add_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON run configuration; flags override it");
  sub->add_option("--kappa", o.kappa, "Order of the intrinsic random function");
  sub->add_option("--nugget", o.nugget, "Nugget variance / smoothing parameter alpha");
  sub->add_option("--kernel", o.kernel,
                  "spline-m1 | spline-m2 | brownian-bridge | list:g_k,g_k+1,... | power:a,p[,n_max]");
  sub->add_option("--seed", o.seed, "Master random seed");
  sub->add_flag("--degrees", o.degrees, "Angles in files and flags are degrees");
  sub->add_option("--grid-size", o.grid_size, "Simulation grid size G");
  sub->add_option("--out", o.out, "Output path; the resolved config goes to <out>.config.json");
}

// Applies `o` on top of `c`, then fills derived defaults and validates.
RunConfig resolve(RunConfig c, const Overrides& o) {
  if (o.kappa) c.model.kappa = *o.kappa;
  if (o.nugget) c.model.nugget = *o.nugget;
  if (o.seed) c.seed = *o.seed;
  if (o.degrees) c.io.degrees = true;
  if (o.grid_size) c.io.grid_size = *o.grid_size;
  if (o.out) c.io.output = *o.out;
  if (o.input) c.io.input = *o.input;
  if (o.at) c.io.prediction_points = parse_list(*o.at, "--at");
  if (o.tau) c.model.tau_points = parse_list(*o.tau, "--tau");
  if (o.realizations) {
    c.io.realizations = *o.realizations;
    c.verify.realizations = *o.realizations;
  }
  if (o.realization) c.io.realization = *o.realization;
  if (o.suites) {
    c.verify.suites.clear();
    std::stringstream ss(*o.suites);
    std::string s;
    while (std::getline(ss, s, ',')) c.verify.suites.push_back(s);
  }
  if (o.inject_negative_gamma) c.verify.inject_negative_gamma = true;

  if (o.kernel) {
    const std::string& k = *o.kernel;
    if (is_named_kernel(k)) {
      c.model.kernel = k;
    } else if (k.rfind("list:", 0) == 0) {
      c.model.kernel = "custom";
      c.model.spectrum = json{{"type", "list"}, {"kappa", c.model.kappa}, {"values", parse_list(k.substr(5), "--kernel")}};
    } else if (k.rfind("power:", 0) == 0) {
      const auto v = parse_list(k.substr(6), "--kernel");
      if (v.size() != 2 && v.size() != 3) throw ConfigurationError("--kernel power:a,p[,n_max] takes two or three numbers");
      c.model.kernel = "custom";
      c.model.spectrum = json{{"type", "power"}, {"kappa", c.model.kappa}, {"a", v[0]}, {"p", v[1]}};
      if (v.size() == 3) (*c.model.spectrum)["n_max"] = static_cast<int>(v[2]);
    } else {
      throw ConfigurationError("unknown kernel '" + k + "'");
    }
  }

  if (c.model.kappa < 1) throw ConfigurationError("kappa must be at least 1");
  if (!(c.model.nugget >= 0.0)) throw ConfigurationError("nugget must be non-negative");
  if (c.io.grid_size < 3) throw ConfigurationError("grid size must be at least 3");
  if (c.io.realizations < 1 || c.verify.realizations < 1) throw ConfigurationError("realizations must be positive");

  // Spectral series are cut at the Nyquist frequency of the grid when simulating.
  const int series_terms = c.command == Command::Simulate ? (c.io.grid_size - 1) / 2 : kDefaultSeriesTerms;
  if (is_named_kernel(c.model.kernel)) {
    if (c.model.kappa != 1) throw ConfigurationError("kernel '" + c.model.kernel + "' implies kappa = 1");
    const double p = c.model.kernel == "spline-m2" ? 4.0 : 2.0;
    c.model.spectrum = json{{"type", "power"}, {"kappa", 1}, {"a", 2.0}, {"p", p}, {"n_max", series_terms}};
  } else if (c.model.kernel == "custom") {
    if (!c.model.spectrum) throw ConfigurationError("kernel 'custom' needs a spectrum block");
    json& s = *c.model.spectrum;
    if (!s.contains("kappa")) s["kappa"] = c.model.kappa;
    if (s.at("kappa").get<int>() != c.model.kappa)
      throw ConfigurationError("spectrum kappa " + s.at("kappa").dump() + " differs from model kappa " +
                               std::to_string(c.model.kappa));
    if (s.value("type", "") == "power" && !s.contains("n_max")) s["n_max"] = series_terms;
  } else {
    throw ConfigurationError("unknown kernel '" + c.model.kernel + "'");
  }
  spectrum_from_json(*c.model.spectrum);  // validates

  if (c.io.output.empty()) throw ConfigurationError("an output path is required (--out)");
  if ((c.command == Command::Fit || c.command == Command::Predict) && c.io.input.empty())
    throw ConfigurationError("an input CSV is required (--input)");
  return c;
}

Angle to_angle(double v, bool degrees) { return degrees ? Angle::from_degrees(v) : Angle(v); }

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigurationError("cannot write '" + path + "'");
  return os;
}

UniversalKrigingModel fit_from_config(const RunConfig& c, const Dataset& data) {
  std::optional<std::vector<Angle>> tau;
  if (!c.model.tau_points.empty()) {
    tau.emplace();
    for (double t : c.model.tau_points) tau->push_back(to_angle(t, c.io.degrees));
  }
  const TrendBasis basis = TrendBasis::cardinal(build_rkhs_basis(c.model.kappa, tau));
  return fit_universal(data, IntrinsicCovariance(spectrum_from_json(*c.model.spectrum)), c.model.nugget, basis);
}

int cmd_fit(const RunConfig& c, std::ostream& out) {
  const auto input = read_dataset(c.io.input, c.io.degrees, c.io.realization);
  const auto model = fit_from_config(c, input.data);
  std::vector<double> fitted;
  for (const auto& t : input.data.points()) fitted.push_back(model.predict_value(t));
  const std::vector<double> c_vec(model.dual_weights().data(), model.dual_weights().data() + model.dual_weights().size());
  const std::vector<double> d_vec(model.trend_coeffs().data(), model.trend_coeffs().data() + model.trend_coeffs().size());
  const json result = {{"kappa", c.model.kappa},       {"nugget", c.model.nugget},
                       {"observations", input.data.size()}, {"angles", input.angles},
                       {"values", input.data.values()}, {"fitted", fitted},
                       {"dual_weights", c_vec},          {"trend_coeffs", d_vec}};
  auto os = open_output(c.io.output);
  os << result.dump(2) << '\n';
  out << "fit: " << input.data.size() << " observations -> " << c.io.output << '\n';
  return kExitOk;
}

int cmd_predict(const RunConfig& c, std::ostream& out) {
  const auto input = read_dataset(c.io.input, c.io.degrees, c.io.realization);
  const auto model = fit_from_config(c, input.data);
  const std::vector<double> angles = c.io.prediction_points ? *c.io.prediction_points : input.angles;
  std::vector<Prediction> predictions;
  for (double a : angles) predictions.push_back(model.predict(to_angle(a, c.io.degrees)));
  auto os = open_output(c.io.output);
  write_predictions(os, angles, predictions);
  out << "predict: " << predictions.size() << " points -> " << c.io.output << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  std::vector<Realization> paths;
  if (c.model.kernel == "brownian-bridge")
    paths = simulate_brownian_bridge(c.io.grid_size, c.io.realizations, c.seed);
  else
    paths = simulate_irf(spectrum_from_json(*c.model.spectrum), LowOrderPart::none(), c.io.realizations,
                         c.io.grid_size, c.seed);
  auto os = open_output(c.io.output);
  write_realizations(os, paths, c.io.degrees);
  out << "simulate: " << paths.size() << " realizations of " << c.io.grid_size << " points -> " << c.io.output << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const auto outcome = run_verify(c);
  auto os = open_output(c.io.output);
  os << outcome.report.dump(2) << '\n';
  int failed = 0;
  for (const auto& rec : outcome.report.at("checks")) {
    if (rec.at("pass").get<bool>()) continue;
    ++failed;
    out << "FAILED " << rec.at("check_name").get<std::string>() << ": statistic " << rec.at("statistic").dump()
        << ", threshold " << rec.at("threshold").dump();
    if (rec.contains("status")) out << " (" << rec.at("status").get<std::string>() << ")";
    out << '\n';
  }
  out << "verify: " << outcome.report.at("checks").size() << " checks, " << failed << " failed -> " << c.io.output
      << '\n';
  return outcome.passed ? kExitOk : kExitVerifyFailed;
}

const char* error_class(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return "input";
  if (dynamic_cast<const DuplicateLocationError*>(&e)) return "duplicate location";
  if (dynamic_cast<const InsufficientDataError*>(&e)) return "insufficient data";
  if (dynamic_cast<const UnsupportedOrderError*>(&e)) return "unsupported order";
  if (dynamic_cast<const InvalidShiftError*>(&e)) return "invalid shift";
  if (dynamic_cast<const AliasingError*>(&e)) return "aliasing";
  if (dynamic_cast<const ConfigurationError*>(&e)) return "configuration";
  if (dynamic_cast<const ConditioningError*>(&e)) return "conditioning";
  if (dynamic_cast<const InfiniteNormError*>(&e)) return "infinite norm";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
  if (dynamic_cast<const json::exception*>(&e)) return "configuration";
  return "internal";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const DuplicateLocationError*>(&e) ||
      dynamic_cast<const InsufficientDataError*>(&e))
    return kExitInput;
  if (dynamic_cast<const ConditioningError*>(&e) || dynamic_cast<const InfiniteNormError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const NumericalError*>(&e))
    return kExitModel;
  return kExitUsage;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Intrinsic random functions on the circle: kriging, smoothing splines and simulation", "circirf"};
  app.require_subcommand(1);
  Overrides o;

  auto* fit = app.add_subcommand("fit", "Fit a kriging / smoothing-spline model and write its coefficients as JSON");
  auto* predict = app.add_subcommand("predict", "Fit and write angle,prediction,kriging_variance");
  auto* simulate = app.add_subcommand("simulate", "Write realizations as angle,value,realization_index");
  auto* verify = app.add_subcommand("verify", "Run invariant suites and write a JSON report");
  for (auto* sub : {fit, predict, simulate, verify}) add_options(sub, o);
  for (auto* sub : {fit, predict}) {
    sub->add_option("--input", o.input, "CSV with header angle,value");
    sub->add_option("--realization", o.realization, "Row filter when the CSV has a realization_index column");
    sub->add_option("--tau", o.tau, "Comma-separated unisolvent points for the cardinal trend basis");
  }
  predict->add_option("--at", o.at, "Comma-separated prediction angles (default: the data angles)");
  simulate->add_option("--realizations", o.realizations, "Number of realizations");
  verify->add_option("--realizations", o.realizations, "Bridge realizations for the Monte Carlo suites");
  verify->add_option("--suites", o.suites, "Comma-separated subset of the suites");
  verify->add_flag("--inject-negative-gamma", o.inject_negative_gamma,
                   "Test hook: corrupt the kernel with a negative coefficient before the PSD suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Command command = Command::Predict;
    if (fit->parsed()) command = Command::Fit;
    if (simulate->parsed()) command = Command::Simulate;
    if (verify->parsed()) command = Command::Verify;

    RunConfig base;
    if (o.config) {
      std::ifstream in(*o.config);
      if (!in) throw ConfigurationError("cannot open config '" + *o.config + "'");
      base = config_from_json(json::parse(in));
    }
    base.command = command;
    const RunConfig config = resolve(base, o);

    {
      auto os = open_output(config.io.output + ".config.json");
      os << to_json(config).dump(2) << '\n';
    }
    switch (command) {
      case Command::Fit: return cmd_fit(config, out);
      case Command::Predict: return cmd_predict(config, out);
      case Command::Simulate: return cmd_simulate(config, out);
      case Command::Verify: return cmd_verify(config, out);
    }
  } catch (const std::exception& e) {
    err << "circirf: " << error_class(e) << " error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitOk;
}

}  // namespace circirf::cli
