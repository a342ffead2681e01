#include "qapprox/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qapprox/axiomatic.hpp"
#include "qapprox/error.hpp"
#include "qapprox/format.hpp"
#include "qapprox/linearize.hpp"
#include "qapprox/oscillation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace qapprox::cli {

namespace {

bool verbose() {
  const char* level = std::getenv("QAPPROX_LOG");
  return level != nullptr && (std::string(level) == "debug" || std::string(level) == "info");
}

template <typename T>
T required(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string(where) + ": missing '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + ": bad '" + key + "': " + e.what());
  }
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return std::nullopt;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + ": bad '" + key + "': " + e.what());
  }
}

// A grid bound may be a scalar shared by every axis or one value per axis.
std::vector<double> axis_values(const json& grid, const char* key, std::size_t dim) {
  if (!grid.contains(key)) throw ConfigError(std::string("grid: missing '") + key + "'");
  const json& v = grid.at(key);
  if (v.is_number()) return std::vector<double>(dim, v.get<double>());
  auto values = required<std::vector<double>>(grid, key, "grid");
  if (values.size() != dim) {
    throw ConfigError(std::string("grid: '") + key + "' needs " + std::to_string(dim) + " entries");
  }
  return values;
}

BasisSpec parse_basis(const json& list, const std::vector<std::string>& vars, const char* what) {
  if (!list.is_array() || list.empty()) throw ConfigError(std::string("model: ") + what + " must be a nonempty list");
  BasisSpec basis;
  for (const auto& item : list) {
    if (!item.is_string()) throw ConfigError(std::string("model: ") + what + " entries must be strings");
    basis.push_back(parse(item.get<std::string>(), vars));
  }
  return basis;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

json coefficients_json(const Coefficients& c) {
  json j;
  j["numerator"] = c.numerator;
  if (!c.denominator.empty()) j["denominator"] = c.denominator;
  return j;
}

Coefficients coefficients_from_json(const json& j) {
  Coefficients c;
  c.numerator = required<std::vector<double>>(j, "numerator", "coefficients");
  c.denominator = optional_field<std::vector<double>>(j, "denominator", "coefficients").value_or(std::vector<double>{});
  return c;
}

json alternation_json(const AlternationReport& r, const SampledFunction& f) {
  json j;
  j["exact_fit"] = r.exact_fit;
  j["count"] = r.count;
  j["tau"] = r.tau;
  j["max_abs_residual"] = r.max_abs;
  j["indices"] = r.points;
  std::vector<double> xs;
  for (std::size_t k : r.points) xs.push_back(f.points[k][0]);
  j["points"] = xs;
  j["signs"] = r.signs;
  return j;
}

std::vector<double> read_residual_column(const fs::path& path, std::vector<double>& xs) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open surface file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("surface file is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.size() != 4 || header[0] != "x1" || header[3] != "residual") {
    throw ConfigError("verify needs a one-dimensional surface file (x1,f,g,residual)");
  }
  std::vector<double> residuals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != 4) throw ConfigError("surface file: malformed row");
    xs.push_back(row[0]);
    residuals.push_back(row[3]);
  }
  return residuals;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// Opens a file for writing, creating missing parent directories.
std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

int report_error(std::ostream& err, const char* kind, const std::string& message, int code) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  err << j.dump() << '\n';
  return code;
}

// Maps library exceptions onto exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    return report_error(err, "parse_error", e.what(), kConfigError);
  } catch (const ConfigError& e) {
    return report_error(err, "config_error", e.what(), kConfigError);
  } catch (const SizeGuardError& e) {
    return report_error(err, "size_guard", e.what(), kConfigError);
  } catch (const InfeasibleStartError& e) {
    return report_error(err, "infeasible_start", e.what(), kInfeasible);
  } catch (const PositivityError& e) {
    return report_error(err, "infeasible_start", e.what(), kInfeasible);
  } catch (const NumericalFailure& e) {
    return report_error(err, "numerical_failure", e.what(), kNumericalError);
  } catch (const EvalError& e) {
    return report_error(err, "evaluation_error", e.what(), kConfigError);
  }
}

}  // namespace

FitSetup parse_fit_config(const json& config, const fs::path& base_dir) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  FitSetup s{.variables = required<std::vector<std::string>>(config, "variables", "config"),
             .target = parse("0", {}),
             .grid = {},
             .model = {},
             .options = {},
             .result_path = {},
             .surface_path = {},
             .lp_dump_path = {}};
  if (s.variables.empty()) throw ConfigError("config: 'variables' must not be empty");
  s.target = parse(required<std::string>(config, "target", "config"), s.variables);

  const std::size_t dim = s.variables.size();
  const json& grid = config.contains("grid") ? config.at("grid") : throw ConfigError("config: missing 'grid'");
  s.grid.lower = axis_values(grid, "lower", dim);
  s.grid.upper = axis_values(grid, "upper", dim);
  s.grid.step = axis_values(grid, "step", dim);
  s.grid.validate();

  if (!config.contains("model")) throw ConfigError("config: missing 'model'");
  const json& m = config.at("model");
  const std::string outer = optional_field<std::string>(m, "outer", "model").value_or("identity");
  if (outer == "identity") {
    s.model.outer = MonotoneOuter::identity();
  } else if (outer == "odd_power") {
    s.model.outer = MonotoneOuter::odd_power(required<int>(m, "power", "model"));
  } else {
    throw ConfigError("model: unknown outer '" + outer + "'");
  }
  if (!m.contains("numerator_basis")) throw ConfigError("model: missing 'numerator_basis'");
  s.model.numerator = parse_basis(m.at("numerator_basis"), s.variables, "numerator_basis");
  if (m.contains("denominator_basis") && !m.at("denominator_basis").is_null()) {
    s.model.denominator = parse_basis(m.at("denominator_basis"), s.variables, "denominator_basis");
  }
  if (m.contains("fixed_coefficient") && !m.at("fixed_coefficient").is_null()) {
    const json& fc = m.at("fixed_coefficient");
    s.model.fixed = FixedCoefficient{required<std::size_t>(fc, "index", "fixed_coefficient"),
                                     required<double>(fc, "value", "fixed_coefficient")};
  }
  s.model.delta = optional_field<double>(m, "delta", "model").value_or(kDefaultDelta);
  if (m.contains("constraints")) {
    for (const auto& c : m.at("constraints")) {
      s.model.constraints.push_back({required<std::vector<double>>(c, "coefficients", "constraint"),
                                     required<double>(c, "rhs", "constraint")});
    }
  }
  s.model.validate();
  if (m.contains("initial") && !m.at("initial").is_null()) {
    s.options.initial = coefficients_from_json(m.at("initial"));
    check_coefficients(s.model, *s.options.initial);
  }

  const json solver = config.value("solver", json::object());
  s.options.epsilon = optional_field<double>(solver, "epsilon", "solver").value_or(1e-6);
  if (!(s.options.epsilon > 0.0)) throw ConfigError("solver: epsilon must be positive");
  s.options.max_iterations = optional_field<std::size_t>(solver, "max_iterations", "solver");

  const json output = config.value("output", json::object());
  if (auto p = optional_field<std::string>(output, "result_path", "output")) s.result_path = resolve(base_dir, *p);
  if (auto p = optional_field<std::string>(output, "surface_path", "output")) s.surface_path = resolve(base_dir, *p);
  if (auto p = optional_field<std::string>(output, "lp_dump_path", "output")) s.lp_dump_path = resolve(base_dir, *p);
  return s;
}

void write_surface_csv(std::ostream& out, const SampledFunction& f, const std::vector<double>& model_values) {
  const std::size_t d = f.points.dimension();
  for (std::size_t i = 0; i < d; ++i) out << 'x' << (i + 1) << ',';
  out << "f,g,residual\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (double c : f.points[k]) out << format_double(c) << ',';
    out << format_double(f.values[k]) << ',' << format_double(model_values[k]) << ','
        << format_double(f.values[k] - model_values[k]) << '\n';
  }
}

json run_fit(const json& config, const fs::path& base_dir, const fs::path& result_dir) {
  FitSetup setup = parse_fit_config(config, base_dir);
  const SampledFunction samples = sample(setup.target, setup.grid);
  if (verbose()) std::cerr << "fit: " << samples.size() << " points\n";

  const FitResult result = fit(setup.model, samples, setup.options);

  TabulatedModel tab(setup.model, samples.points);
  std::vector<double> g(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) g[k] = tab.value(result.coefficients, k);

  json out;
  out["config"] = config;
  out["coefficients"] = coefficients_json(result.coefficients);
  out["achieved_deviation"] = result.achieved_deviation;
  out["certified_bounds"] = {result.lower, result.upper};
  out["initial_upper"] = result.initial_upper;
  out["epsilon"] = setup.options.epsilon;
  out["iterations"] = result.iterations;
  out["converged"] = result.converged;
  json trace = json::array();
  for (const auto& t : result.trace) {
    trace.push_back({{"level", t.level}, {"feasible", t.feasible}, {"objective", t.objective}});
    if (verbose()) std::cerr << "  z=" << t.level << (t.feasible ? " feasible" : " empty") << '\n';
  }
  out["trace"] = trace;

  if (setup.variables.size() == 1) {
    std::vector<double> r(samples.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = samples.values[k] - g[k];
    const double zero_tol = result.converged ? setup.options.epsilon : 0.0;
    out["certificate"] = alternation_json(extract_alternations(r, kDefaultTau, zero_tol), samples);
  }

  if (setup.surface_path) {
    std::ofstream csv = open_output(*setup.surface_path);
    write_surface_csv(csv, samples, g);
    const fs::path rel = result_dir.empty() ? *setup.surface_path
                                            : fs::proximate(*setup.surface_path, result_dir);
    out["surface_path"] = rel.generic_string();
  }
  if (setup.lp_dump_path) {
    std::ofstream lp = open_output(*setup.lp_dump_path);
    write_lp(lp, build_feasibility_lp(tab, samples, result.upper));
  }
  return out;
}

double recompute_deviation(const json& result) {
  FitSetup setup = parse_fit_config(result.at("config"));
  const SampledFunction samples = sample(setup.target, setup.grid);
  TabulatedModel tab(setup.model, samples.points);
  return max_deviation(tab, coefficients_from_json(result.at("coefficients")), samples);
}

json run_verify(const VerifyRequest& request) {
  const json result = read_json_file(request.result_path);
  if (!result.contains("config") || !result.contains("coefficients")) {
    throw ConfigError("not a fit result file");
  }
  const auto vars = required<std::vector<std::string>>(result.at("config"), "variables", "config");
  if (vars.size() != 1) {
    throw ConfigError("verify: alternation certificates are defined for one-dimensional fits only; this result has " +
                      std::to_string(vars.size()) + " variables");
  }
  if (!result.contains("surface_path")) throw ConfigError("verify: result has no surface file; rerun fit with output.surface_path");
  const fs::path surface = resolve(request.result_path.parent_path(), result.at("surface_path").get<std::string>());
  std::vector<double> xs;
  const std::vector<double> residuals = read_residual_column(surface, xs);
  if (!std::is_sorted(xs.begin(), xs.end())) throw ConfigError("verify: surface points are not in grid order");

  const double tau = request.tau.value_or(kDefaultTau);
  // A converged bracket [0, epsilon] already certifies membership up to epsilon.
  const double zero_tol = result.value("converged", false) ? result.value("epsilon", 0.0) : 0.0;
  const AlternationReport report = extract_alternations(residuals, tau, zero_tol);
  json out;
  out["exact_fit"] = report.exact_fit;
  out["count"] = report.count;
  out["tau"] = tau;
  out["max_abs_residual"] = report.max_abs;
  std::vector<double> pts;
  for (std::size_t k : report.points) pts.push_back(xs[k]);
  out["points"] = pts;
  out["signs"] = report.signs;

  bool optimal = false;
  if (request.m) {
    const Coefficients c = coefficients_from_json(result.at("coefficients"));
    const int p = effective_degree(c.numerator);
    const int q = effective_degree(c.denominator);
    const DefectInfo defect = compute_defect(request.n, *request.m, p, q);
    out["defect"] = {{"n", defect.n}, {"m", defect.m}, {"p", defect.p}, {"q", defect.q},
                     {"nu", defect.nu}, {"mu", defect.mu}, {"d", defect.d}};
    out["required"] = request.n + *request.m + 2 - defect.d;
    optimal = check_rational_optimality(request.n, *request.m, defect.d, report);
  } else {
    out["required"] = request.n + 2;
    optimal = check_polynomial_optimality(request.n, report);
  }
  out["verdict"] = optimal ? "optimal" : "not-certified";
  return out;
}

int cmd_fit(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const json config = read_json_file(config_path);
    const fs::path base = config_path.parent_path();
    const FitSetup setup = parse_fit_config(config, base);
    const fs::path result_dir = setup.result_path ? setup.result_path->parent_path() : fs::path{};
    const json result = run_fit(config, base, result_dir);
    if (setup.result_path) {
      std::ofstream file = open_output(*setup.result_path);
      file << result.dump(2) << '\n';
    }
    json summary;
    summary["achieved_deviation"] = result["achieved_deviation"];
    summary["certified_bounds"] = result["certified_bounds"];
    summary["iterations"] = result["iterations"];
    summary["converged"] = result["converged"];
    summary["coefficients"] = result["coefficients"];
    out << summary.dump(2) << '\n';
    return int{kOk};
  });
}

int cmd_verify(const VerifyRequest& request, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const json report = run_verify(request);
    out << report.dump(2) << '\n';
    return report["verdict"] == "optimal" ? int{kOk} : int{kNotCertified};
  });
}

int cmd_convexity(const std::string& sub, const std::vector<std::string>& files,
                  const std::optional<std::string>& set, std::ostream& out, std::ostream& err) {
  using namespace axiomatic;
  return guarded(err, [&] {
    if (files.size() != 1) throw ConfigError("convexity " + sub + " takes exactly one input file");
    std::ifstream in(files.front());
    if (!in) throw ConfigError("cannot open " + files.front());
    json j;
    if (sub == "extension") {
      const FunctionTable table = read_function_table(in);
      const auto members = convexity_extension(table);
      json list = json::array();
      for (IndexSet m : members) list.push_back(m.indices());
      j["members"] = list;
      j["convexity_structure"] = is_convexity_structure(family_over_rows(table, members));
    } else {
      const ConvexityFamily family = read_family(in);
      auto labels = [&](IndexSet s) {
        std::vector<std::string> out_labels;
        for (std::size_t i : s.indices()) out_labels.push_back(family.ground().label(i));
        return out_labels;
      };
      if (sub == "hull") {
        if (!set) throw ConfigError("convexity hull needs --set");
        IndexSet s;
        std::stringstream ss(*set);
        std::string label;
        while (std::getline(ss, label, ',')) {
          if (!label.empty()) s.insert(family.ground().index_of(label));
        }
        if (!is_closure_space(family)) throw ConfigError("hull: family is not a closure space");
        j["hull"] = labels(hull(family, s));
      } else if (sub == "caratheodory") {
        j["caratheodory_number"] = caratheodory_number(family);
      } else if (sub == "check") {
        j["closure_space"] = is_closure_space(family);
        j["convexity_structure"] = is_convexity_structure(family);
      } else {
        throw ConfigError("unknown convexity subcommand '" + sub + "'");
      }
    }
    out << j.dump(2) << '\n';
    return int{kOk};
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Best uniform approximation by quasiaffine models, and finite convexity tools"};
  app.require_subcommand(1);

  std::string config_path;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model described by a JSON config");
  fit_cmd->add_option("config", config_path, "config.json")->required();

  VerifyRequest verify;
  std::string result_path;
  int m_degree = -1;
  double tau = -1.0;
  auto* verify_cmd = app.add_subcommand("verify", "Check the alternation certificate of a 1-D fit");
  verify_cmd->add_option("result", result_path, "result.json")->required();
  verify_cmd->add_option("--n", verify.n, "numerator / polynomial degree")->required();
  verify_cmd->add_option("--m", m_degree, "denominator degree (rational fits)");
  verify_cmd->add_option("--tau", tau, "relative near-maximality threshold");

  std::string sub;
  std::vector<std::string> files;
  std::string set;
  auto* conv_cmd = app.add_subcommand("convexity", "Finite convexity computations");
  conv_cmd->add_option("sub", sub, "hull | caratheodory | check | extension")
      ->required()
      ->check(CLI::IsMember({"hull", "caratheodory", "check", "extension"}));
  conv_cmd->add_option("files", files, "input files")->required();
  conv_cmd->add_option("--set", set, "comma-separated labels (hull)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::stringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? int{kOk} : int{kConfigError};
  }

  if (*fit_cmd) return cmd_fit(config_path, out, err);
  if (*verify_cmd) {
    verify.result_path = result_path;
    if (m_degree >= 0) verify.m = m_degree;
    if (tau >= 0.0) verify.tau = tau;
    return cmd_verify(verify, out, err);
  }
  return cmd_convexity(sub, files, set.empty() ? std::nullopt : std::optional<std::string>(set), out, err);
}

}  // namespace qapprox::cli
