#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qapprox/bisection.hpp"
#include "qapprox/domain.hpp"
#include "qapprox/models.hpp"

namespace qapprox::cli {

enum ExitCode : int {
  kOk = 0,
  kNotCertified = 1,
  kConfigError = 2,
  kInfeasible = 3,
  kNumericalError = 4,
};

/// Everything a `fit` run needs, decoded from the JSON config.
struct FitSetup {
  std::vector<std::string> variables;
  Expression target;
  Grid grid;
  ModelClass model;
  FitOptions options;
  std::optional<std::filesystem::path> result_path;
  std::optional<std::filesystem::path> surface_path;
  std::optional<std::filesystem::path> lp_dump_path;
};

/// Decodes a config. Relative output paths resolve against `base_dir`.
/// Throws ConfigError (or ParseError) on invalid input.
FitSetup parse_fit_config(const nlohmann::json& config, const std::filesystem::path& base_dir = {});

/// Runs the fit described by `config` and returns the result document:
/// coefficients, achieved_deviation, certified_bounds, iterations, trace and,
/// for one-dimensional domains, an alternation certificate. Writes the
/// surface CSV (x1..xd,f,g,residual) when requested; `result_dir` is where the
/// result file will live, used to record the surface path relative to it.
nlohmann::json run_fit(const nlohmann::json& config, const std::filesystem::path& base_dir = {},
                       const std::filesystem::path& result_dir = {});

/// Rebuilds the model from a result document's embedded config and recomputes
/// max |f - g| at its coefficients.
double recompute_deviation(const nlohmann::json& result);

void write_surface_csv(std::ostream& out, const SampledFunction& f, const std::vector<double>& model_values);

struct VerifyRequest {
  std::filesystem::path result_path;
  int n = 0;
  std::optional<int> m;
  std::optional<double> tau;
};

/// Alternation report plus verdict for a one-dimensional fit result.
nlohmann::json run_verify(const VerifyRequest& request);

int cmd_fit(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyRequest& request, std::ostream& out, std::ostream& err);
int cmd_convexity(const std::string& sub, const std::vector<std::string>& files,
                  const std::optional<std::string>& set, std::ostream& out, std::ostream& err);

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace qapprox::cli
