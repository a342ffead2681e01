#include "qapprox/bisection.hpp"

#include <cmath>
#include <string>

#include "qapprox/error.hpp"
#include "qapprox/format.hpp"
#include "qapprox/linearize.hpp"

namespace qapprox {

OracleVerdict level_oracle(const TabulatedModel& model, const SampledFunction& f, double z) {
  const ModelClass& m = model.model();
  LinearProgram lp = build_feasibility_lp(model, f, z);
  LpSolution sol = solve(lp);
  std::size_t pivots = sol.iterations;
  if (sol.status == LpStatus::kUnbounded) {
    // u can run to -infinity when the denominator scale is free; any
    // negative value answers the question, so floor it at -1.
    std::vector<double> floor_row(lp.variable_count(), 0.0);
    floor_row[auxiliary_index(m)] = -1.0;
    lp.add_row(floor_row, 1.0);
    sol = solve(lp);
    pivots += sol.iterations;
  }
  if (sol.status != LpStatus::kOptimal) {
    throw NumericalFailure(std::string("level oracle: LP ") + to_string(sol.status) + " at z = " +
                           format_double(z));
  }
  OracleVerdict v;
  v.level = z;
  v.objective = sol.objective;
  v.feasible = sol.objective <= 0.0;
  v.pivots = pivots;
  if (v.feasible) v.coefficients = coefficients_from_solution(m, sol.solution);
  return v;
}

std::size_t expected_iterations(double initial_upper, double epsilon) {
  std::size_t k = 0;
  double width = initial_upper;
  while (width > epsilon) {
    width /= 2.0;
    ++k;
  }
  return k;
}

FitResult fit(const ModelClass& model, const SampledFunction& f, FitOptions options) {
  if (!(options.epsilon > 0.0)) throw ConfigError("fit: epsilon must be positive");
  TabulatedModel tab(model, f.points);

  Coefficients start;
  if (options.initial) {
    start = *options.initial;
    check_coefficients(model, start);
  } else {
    InitialCoefficients init = default_initial_coefficients(model, f.points);
    if (!init.feasible()) {
      throw InfeasibleStartError("default initial coefficients violate denominator positivity at " +
                                 std::to_string(init.failing_points.size()) + " point(s), first " +
                                 format_point(f.points[init.failing_points.front()]) +
                                 "; supply initial coefficients");
    }
    start = std::move(init.coefficients);
  }

  FitResult result;
  try {
    result.initial_upper = max_deviation(tab, start, f);
  } catch (const PositivityError& e) {
    throw InfeasibleStartError(std::string("initial coefficients: ") + e.what());
  }
  result.coefficients = std::move(start);
  result.lower = 0.0;
  result.upper = result.initial_upper;

  while (result.upper - result.lower > options.epsilon) {
    if (options.max_iterations && result.iterations >= *options.max_iterations) break;
    const double z = 0.5 * (result.upper + result.lower);
    OracleVerdict v = level_oracle(tab, f, z);
    result.trace.push_back({z, v.feasible, v.objective});
    if (v.feasible) {
      result.upper = z;
      result.coefficients = std::move(*v.coefficients);
    } else {
      result.lower = z;
    }
    ++result.iterations;
  }
  result.converged = result.upper - result.lower <= options.epsilon;
  result.achieved_deviation = max_deviation(tab, result.coefficients, f);
  return result;
}

BracketCertificate check_bracket(const ModelClass& model, const SampledFunction& f, const FitResult& result,
                                 double epsilon) {
  TabulatedModel tab(model, f.points);
  BracketCertificate cert;
  cert.upper_feasible = level_oracle(tab, f, result.upper + epsilon).feasible;
  if (result.lower > 0.0) {
    const double below = result.lower - std::min(epsilon, 0.5 * result.lower);
    cert.lower_infeasible = !level_oracle(tab, f, below).feasible;
  }
  return cert;
}

}  // namespace qapprox
