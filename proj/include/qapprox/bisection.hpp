#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qapprox/domain.hpp"
#include "qapprox/lp.hpp"
#include "qapprox/models.hpp"

namespace qapprox {

/// Answer of the level-z feasibility LP.
struct OracleVerdict {
  double level = 0.0;
  bool feasible = false;   // LP optimum u* <= 0
  double objective = 0.0;  // u*
  std::size_t pivots = 0;
  std::optional<Coefficients> coefficients;  // set when feasible
};

/// Decides whether some coefficients reach max |f - g| <= z. Throws
/// NumericalFailure (naming z) if the LP solver fails or reports the
/// denominator rows infeasible.
OracleVerdict level_oracle(const TabulatedModel& model, const SampledFunction& f, double z);

struct FitOptions {
  double epsilon = 1e-6;
  /// Hard cap on bisection steps; the result is then flagged unconverged.
  std::optional<std::size_t> max_iterations;
  /// Starting coefficients; defaults to default_initial_coefficients().
  std::optional<Coefficients> initial;
};

struct TraceEntry {
  double level;
  bool feasible;
  double objective;
};

struct FitResult {
  Coefficients coefficients;  // from the last feasible oracle call, else the start
  double lower = 0.0;         // certified: no coefficients reach this level (or 0)
  double upper = 0.0;         // certified: some coefficients reach this level
  double initial_upper = 0.0; // deviation of the starting coefficients
  double achieved_deviation = 0.0;
  std::size_t iterations = 0;
  bool converged = false;     // upper - lower <= epsilon
  std::vector<TraceEntry> trace;
};

/// Bisection on the deviation level with the LP oracle. Starts from l = 0 and
/// u = deviation of the initial coefficients; each step sets u (feasible) or
/// l (infeasible) to the midpoint until u - l <= epsilon.
///
/// Throws InfeasibleStartError when the start violates denominator
/// positivity, NumericalFailure when the oracle fails.
FitResult fit(const ModelClass& model, const SampledFunction& f, FitOptions options = {});

/// Number of bisection steps needed to shrink a bracket [0, initial_upper] below epsilon.
std::size_t expected_iterations(double initial_upper, double epsilon);

struct BracketCertificate {
  bool upper_feasible = false;  // oracle(u + epsilon)
  bool lower_infeasible = true; // oracle(l - min(epsilon, l / 2)); vacuous when l = 0
};

/// Re-queries the oracle just outside the final bracket.
BracketCertificate check_bracket(const ModelClass& model, const SampledFunction& f, const FitResult& result,
                                 double epsilon);

}  // namespace qapprox
