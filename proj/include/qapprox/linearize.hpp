#pragma once

#include <span>

#include "qapprox/domain.hpp"
#include "qapprox/lp.hpp"
#include "qapprox/models.hpp"

namespace qapprox {

struct LevelLpOptions {
  /// Also relax the denominator rows by the auxiliary variable. Only useful for
  /// diagnosing why no coefficients keep the denominator above delta; the
  /// bisection oracle keeps those rows hard.
  bool relax_positivity = false;
};

/// Linear program whose optimum u* satisfies u* <= 0 iff some coefficients reach
/// max |f - g| <= z on the sample points.
///
/// Variables are [A | free entries of B | u], objective is min u. For every
/// point x, in order, with lo = outer^-1(f(x) - z), hi = outer^-1(f(x) + z):
///   lo * B^T H(x) - A^T G(x) <= u
///   A^T G(x) - hi * B^T H(x) <= u
///   -B^T H(x) <= -delta                 (rational models only)
/// For identity outers the first two rows are exactly
/// f B^T H - A^T G - z B^T H <= u and A^T G - f B^T H - z B^T H <= u.
/// The fixed denominator entry is folded into the right-hand sides. The
/// model's extra linear constraints are appended last, unrelaxed.
LinearProgram build_feasibility_lp(const TabulatedModel& model, const SampledFunction& f, double z,
                                   LevelLpOptions options = {});

LinearProgram build_feasibility_lp(const ModelClass& model, const SampledFunction& f, double z,
                                   LevelLpOptions options = {});

/// Index of the auxiliary variable u.
std::size_t auxiliary_index(const ModelClass& model);

/// Splits an LP solution back into model coefficients, restoring the fixed entry.
Coefficients coefficients_from_solution(const ModelClass& model, std::span<const double> solution);

}  // namespace qapprox
