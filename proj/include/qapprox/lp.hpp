#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qapprox {

/// minimize objective . v  subject to  row_i . v <= rhs_i,  v free.
class LinearProgram {
 public:
  explicit LinearProgram(std::size_t variable_count);

  std::size_t variable_count() const { return variables_; }
  std::size_t row_count() const { return rhs_.size(); }

  void set_objective(std::vector<double> objective);
  const std::vector<double>& objective() const { return objective_; }

  void add_row(std::span<const double> coefficients, double rhs);
  std::span<const double> row(std::size_t i) const {
    return {matrix_.data() + i * variables_, variables_};
  }
  double rhs(std::size_t i) const { return rhs_[i]; }

  /// Names used by write_lp; defaults to v0, v1, ...
  std::vector<std::string> names;

 private:
  std::size_t variables_;
  std::vector<double> objective_;
  std::vector<double> matrix_;
  std::vector<double> rhs_;
};

/// Plain-text dump, one inequality per line, exact (round-trip) decimals.
void write_lp(std::ostream& out, const LinearProgram& lp);

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  std::vector<double> solution;  // empty unless optimal
  double objective = 0.0;        // objective . solution when optimal
  std::size_t iterations = 0;    // simplex pivots over both phases
};

/// Primal feasibility tolerance per row: 1e-9 * (1 + |rhs|).
inline constexpr double kRowTolerance = 1e-9;

/// Two-phase primal simplex. Free variables are split into differences of
/// nonnegative parts; slacks stay implicit in a dictionary tableau. Pricing is
/// largest reduced cost, switching to Bland's rule for the rest of a phase
/// after 5 * rows consecutive degenerate pivots. Deterministic.
LpSolution solve(const LinearProgram& lp);

}  // namespace qapprox
