#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qapprox {

/// Near-maximal residuals of a univariate fit, grouped into sign runs.
struct AlternationReport {
  bool exact_fit = false;         // every residual is zero
  double max_abs = 0.0;           // max |residual|
  double tau = 0.0;               // relative threshold used
  std::vector<std::size_t> points;  // one per sign run: the run's largest |r|
  std::vector<int> signs;           // +1 / -1, alternating
  std::size_t count = 0;            // number of runs; grid size for an exact fit
};

inline constexpr double kDefaultTau = 1e-3;

/// Scans residuals in grid order. A point qualifies when |r| >= (1 - tau) max|r|;
/// consecutive qualified points with the same sign form one run. Residuals
/// must come from an ordered one-dimensional grid. When max|r| <= zero_tolerance
/// the fit counts as exact.
AlternationReport extract_alternations(std::span<const double> residuals, double tau = kDefaultTau,
                                       double zero_tolerance = 0.0);

/// Chebyshev criterion for degree-n polynomials: count >= n + 2.
bool check_polynomial_optimality(int n, const AlternationReport& report);

struct DefectInfo {
  int n = 0, m = 0;    // nominal numerator / denominator degrees
  int p = 0, q = 0;    // actual degrees after cancellation
  int nu = 0, mu = 0;  // n - p, m - q
  int d = 0;           // min(nu, mu)
};

/// Throws ConfigError when p > n, q > m or any degree is negative.
DefectInfo compute_defect(int n, int m, int p, int q);

/// Degree of a monomial coefficient vector (constant term first): the index
/// of the last entry whose magnitude reaches 1e-8 * ||coeffs||_2. 0 for an
/// all-zero vector.
int effective_degree(std::span<const double> coeffs);

/// Rational criterion: count >= n + m + 2 - d.
bool check_rational_optimality(int n, int m, int d, const AlternationReport& report);

}  // namespace qapprox
