#include "qapprox/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qapprox/error.hpp"

namespace qapprox {

AlternationReport extract_alternations(std::span<const double> residuals, double tau, double zero_tolerance) {
  if (!(tau >= 0.0 && tau < 1.0)) throw ConfigError("alternation threshold tau must lie in [0, 1)");
  if (!(zero_tolerance >= 0.0)) throw ConfigError("zero tolerance must be non-negative");
  if (residuals.empty()) throw ConfigError("alternation check needs at least one residual");
  AlternationReport report;
  report.tau = tau;
  for (double r : residuals) report.max_abs = std::max(report.max_abs, std::fabs(r));
  if (report.max_abs <= zero_tolerance) {
    report.exact_fit = true;
    report.count = residuals.size();
    return report;
  }

  const double threshold = (1.0 - tau) * report.max_abs;
  for (std::size_t k = 0; k < residuals.size(); ++k) {
    const double r = residuals[k];
    if (std::fabs(r) < threshold) continue;
    const int sign = r > 0.0 ? 1 : -1;
    if (report.signs.empty() || report.signs.back() != sign) {
      report.signs.push_back(sign);
      report.points.push_back(k);
    } else if (std::fabs(r) > std::fabs(residuals[report.points.back()])) {
      report.points.back() = k;
    }
  }
  report.count = report.signs.size();
  return report;
}

bool check_polynomial_optimality(int n, const AlternationReport& report) {
  if (report.exact_fit) return true;
  return static_cast<long long>(report.count) >= static_cast<long long>(n) + 2;
}

DefectInfo compute_defect(int n, int m, int p, int q) {
  if (n < 0 || m < 0 || p < 0 || q < 0) throw ConfigError("defect: degrees must be nonnegative");
  if (p > n || q > m) {
    throw ConfigError("defect: actual degrees (" + std::to_string(p) + ", " + std::to_string(q) +
                      ") exceed nominal (" + std::to_string(n) + ", " + std::to_string(m) + ")");
  }
  DefectInfo info{n, m, p, q, n - p, m - q, 0};
  info.d = std::min(info.nu, info.mu);
  return info;
}

int effective_degree(std::span<const double> coeffs) {
  double norm = 0.0;
  for (double c : coeffs) norm += c * c;
  norm = std::sqrt(norm);
  if (norm == 0.0) return 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    if (std::fabs(coeffs[k]) >= 1e-8 * norm) return static_cast<int>(k);
  }
  return 0;
}

bool check_rational_optimality(int n, int m, int d, const AlternationReport& report) {
  if (report.exact_fit) return true;
  return static_cast<long long>(report.count) >= static_cast<long long>(n) + m + 2 - d;
}

}  // namespace qapprox
