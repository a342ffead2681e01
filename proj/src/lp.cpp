#include "qapprox/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "qapprox/error.hpp"
#include "qapprox/format.hpp"

namespace qapprox {

LinearProgram::LinearProgram(std::size_t variable_count)
    : variables_(variable_count), objective_(variable_count, 0.0) {
  if (variable_count == 0) throw ConfigError("linear program: no variables");
  for (std::size_t j = 0; j < variable_count; ++j) names.push_back("v" + std::to_string(j));
}

void LinearProgram::set_objective(std::vector<double> objective) {
  if (objective.size() != variables_) throw ConfigError("linear program: objective length mismatch");
  for (double c : objective) {
    if (!std::isfinite(c)) throw ConfigError("linear program: non-finite objective");
  }
  objective_ = std::move(objective);
}

void LinearProgram::add_row(std::span<const double> coefficients, double rhs) {
  if (coefficients.size() != variables_) throw ConfigError("linear program: row length mismatch");
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw ConfigError("linear program: non-finite row coefficient");
  }
  if (!std::isfinite(rhs)) throw ConfigError("linear program: non-finite right-hand side");
  matrix_.insert(matrix_.end(), coefficients.begin(), coefficients.end());
  rhs_.push_back(rhs);
}

void write_lp(std::ostream& out, const LinearProgram& lp) {
  out << "variables " << lp.variable_count();
  for (const auto& n : lp.names) out << ' ' << n;
  out << "\nminimize";
  for (double c : lp.objective()) out << ' ' << format_double(c);
  out << "\nrows " << lp.row_count() << '\n';
  for (std::size_t i = 0; i < lp.row_count(); ++i) {
    for (double a : lp.row(i)) out << format_double(a) << ' ';
    out << "<= " << format_double(lp.rhs(i)) << '\n';
  }
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

constexpr double kEps = 1e-9;
constexpr int kArtificial = -1;

// Dictionary-form tableau for  max c.x  s.t.  A x <= b, x >= 0.
// Rows 0..m-1 are constraints, row m the objective, row m+1 the phase-one
// objective. Column n is the artificial variable, column n+1 the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), width_(n + 2), d_((m + 2) * (n + 2), 0.0) {
    basis_.resize(m);
    nonbasis_.resize(n + 1);
    for (std::size_t i = 0; i < m; ++i) basis_[i] = static_cast<int>(n + i);
    for (std::size_t j = 0; j < n; ++j) nonbasis_[j] = static_cast<int>(j);
    nonbasis_[n] = kArtificial;
  }

  double& at(std::size_t i, std::size_t j) { return d_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return d_[i * width_ + j]; }

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::vector<int>& basis() { return basis_; }
  std::size_t pivots() const { return pivots_; }

  void pivot(std::size_t r, std::size_t s) {
    double* prow = &at(r, 0);
    const double inv = 1.0 / prow[s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r) continue;
      double* row = &at(i, 0);
      if (row[s] == 0.0) continue;
      const double factor = row[s] * inv;
      for (std::size_t j = 0; j < width_; ++j) row[j] -= prow[j] * factor;
      row[s] = prow[s] * factor;
    }
    for (std::size_t j = 0; j < width_; ++j) {
      if (j != s) prow[j] *= inv;
    }
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i != r) at(i, s) *= -inv;
    }
    prow[s] = inv;
    std::swap(basis_[r], nonbasis_[s]);
    ++pivots_;
  }

  enum class Outcome { kOptimal, kUnbounded, kStalled };

  // Optimizes objective row `obj`; columns holding the artificial are skipped
  // when `skip_artificial`.
  Outcome run(std::size_t obj, bool skip_artificial, std::size_t max_pivots) {
    bool bland = false;
    std::size_t degenerate_run = 0;
    const std::size_t degenerate_limit = 5 * std::max<std::size_t>(m_, 1);
    for (;;) {
      if (pivots_ >= max_pivots) return Outcome::kStalled;
      std::size_t s = n_ + 1;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (skip_artificial && nonbasis_[j] == kArtificial) continue;
        const double cost = at(obj, j);
        if (cost >= -kEps) continue;
        if (s == n_ + 1) {
          s = j;
        } else if (bland ? nonbasis_[j] < nonbasis_[s]
                         : (cost < at(obj, s) || (cost == at(obj, s) && nonbasis_[j] < nonbasis_[s]))) {
          s = j;
        }
      }
      if (s == n_ + 1) return Outcome::kOptimal;

      std::size_t r = m_;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, s);
        if (a <= kEps) continue;
        const double ratio = at(i, n_ + 1) / a;
        if (r == m_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[r])) {
          r = i;
          best_ratio = ratio;
        }
      }
      if (r == m_) return Outcome::kUnbounded;

      if (best_ratio <= kEps) {
        if (++degenerate_run >= degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(r, s);
    }
  }

  // Pivots the artificial out of the basis after phase one.
  void evict_artificial() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] != kArtificial) continue;
      std::size_t s = 0;
      for (std::size_t j = 1; j <= n_; ++j) {
        if (std::fabs(at(i, j)) > std::fabs(at(i, s))) s = j;
      }
      pivot(i, s);
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= 0 && static_cast<std::size_t>(basis_[i]) < n_) x[basis_[i]] = at(i, n_ + 1);
    }
    return x;
  }

 private:
  std::size_t m_, n_, width_;
  std::vector<double> d_;
  std::vector<int> basis_;
  std::vector<int> nonbasis_;
  std::size_t pivots_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp) {
  const std::size_t v = lp.variable_count();
  const std::size_t m = lp.row_count();
  const std::size_t n = 2 * v;  // v = p - q with p, q >= 0

  Tableau t(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = lp.row(i);
    for (std::size_t j = 0; j < v; ++j) {
      t.at(i, j) = row[j];
      t.at(i, v + j) = -row[j];
    }
    t.at(i, n) = -1.0;
    t.at(i, n + 1) = lp.rhs(i);
  }
  // Maximize -c.v; the objective row holds negated costs.
  for (std::size_t j = 0; j < v; ++j) {
    t.at(m, j) = lp.objective()[j];
    t.at(m, v + j) = -lp.objective()[j];
  }
  t.at(m + 1, n) = 1.0;

  const std::size_t max_pivots = 50 * (m + n + 10);
  LpSolution out;

  if (m > 0) {
    std::size_t r = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (t.at(i, n + 1) < t.at(r, n + 1)) r = i;
    }
    if (t.at(r, n + 1) < -kEps) {
      t.pivot(r, n);
      const auto phase_one = t.run(m + 1, false, max_pivots);
      if (phase_one == Tableau::Outcome::kStalled) {
        out.iterations = t.pivots();
        return out;
      }
      if (t.at(m + 1, n + 1) < -kEps * (1.0 + std::fabs(t.at(r, n + 1)))) {
        out.status = LpStatus::kInfeasible;
        out.iterations = t.pivots();
        return out;
      }
      t.evict_artificial();
    }
  }

  const auto phase_two = t.run(m, true, max_pivots);
  out.iterations = t.pivots();
  if (phase_two == Tableau::Outcome::kStalled) return out;
  if (phase_two == Tableau::Outcome::kUnbounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }

  const std::vector<double> x = t.primal();
  std::vector<double> sol(v);
  for (std::size_t j = 0; j < v; ++j) sol[j] = x[j] - x[v + j];

  for (std::size_t i = 0; i < m; ++i) {
    double lhs = 0.0;
    const auto row = lp.row(i);
    for (std::size_t j = 0; j < v; ++j) lhs += row[j] * sol[j];
    if (lhs > lp.rhs(i) + kRowTolerance * (1.0 + std::fabs(lp.rhs(i)))) return out;
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < v; ++j) obj += lp.objective()[j] * sol[j];
  out.status = LpStatus::kOptimal;
  out.solution = std::move(sol);
  out.objective = obj;
  return out;
}

}  // namespace qapprox
