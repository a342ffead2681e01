#include "qapprox/models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qapprox/error.hpp"
#include "qapprox/format.hpp"
#include "qapprox/lp.hpp"

namespace qapprox {

MonotoneOuter MonotoneOuter::odd_power(int power) {
  if (power < 1 || power % 2 == 0) {
    throw ConfigError("odd_power outer needs an odd positive power, got " + std::to_string(power));
  }
  return MonotoneOuter(power == 1 ? Kind::kIdentity : Kind::kOddPower, power);
}

double MonotoneOuter::forward(double t) const {
  if (kind_ == Kind::kIdentity) return t;
  double result = t;
  for (int i = 1; i < power_; ++i) result *= t;
  return result;
}

double MonotoneOuter::inverse(double s) const {
  if (kind_ == Kind::kIdentity) return s;
  if (power_ == 3) return std::cbrt(s);
  if (s == 0.0) return 0.0;
  double t = std::copysign(std::pow(std::fabs(s), 1.0 / power_), s);
  // One Newton step on t^p - s cleans up the last bits of pow.
  const double tp1 = std::pow(t, power_ - 1);
  t -= (tp1 * t - s) / (power_ * tp1);
  return t;
}

std::size_t ModelClass::free_coefficient_count() const {
  return numerator_size() + denominator_size() - (fixed ? 1 : 0);
}

void ModelClass::validate() const {
  if (numerator.empty()) throw ConfigError("model: numerator basis is empty");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("model: delta must be positive");
  if (denominator) {
    if (denominator->empty()) throw ConfigError("model: denominator basis is empty");
    if (!fixed) throw ConfigError("model: a denominator requires a fixed coefficient");
    if (fixed->index >= denominator->size()) {
      throw ConfigError("model: fixed coefficient index out of range");
    }
    if (!std::isfinite(fixed->value)) throw ConfigError("model: fixed coefficient must be finite");
  } else if (fixed) {
    throw ConfigError("model: fixed coefficient given without a denominator");
  }
  const std::size_t dim = numerator.front().variables().size();
  auto check_vars = [dim](const BasisSpec& b) {
    for (const auto& e : b) {
      if (e.variables().size() != dim) throw ConfigError("model: basis functions disagree on variables");
    }
  };
  check_vars(numerator);
  if (denominator) check_vars(*denominator);
  const std::size_t total = numerator_size() + denominator_size();
  for (const auto& c : constraints) {
    if (c.coefficients.size() != total) {
      throw ConfigError("model: linear constraint has " + std::to_string(c.coefficients.size()) +
                        " coefficients, expected " + std::to_string(total));
    }
  }
}

void check_coefficients(const ModelClass& model, const Coefficients& coeffs) {
  if (coeffs.numerator.size() != model.numerator_size()) {
    throw ConfigError("coefficients: numerator length mismatch");
  }
  if (coeffs.denominator.size() != model.denominator_size()) {
    throw ConfigError("coefficients: denominator length mismatch");
  }
  if (model.fixed && coeffs.denominator[model.fixed->index] != model.fixed->value) {
    throw ConfigError("coefficients: fixed denominator entry differs from its declared value");
  }
}

BasisTable tabulate(const BasisSpec& basis, const PointSet& points) {
  BasisTable t;
  t.rows = points.size();
  t.cols = basis.size();
  t.values.resize(t.rows * t.cols);
  for (std::size_t k = 0; k < t.rows; ++k) {
    for (std::size_t j = 0; j < t.cols; ++j) {
      const double v = basis[j](points[k]);
      if (!std::isfinite(v)) {
        throw EvalError("basis function " + std::to_string(j) + " is not finite at " +
                        format_point(points[k]));
      }
      t.values[k * t.cols + j] = v;
    }
  }
  return t;
}

TabulatedModel::TabulatedModel(const ModelClass& model, const PointSet& points) : model_(model) {
  model_.validate();
  numerator_ = tabulate(model_.numerator, points);
  if (model_.denominator) denominator_ = tabulate(*model_.denominator, points);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double TabulatedModel::numerator_value(const Coefficients& c, std::size_t k) const {
  return dot(c.numerator, numerator_.row(k));
}

double TabulatedModel::denominator_value(const Coefficients& c, std::size_t k) const {
  if (!model_.denominator) return 1.0;
  return dot(c.denominator, denominator_.row(k));
}

double TabulatedModel::value(const Coefficients& c, std::size_t k) const {
  const double num = numerator_value(c, k);
  if (!model_.denominator) return model_.outer.forward(num);
  const double den = denominator_value(c, k);
  // Same slack the LP solver grants its rows, so LP-feasible coefficients evaluate.
  if (!(den >= model_.delta - kRowTolerance * (1.0 + model_.delta))) {
    throw PositivityError("denominator " + format_double(den) + " below delta at point " + std::to_string(k),
                          k);
  }
  return model_.outer.forward(num / den);
}

double evaluate_model(const ModelClass& model, const Coefficients& coeffs, std::span<const double> point) {
  check_coefficients(model, coeffs);
  PointSet single(point.size(), std::vector<double>(point.begin(), point.end()));
  TabulatedModel tab(model, single);
  return tab.value(coeffs, 0);
}

std::vector<double> residuals(const TabulatedModel& model, const Coefficients& coeffs,
                              const SampledFunction& f) {
  check_coefficients(model.model(), coeffs);
  if (f.size() != model.size()) throw ConfigError("residuals: sample count mismatch");
  std::vector<double> r(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) r[k] = f.values[k] - model.value(coeffs, k);
  return r;
}

double max_deviation(const TabulatedModel& model, const Coefficients& coeffs, const SampledFunction& f) {
  double worst = 0.0;
  for (double r : residuals(model, coeffs, f)) worst = std::max(worst, std::fabs(r));
  return worst;
}

InitialCoefficients default_initial_coefficients(const ModelClass& model, const PointSet& points) {
  model.validate();
  InitialCoefficients init;
  init.coefficients.numerator.assign(model.numerator_size(), 0.0);
  if (!model.denominator) return init;
  init.coefficients.denominator.assign(model.denominator_size(), 0.0);
  init.coefficients.denominator[model.fixed->index] = model.fixed->value;
  TabulatedModel tab(model, points);
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(tab.denominator_value(init.coefficients, k) >= model.delta)) init.failing_points.push_back(k);
  }
  return init;
}

}  // namespace qapprox
