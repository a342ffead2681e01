#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qapprox/domain.hpp"
#include "qapprox/expr.hpp"

namespace qapprox {

/// Basis functions over the domain variables, e.g. {1, x, y, x^2, y^2, xy}.
using BasisSpec = std::vector<Expression>;

/// Strictly increasing bijection of the reals applied to the inner model value.
class MonotoneOuter {
 public:
  enum class Kind { kIdentity, kOddPower };

  static MonotoneOuter identity() { return MonotoneOuter(Kind::kIdentity, 1); }
  /// Throws ConfigError unless `power` is an odd positive integer.
  static MonotoneOuter odd_power(int power);

  Kind kind() const { return kind_; }
  int power() const { return power_; }

  double forward(double t) const;
  double inverse(double s) const;

 private:
  MonotoneOuter(Kind kind, int power) : kind_(kind), power_(power) {}
  Kind kind_;
  int power_;
};

struct FixedCoefficient {
  std::size_t index = 0;  // into the denominator coefficients
  double value = 1.0;
};

/// Extra hard constraint coeffs . (A, B) <= rhs on the full coefficient vector
/// (numerator entries first, then every denominator entry including the fixed one).
struct LinearConstraint {
  std::vector<double> coefficients;
  double rhs = 0.0;
};

inline constexpr double kDefaultDelta = 1e-4;

/// g(A, x) = outer(A^T G(x)) or outer(A^T G(x) / B^T H(x)).
struct ModelClass {
  MonotoneOuter outer = MonotoneOuter::identity();
  BasisSpec numerator;
  std::optional<BasisSpec> denominator;
  std::optional<FixedCoefficient> fixed;
  double delta = kDefaultDelta;
  std::vector<LinearConstraint> constraints;

  bool rational() const { return denominator.has_value(); }
  std::size_t numerator_size() const { return numerator.size(); }
  std::size_t denominator_size() const { return denominator ? denominator->size() : 0; }
  /// Decision variables excluding the auxiliary LP variable.
  std::size_t free_coefficient_count() const;

  /// Throws ConfigError when the invariants do not hold.
  void validate() const;
};

struct Coefficients {
  std::vector<double> numerator;
  std::vector<double> denominator;  // empty when the model has no denominator
};

/// Basis values tabulated on a point set: row k holds G(x_k) (resp. H(x_k)).
struct BasisTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t k) const { return {values.data() + k * cols, cols}; }
};

BasisTable tabulate(const BasisSpec& basis, const PointSet& points);

/// Model with its bases tabulated on a fixed point set; all grid-wide
/// computations (LP assembly, deviations) go through this.
class TabulatedModel {
 public:
  TabulatedModel(const ModelClass& model, const PointSet& points);

  const ModelClass& model() const { return model_; }
  const BasisTable& numerator() const { return numerator_; }
  const BasisTable& denominator() const { return denominator_; }
  std::size_t size() const { return numerator_.rows; }

  double numerator_value(const Coefficients& c, std::size_t k) const;
  /// 1 when the model has no denominator.
  double denominator_value(const Coefficients& c, std::size_t k) const;
  /// Throws PositivityError if the denominator is below delta at point k.
  double value(const Coefficients& c, std::size_t k) const;

 private:
  ModelClass model_;
  BasisTable numerator_;
  BasisTable denominator_;
};

/// Throws ConfigError if the coefficient vectors do not fit the model or the
/// fixed denominator entry differs from its declared value.
void check_coefficients(const ModelClass& model, const Coefficients& coeffs);

/// g(A, x) at a single point. Throws PositivityError (point index 0) when the
/// denominator is below delta.
double evaluate_model(const ModelClass& model, const Coefficients& coeffs, std::span<const double> point);

/// max_k |f(x_k) - g(x_k)|.
double max_deviation(const TabulatedModel& model, const Coefficients& coeffs, const SampledFunction& f);

/// f(x_k) - g(x_k) for every point.
std::vector<double> residuals(const TabulatedModel& model, const Coefficients& coeffs,
                              const SampledFunction& f);

struct InitialCoefficients {
  Coefficients coefficients;
  /// Indices of points where the denominator is below delta; empty when usable.
  std::vector<std::size_t> failing_points;
  bool feasible() const { return failing_points.empty(); }
};

/// A = 0; B = 0 except the fixed entry. Reports where the denominator fails.
InitialCoefficients default_initial_coefficients(const ModelClass& model, const PointSet& points);

}  // namespace qapprox
