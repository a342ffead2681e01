#include "qapprox/domain.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "qapprox/error.hpp"
#include "qapprox/format.hpp"

namespace qapprox {

void Grid::validate() const {
  if (lower.empty()) throw ConfigError("grid: dimension must be positive");
  if (upper.size() != lower.size() || step.size() != lower.size()) {
    throw ConfigError("grid: lower, upper and step must have the same length");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !std::isfinite(step[i])) {
      throw ConfigError("grid: non-finite bound on axis " + std::to_string(i));
    }
    if (lower[i] > upper[i]) throw ConfigError("grid: lower > upper on axis " + std::to_string(i));
    if (!(step[i] > 0.0)) throw ConfigError("grid: step must be positive on axis " + std::to_string(i));
  }
}

std::size_t Grid::axis_count(std::size_t axis) const {
  // Relative guard so that (1 - (-1)) / 0.1 = 19.999999999999996 still counts 21 points.
  const double ratio = (upper[axis] - lower[axis]) / step[axis];
  return static_cast<std::size_t>(std::floor(ratio + 1e-9 * std::max(1.0, ratio))) + 1;
}

std::size_t Grid::cardinality() const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < dimension(); ++i) n *= axis_count(i);
  return n;
}

PointSet::PointSet(std::size_t dimension, std::vector<double> coordinates)
    : dimension_(dimension), coords_(std::move(coordinates)) {
  if (dimension_ == 0) throw ConfigError("point set: dimension must be positive");
  if (coords_.size() % dimension_ != 0) {
    throw ConfigError("point set: coordinate count is not a multiple of the dimension");
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) throw ConfigError("point set: non-finite coordinate");
  }
}

PointSet enumerate_points(const Grid& grid) {
  grid.validate();
  const std::size_t d = grid.dimension();
  std::vector<std::vector<double>> axes(d);
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t n = grid.axis_count(i);
    axes[i].resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      axes[i][k] = grid.lower[i] + static_cast<double>(k) * grid.step[i];
    }
    // Snap the last point when it lands within the rounding guard of `upper`.
    if (std::fabs(axes[i].back() - grid.upper[i]) <= 1e-9 * std::max(1.0, std::fabs(grid.upper[i]))) {
      axes[i].back() = grid.upper[i];
    }
  }

  const std::size_t total = grid.cardinality();
  std::vector<double> coords;
  coords.reserve(total * d);
  std::vector<std::size_t> index(d, 0);
  for (std::size_t p = 0; p < total; ++p) {
    for (std::size_t i = 0; i < d; ++i) coords.push_back(axes[i][index[i]]);
    for (std::size_t i = d; i-- > 0;) {
      if (++index[i] < axes[i].size()) break;
      index[i] = 0;
    }
  }
  return PointSet(d, std::move(coords));
}

double SampledFunction::scale() const {
  double s = 1.0;
  for (double v : values) s = std::max(s, std::fabs(v));
  return s;
}

SampledFunction make_sampled(PointSet points, std::vector<double> values) {
  if (values.size() != points.size()) {
    throw ConfigError("sampled function: " + std::to_string(values.size()) + " values for " +
                      std::to_string(points.size()) + " points");
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw EvalError("sampled function: non-finite value at point " + std::to_string(k));
    }
  }
  SampledFunction out;
  out.points = std::move(points);
  out.values = std::move(values);
  return out;
}

SampledFunction sample(const Expression& f, PointSet points) {
  if (f.variables().size() != points.dimension()) {
    throw ConfigError("sample: expression has " + std::to_string(f.variables().size()) +
                      " variables but the domain has dimension " + std::to_string(points.dimension()));
  }
  std::vector<double> values(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    try {
      values[k] = f(points[k]);
    } catch (const EvalError& e) {
      throw EvalError(std::string(e.what()) + " at point " + format_point(points[k]));
    }
    if (!std::isfinite(values[k])) {
      throw EvalError("non-finite value at point " + format_point(points[k]));
    }
  }
  return make_sampled(std::move(points), std::move(values));
}

SampledFunction sample(const Expression& f, const Grid& grid) {
  SampledFunction out = sample(f, enumerate_points(grid));
  out.grid = grid;
  return out;
}

void write_csv(std::ostream& out, const SampledFunction& f) {
  const std::size_t d = f.points.dimension();
  for (std::size_t i = 0; i < d; ++i) out << 'x' << (i + 1) << ',';
  out << "f\n";
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (double c : f.points[k]) out << format_double(c) << ',';
    out << format_double(f.values[k]) << '\n';
  }
}

}  // namespace qapprox
