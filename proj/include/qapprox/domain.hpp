#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qapprox/expr.hpp"

namespace qapprox {

/// Axis-aligned rectangular grid with endpoints included on every axis.
struct Grid {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> step;

  /// Throws ConfigError unless sizes agree, lower <= upper and step > 0.
  void validate() const;
  std::size_t dimension() const { return lower.size(); }
  std::size_t axis_count(std::size_t axis) const;
  std::size_t cardinality() const;
};

/// Ordered finite point cloud, stored row-major (one row of `dimension` coordinates per point).
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dimension, std::vector<double> coordinates);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return dimension_ == 0 ? 0 : coords_.size() / dimension_; }
  std::span<const double> operator[](std::size_t k) const {
    return {coords_.data() + k * dimension_, dimension_};
  }

 private:
  std::size_t dimension_ = 0;
  std::vector<double> coords_;
};

/// Grid points in lexicographic order, last axis fastest. Coordinates are
/// lower + k * step; the last point on each axis is snapped to `upper`.
PointSet enumerate_points(const Grid& grid);

/// Target values on an ordered point set.
struct SampledFunction {
  PointSet points;
  std::vector<double> values;
  std::optional<Grid> grid;  // set when the points come from a grid

  std::size_t size() const { return values.size(); }
  /// max |values|, at least 1; the scale used for relative tolerances.
  double scale() const;
};

/// Evaluates `f` at every grid point. Evaluation errors are rethrown as
/// EvalError naming the offending point.
SampledFunction sample(const Expression& f, const Grid& grid);
SampledFunction sample(const Expression& f, PointSet points);

/// Wraps explicit values (must be finite and match the point count).
SampledFunction make_sampled(PointSet points, std::vector<double> values);

/// CSV with header x1..xd,f and one row per point.
void write_csv(std::ostream& out, const SampledFunction& f);

}  // namespace qapprox
