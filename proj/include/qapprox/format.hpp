#pragma once

#include <span>
#include <string>

namespace qapprox {

/// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

/// "(x1, x2, ...)" using format_double.
std::string format_point(std::span<const double> point);

}  // namespace qapprox
