#include "qapprox/format.hpp"

#include <charconv>

namespace qapprox {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string format_point(std::span<const double> point) {
  std::string out = "(";
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) out += ", ";
    out += format_double(point[i]);
  }
  out += ')';
  return out;
}

}  // namespace qapprox
