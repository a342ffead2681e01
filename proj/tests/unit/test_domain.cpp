#include <cmath>
#include <sstream>

#include "doctest.h"
#include "qapprox/domain.hpp"
#include "qapprox/error.hpp"

using namespace qapprox;

TEST_CASE("grid enumeration counts and endpoints") {
  const Grid line{{-1.0}, {1.0}, {0.1}};
  const PointSet pts = enumerate_points(line);
  REQUIRE(pts.size() == 21);
  CHECK(pts[0][0] == -1.0);
  CHECK(pts[20][0] == 1.0);

  const Grid square{{-1.0, -1.0}, {1.0, 1.0}, {0.1, 0.1}};
  CHECK(enumerate_points(square).size() == 441);

  const PointSet single = enumerate_points(Grid{{0.0}, {0.0}, {1.0}});
  REQUIRE(single.size() == 1);
  CHECK(single[0][0] == 0.0);
}

TEST_CASE("lexicographic order, last axis fastest") {
  const PointSet pts = enumerate_points(Grid{{0.0, 0.0}, {1.0, 2.0}, {1.0, 1.0}});
  REQUIRE(pts.size() == 6);
  CHECK(pts[0][0] == 0.0);
  CHECK(pts[0][1] == 0.0);
  CHECK(pts[1][1] == 1.0);
  CHECK(pts[2][1] == 2.0);
  CHECK(pts[3][0] == 1.0);
  CHECK(pts[3][1] == 0.0);
}

TEST_CASE("coordinates are lower + k * step") {
  const Grid g{{-1.0}, {1.0}, {0.1}};
  const PointSet pts = enumerate_points(g);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) CHECK(pts[k][0] == -1.0 + static_cast<double>(k) * 0.1);
}

TEST_CASE("endpoint inclusion for awkward steps") {
  for (double step : {0.1, 0.05, 0.3, 1.0 / 3.0, 0.7}) {
    const Grid g{{-2.0, 0.5}, {1.0, 2.6}, {step, step}};
    const PointSet pts = enumerate_points(g);
    double max0 = -1e300, max1 = -1e300;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      max0 = std::max(max0, pts[k][0]);
      max1 = std::max(max1, pts[k][1]);
    }
    CHECK(max0 <= 1.0 + 1e-12);
    CHECK(max1 <= 2.6 + 1e-12);
    // Axis lengths that are whole multiples of the step end exactly on `upper`.
    if (std::fabs(std::round(3.0 / step) - 3.0 / step) < 1e-9) CHECK(std::fabs(max0 - 1.0) <= 1e-12);
  }
}

TEST_CASE("invalid grids") {
  CHECK_THROWS_AS(enumerate_points(Grid{{1.0}, {0.0}, {0.1}}), ConfigError);
  CHECK_THROWS_AS(enumerate_points(Grid{{0.0}, {1.0}, {0.0}}), ConfigError);
  CHECK_THROWS_AS(enumerate_points(Grid{{0.0}, {1.0, 2.0}, {0.1}}), ConfigError);
  CHECK_THROWS_AS(enumerate_points(Grid{{}, {}, {}}), ConfigError);
}

TEST_CASE("sampling") {
  const Grid g{{-1.0}, {1.0}, {1.0}};
  const auto zero = sample(parse("0", {"x"}), g);
  for (double v : zero.values) CHECK(v == 0.0);

  const auto ident = sample(parse("x", {"x"}), g);
  CHECK(ident.values == std::vector<double>{-1.0, 0.0, 1.0});

  const auto f = sample(parse("(-x+y^3+x^4)^4", {"x", "y"}), Grid{{-1.0, -1.0}, {1.0, 1.0}, {0.1, 0.1}});
  // (-1, 1) is row 0 (x = -1), column 20 (y = 1).
  CHECK(f.values[20] == 81.0);
  CHECK(f.scale() == 81.0);
}

TEST_CASE("resampling is stable") {
  const Grid g{{-1.0, -1.0}, {1.0, 1.0}, {0.25, 0.5}};
  const auto e = parse("x*y - y^2", {"x", "y"});
  const auto a = sample(e, g);
  const auto b = sample(e, g);
  CHECK(a.values == b.values);
}

TEST_CASE("sampling errors name the point") {
  try {
    sample(parse("1 / x", {"x"}), Grid{{-1.0}, {1.0}, {1.0}});
    FAIL("expected EvalError");
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find("(0)") != std::string::npos);
  }
  CHECK_THROWS_AS(sample(parse("x", {"x"}), Grid{{0.0, 0.0}, {1.0, 1.0}, {1.0, 1.0}}), ConfigError);
}

TEST_CASE("explicit point clouds") {
  PointSet cloud(2, {0.0, 1.0, 2.0, 3.0});
  const auto f = sample(parse("x + y", {"x", "y"}), cloud);
  CHECK(f.values == std::vector<double>{1.0, 5.0});
  CHECK_FALSE(f.grid.has_value());
  CHECK_THROWS_AS(PointSet(2, {1.0, 2.0, 3.0}), ConfigError);
  CHECK_THROWS_AS(make_sampled(PointSet(1, {0.0}), {1.0, 2.0}), ConfigError);
}

TEST_CASE("csv export") {
  const auto f = sample(parse("x", {"x"}), Grid{{0.0}, {1.0}, {0.5}});
  std::ostringstream out;
  write_csv(out, f);
  CHECK(out.str() == "x1,f\n0,0\n0.5,0.5\n1,1\n");
}
