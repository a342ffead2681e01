#include <cmath>
#include <random>

#include "doctest.h"
#include "qapprox/bisection.hpp"
#include "qapprox/error.hpp"
#include "qapprox/oscillation.hpp"

using namespace qapprox;

namespace {

std::vector<double> residuals_on_grid(const std::string& r, double step = 0.01) {
  return sample(parse(r, {"x"}), Grid{{-1.0}, {1.0}, {step}}).values;
}

void check_report_shape(std::span<const double> r, const AlternationReport& rep) {
  REQUIRE(rep.points.size() == rep.signs.size());
  if (rep.exact_fit) return;
  CHECK(rep.count == rep.points.size());
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    CHECK(std::abs(r[rep.points[i]]) >= (1.0 - rep.tau) * rep.max_abs);
    CHECK(rep.signs[i] == (r[rep.points[i]] > 0 ? 1 : -1));
    if (i > 0) {
      CHECK(rep.signs[i] == -rep.signs[i - 1]);
      CHECK(rep.points[i] > rep.points[i - 1]);
    }
  }
}

}  // namespace

TEST_CASE("abs minus one half alternates three times") {
  const auto r = residuals_on_grid("abs(x) - 0.5");
  const AlternationReport rep = extract_alternations(r);
  CHECK_FALSE(rep.exact_fit);
  CHECK(rep.max_abs == doctest::Approx(0.5));
  CHECK(rep.count == 3);
  CHECK(rep.points == std::vector<std::size_t>{0, 100, 200});
  CHECK(rep.signs == std::vector<int>{1, -1, 1});
  check_report_shape(r, rep);
  CHECK(check_polynomial_optimality(1, rep));
}

TEST_CASE("identity under the zero constant") {
  const auto r = residuals_on_grid("x");
  const AlternationReport rep = extract_alternations(r);
  CHECK(rep.count == 2);
  CHECK(rep.signs == std::vector<int>{-1, 1});
  CHECK(check_polynomial_optimality(0, rep));
  CHECK_FALSE(check_polynomial_optimality(1, rep));
}

TEST_CASE("zero residuals give an exact-fit report") {
  const std::vector<double> r(7, 0.0);
  const AlternationReport rep = extract_alternations(r);
  CHECK(rep.exact_fit);
  CHECK(rep.count == 7);
  CHECK(rep.points.empty());
  CHECK(check_polynomial_optimality(3, rep));

  const std::vector<double> noise{1e-16, -2e-16, 0.0};
  CHECK_FALSE(extract_alternations(noise).exact_fit);
  CHECK(extract_alternations(noise, kDefaultTau, 1e-9).exact_fit);
  CHECK(extract_alternations(noise, kDefaultTau, 1e-9).count == 3);
  CHECK_THROWS_AS(extract_alternations(noise, kDefaultTau, -1.0), ConfigError);
}

TEST_CASE("a run reports its largest point") {
  const std::vector<double> r{0.999, 1.0, 0.9995, -0.2, -1.0, 0.9999};
  const AlternationReport rep = extract_alternations(r);
  CHECK(rep.points == std::vector<std::size_t>{1, 4, 5});
  CHECK(extract_alternations(r, 1e-6).points == std::vector<std::size_t>{1, 4});
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(extract_alternations(std::vector<double>{}), ConfigError);
  CHECK_THROWS_AS(extract_alternations(std::vector<double>{1.0}, -0.1), ConfigError);
  CHECK_THROWS_AS(extract_alternations(std::vector<double>{1.0}, 1.0), ConfigError);
}

TEST_CASE("optimality thresholds") {
  AlternationReport rep;
  rep.count = 3;
  CHECK(check_polynomial_optimality(1, rep));
  CHECK_FALSE(check_polynomial_optimality(2, rep));
  rep.count = 4;
  CHECK(check_rational_optimality(1, 1, 0, rep));
  CHECK_FALSE(check_rational_optimality(2, 1, 0, rep));
  rep.count = 3;
  CHECK(check_rational_optimality(1, 1, 1, rep));
}

TEST_CASE("defect table") {
  struct Row {
    int n, m, p, q, d;
  };
  const Row table[] = {{2, 2, 1, 1, 1}, {3, 1, 3, 1, 0}, {5, 2, 3, 2, 0}, {0, 0, 0, 0, 0}, {4, 3, 1, 0, 3},
                       {4, 3, 2, 0, 2}, {3, 3, 0, 3, 0}, {6, 2, 5, 1, 1}, {1, 4, 0, 2, 1}, {2, 5, 0, 1, 2}};
  for (const Row& t : table) {
    CAPTURE(t.n);
    CAPTURE(t.m);
    const DefectInfo info = compute_defect(t.n, t.m, t.p, t.q);
    CHECK(info.nu == t.n - t.p);
    CHECK(info.mu == t.m - t.q);
    CHECK(info.d == t.d);
  }
  CHECK_THROWS_AS(compute_defect(1, 1, 2, 0), ConfigError);
  CHECK_THROWS_AS(compute_defect(1, 1, 0, 2), ConfigError);
  CHECK_THROWS_AS(compute_defect(-1, 1, 0, 0), ConfigError);
}

TEST_CASE("effective degree") {
  CHECK(effective_degree(std::vector<double>{1.0, 2.0, 0.0}) == 1);
  CHECK(effective_degree(std::vector<double>{1.0, 0.0, 1e-12}) == 0);
  CHECK(effective_degree(std::vector<double>{0.0, 0.0, 3.0}) == 2);
  CHECK(effective_degree(std::vector<double>{0.0, 0.0}) == 0);
}

TEST_CASE("scaling and negation symmetry") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> r(1 + rng() % 40);
    for (auto& v : r) v = u(rng);
    // plant a few ties at the maximum
    const double peak = 1.5;
    for (int k = 0; k < 3; ++k) r[rng() % r.size()] = (rng() % 2 ? peak : -peak);
    const double c = std::ldexp(1.0, static_cast<int>(rng() % 20) - 10);
    std::vector<double> scaled(r), negated(r);
    for (auto& v : scaled) v *= c;
    for (auto& v : negated) v = -v;
    const AlternationReport a = extract_alternations(r), b = extract_alternations(scaled),
                            n = extract_alternations(negated);
    check_report_shape(r, a);
    CHECK(a.points == b.points);
    CHECK(a.signs == b.signs);
    CHECK(a.points == n.points);
    for (std::size_t i = 0; i < a.signs.size(); ++i) CHECK(n.signs[i] == -a.signs[i]);
  }
}

TEST_CASE("converged polynomial fits pass the alternation test") {
  const Grid grid{{-1.0}, {1.0}, {0.01}};
  const std::string targets[] = {"abs(x)", "x^3", "x^4 - x", "abs(x - 0.3)", "x^5 + 2*x^2"};
  for (const std::string& t : targets) {
    for (int n = 0; n <= 3; ++n) {
      CAPTURE(t);
      CAPTURE(n);
      ModelClass m;
      for (int k = 0; k <= n; ++k) m.numerator.push_back(parse("x^" + std::to_string(k), {"x"}));
      const auto f = sample(parse(t, {"x"}), grid);
      const double eps = 1e-7;
      const FitResult r = fit(m, f, {.epsilon = eps});
      TabulatedModel tab(m, f.points);
      const auto res = residuals(tab, r.coefficients, f);
      const double tau = r.achieved_deviation > 0 ? std::min(0.5, 10.0 * eps / r.achieved_deviation) : kDefaultTau;
      const AlternationReport rep = extract_alternations(res, tau, eps);
      check_report_shape(res, rep);
      INFO("deviation " << r.achieved_deviation << " count " << rep.count << " tau " << tau);
      CHECK(check_polynomial_optimality(n, rep));
    }
  }
}
