#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>

#include "doctest.h"
#include "qapprox/error.hpp"
#include "qapprox/expr.hpp"

using namespace qapprox;

namespace {

// Independent tree-walking evaluator; the library runs a compiled postfix program.
double naive_eval(const Node& n, const std::vector<double>& point) {
  switch (n.kind) {
    case NodeKind::kNumber: return n.value;
    case NodeKind::kVariable: return point[n.variable];
    case NodeKind::kNegate: return -naive_eval(*n.lhs, point);
    case NodeKind::kAbs: return std::fabs(naive_eval(*n.lhs, point));
    case NodeKind::kAdd: return naive_eval(*n.lhs, point) + naive_eval(*n.rhs, point);
    case NodeKind::kSub: return naive_eval(*n.lhs, point) - naive_eval(*n.rhs, point);
    case NodeKind::kMul: return naive_eval(*n.lhs, point) * naive_eval(*n.rhs, point);
    case NodeKind::kDiv: return naive_eval(*n.lhs, point) / naive_eval(*n.rhs, point);
    case NodeKind::kPower: {
      const double base = naive_eval(*n.lhs, point);
      double r = 1.0;
      for (int i = 0; i < n.exponent; ++i) r *= base;
      return r;
    }
  }
  return NAN;
}

bool same_tree(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::kNumber: return a.value == b.value;
    case NodeKind::kVariable: return a.variable == b.variable;
    case NodeKind::kNegate:
    case NodeKind::kAbs: return same_tree(*a.lhs, *b.lhs);
    case NodeKind::kPower: return a.exponent == b.exponent && same_tree(*a.lhs, *b.lhs);
    default: return same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
  }
}

// Random trees without division, so both evaluators stay finite. Exponents
// stay at or below 3, where repeated squaring and a plain product loop perform
// the same multiplications, so results must agree bit for bit.
NodePtr random_tree(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 7);
  switch (pick(rng)) {
    case 0: return make_number(std::uniform_int_distribution<int>(0, 40)(rng) / 8.0);
    case 1: return make_variable(std::uniform_int_distribution<std::size_t>(0, 1)(rng));
    case 2: return make_unary(NodeKind::kNegate, random_tree(rng, depth - 1));
    case 3: return make_binary(NodeKind::kAdd, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 4: return make_binary(NodeKind::kSub, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 5: return make_binary(NodeKind::kMul, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 6: return make_power(random_tree(rng, depth - 1), std::uniform_int_distribution<int>(0, 3)(rng));
    default: return make_unary(NodeKind::kAbs, random_tree(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("parse builds the expected tree") {
  const auto e = parse("(-x + y^3 + x^4)^4", {"x", "y"});
  CHECK(e.root().kind == NodeKind::kPower);
  CHECK(e.root().exponent == 4);

  const auto v = parse("x", {"x"});
  CHECK(v.root().kind == NodeKind::kVariable);
  CHECK(v.root().variable == 0);
}

TEST_CASE("precedence and associativity") {
  const std::vector<double> p{2.0};
  CHECK(parse("-x^2", {"x"})(p) == -4.0);
  CHECK(parse("(-x)^2", {"x"})(p) == 4.0);
  CHECK(parse("1 - x - 1", {"x"})(p) == -2.0);
  CHECK(parse("8 / x / 2", {"x"})(p) == 2.0);
  CHECK(parse("1 + 2 * x", {"x"})(p) == 5.0);
  CHECK(parse("x^2^3", {"x"})(p) == 256.0);  // x^(2^3)
  CHECK(parse("x^-1", {"x"})(p) == 0.5);
  CHECK(parse("2*-x", {"x"})(p) == -4.0);
  CHECK(parse("  x\t*\n3 ", {"x"})(p) == 6.0);
  CHECK(parse("1.5e1", {})(p) == 15.0);
  CHECK(parse("abs(1 - x)", {"x"})(p) == 1.0);
}

TEST_CASE("syntax errors report offsets") {
  try {
    parse("x +* y", {"x", "y"});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 3);
  }
  CHECK_THROWS_AS(parse("", {"x"}), ParseError);
  CHECK_THROWS_AS(parse("x + z", {"x"}), ParseError);
  CHECK_THROWS_AS(parse("x^2.5", {"x"}), ParseError);
  CHECK_THROWS_AS(parse("x^y", {"x", "y"}), ParseError);
  CHECK_THROWS_AS(parse("2x", {"x"}), ParseError);  // no implicit multiplication
  CHECK_THROWS_AS(parse("(x + 1", {"x"}), ParseError);
  CHECK_THROWS_AS(parse("x)", {"x"}), ParseError);
}

TEST_CASE("evaluate examples") {
  const auto f = parse("(-x+y^3+x^4)^4", {"x", "y"});
  CHECK(f(std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(f(std::vector<double>{-1.0, 1.0}) == 81.0);
  CHECK(parse("x*y + 2", {"x", "y"})(std::vector<double>{3.0, 4.0}) == 14.0);
  CHECK(evaluate(f, std::map<std::string, double>{{"x", -1.0}, {"y", 1.0}}) == 81.0);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(parse("1 / x", {"x"})(std::vector<double>{0.0}), EvalError);
  CHECK_THROWS_AS(parse("x^-2", {"x"})(std::vector<double>{0.0}), EvalError);
  CHECK_THROWS_AS(evaluate(parse("x + y", {"x", "y"}), std::map<std::string, double>{{"x", 1.0}}), EvalError);
  // Unreferenced variables need no value.
  CHECK(evaluate(parse("x", {"x", "y"}), std::map<std::string, double>{{"x", 1.0}}) == 1.0);
}

TEST_CASE("print then parse reproduces the tree and its values") {
  std::mt19937 rng(7);
  const std::vector<std::string> vars{"x", "y"};
  for (int trial = 0; trial < 500; ++trial) {
    const Expression e(random_tree(rng, 5), vars);
    const Expression back = parse(to_string(e), vars);
    REQUIRE_MESSAGE(same_tree(e.root(), back.root()), to_string(e));
    for (int k = 0; k < 5; ++k) {
      const std::vector<double> p{std::uniform_real_distribution<double>(-2, 2)(rng),
                                  std::uniform_real_distribution<double>(-2, 2)(rng)};
      CHECK(std::bit_cast<std::uint64_t>(e(p)) == std::bit_cast<std::uint64_t>(back(p)));
    }
  }
}

TEST_CASE("compiled evaluation agrees with a tree walk") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Expression e(random_tree(rng, 6), {"x", "y"});
    const std::vector<double> p{std::uniform_real_distribution<double>(-1.5, 1.5)(rng),
                                std::uniform_real_distribution<double>(-1.5, 1.5)(rng)};
    CHECK(std::bit_cast<std::uint64_t>(e(p)) == std::bit_cast<std::uint64_t>(naive_eval(e.root(), p)));
  }
}
