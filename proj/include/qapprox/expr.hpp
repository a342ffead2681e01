#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qapprox {

enum class NodeKind { kNumber, kVariable, kNegate, kAdd, kSub, kMul, kDiv, kPower, kAbs };

/// Immutable AST node. Which fields are meaningful depends on `kind`:
/// kNumber uses `value`, kVariable uses `variable`, kPower uses `lhs` and
/// `exponent`, kNegate/kAbs use `lhs`, the binary kinds use `lhs` and `rhs`.
struct Node {
  NodeKind kind = NodeKind::kNumber;
  double value = 0.0;
  std::size_t variable = 0;
  int exponent = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(double value);
NodePtr make_variable(std::size_t index);
NodePtr make_unary(NodeKind kind, NodePtr operand);
NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs);
NodePtr make_power(NodePtr base, int exponent);

/// A parsed arithmetic expression over a fixed, ordered list of variables.
///
/// The tree is compiled once into a postfix program; evaluation runs that
/// program and never touches the tree. Instances are immutable and can be
/// evaluated concurrently.
class Expression {
 public:
  Expression(NodePtr root, std::vector<std::string> variables);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  const std::vector<std::string>& variables() const { return variables_; }
  bool references(std::size_t variable) const { return referenced_.at(variable); }

  /// Evaluates at `point`, given in the order of `variables()`.
  /// Throws EvalError on division by zero or a short point.
  double operator()(std::span<const double> point) const;

 private:
  enum class Op : unsigned char { kConst, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kAbs };
  struct Instr {
    Op op;
    int exponent = 0;
    std::size_t index = 0;
    double value = 0.0;
  };

  void compile(const Node& node, std::size_t depth);

  NodePtr root_;
  std::vector<std::string> variables_;
  std::vector<Instr> program_;
  std::size_t max_stack_ = 0;
  std::vector<bool> referenced_;
  std::size_t max_variable_ = 0;  // one past the highest referenced index
};

/// Parses `source` over `variables`.
///
/// Grammar (whitespace-insensitive, no implicit multiplication):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' ['-'] INTEGER)*     right-associative
///   primary := NUMBER | IDENT | 'abs' '(' expr ')' | '(' expr ')'
///
/// Exponents must be integer literals; `x^2^3` is `x^8`.
Expression parse(std::string_view source, std::vector<std::string> variables);

double evaluate(const Expression& expr, std::span<const double> point);
double evaluate(const Expression& expr, const std::map<std::string, double>& assignment);

/// Fully parenthesised text that parses back to the same tree.
std::string to_string(const Expression& expr);

}  // namespace qapprox
