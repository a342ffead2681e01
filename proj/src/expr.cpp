#include "qapprox/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "qapprox/error.hpp"

namespace qapprox {

NodePtr make_number(double value) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kNumber;
  n->value = value;
  return n;
}

NodePtr make_variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kVariable;
  n->variable = index;
  return n;
}

NodePtr make_unary(NodeKind kind, NodePtr operand) {
  if (kind != NodeKind::kNegate && kind != NodeKind::kAbs) {
    throw std::invalid_argument("make_unary: not a unary kind");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(operand);
  return n;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  switch (kind) {
    case NodeKind::kAdd:
    case NodeKind::kSub:
    case NodeKind::kMul:
    case NodeKind::kDiv:
      break;
    default:
      throw std::invalid_argument("make_binary: not a binary kind");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_power(NodePtr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kPower;
  n->lhs = std::move(base);
  n->exponent = exponent;
  return n;
}

namespace {

double int_power(double base, int exponent) {
  if (exponent < 0) {
    if (base == 0.0) throw EvalError("division by zero in negative power");
    return 1.0 / int_power(base, -exponent);
  }
  double result = 1.0;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return result;
}

// Recursive-descent parser over a string_view; positions are byte offsets.
class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("unexpected '" + std::string(1, src_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(NodeKind::kAdd, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(NodeKind::kMul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(NodeKind::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(NodeKind::kNegate, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make_power(base, parse_exponent());
    return base;
  }

  // Integer literal with optional sign, possibly followed by another '^'.
  int parse_exponent() {
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) {
      negative = src_[pos_] == '-';
      ++pos_;
      skip_ws();
    }
    const std::size_t digits_start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits_start) {
      throw ParseError("exponent must be an integer literal", digits_start);
    }
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
      throw ParseError("non-integer exponent", start);
    }
    long long value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + digits_start, src_.data() + pos_, value);
    if (ec != std::errc() || value > 1024) throw ParseError("exponent out of range", digits_start);
    long long exponent = negative ? -value : value;
    if (accept('^')) {
      const std::size_t tower_pos = pos_;
      const int rest = parse_exponent();
      if (rest < 0) throw ParseError("non-integer exponent", tower_pos);
      long long folded = 1;
      for (int i = 0; i < rest; ++i) {
        folded *= exponent;
        if (folded > 1024 || folded < -1024) throw ParseError("exponent out of range", start);
      }
      exponent = folded;
    }
    return static_cast<int>(exponent);
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError("expected operand", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return make_number(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    const auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it != vars_.end()) {
      return make_variable(static_cast<std::size_t>(it - vars_.begin()));
    }
    if (name == "abs") {
      if (!accept('(')) throw ParseError("expected '(' after abs", pos_);
      NodePtr inner = parse_expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return make_unary(NodeKind::kAbs, inner);
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

void print(const Node& n, const std::vector<std::string>& vars, std::string& out) {
  switch (n.kind) {
    case NodeKind::kNumber: {
      char buf[64];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, n.value);
      out.append(buf, ptr);
      return;
    }
    case NodeKind::kVariable:
      out += vars[n.variable];
      return;
    case NodeKind::kNegate:
      out += "(-";
      print(*n.lhs, vars, out);
      out += ')';
      return;
    case NodeKind::kAbs:
      out += "abs(";
      print(*n.lhs, vars, out);
      out += ')';
      return;
    case NodeKind::kPower:
      out += '(';
      print(*n.lhs, vars, out);
      out += ")^";
      out += std::to_string(n.exponent);
      return;
    default: {
      const char op = n.kind == NodeKind::kAdd   ? '+'
                      : n.kind == NodeKind::kSub ? '-'
                      : n.kind == NodeKind::kMul ? '*'
                                                 : '/';
      out += '(';
      print(*n.lhs, vars, out);
      out += ' ';
      out += op;
      out += ' ';
      print(*n.rhs, vars, out);
      out += ')';
    }
  }
}

}  // namespace

Expression::Expression(NodePtr root, std::vector<std::string> variables)
    : root_(std::move(root)), variables_(std::move(variables)) {
  if (!root_) throw std::invalid_argument("Expression: null root");
  referenced_.assign(variables_.size(), false);
  compile(*root_, 1);
}

void Expression::compile(const Node& node, std::size_t depth) {
  max_stack_ = std::max(max_stack_, depth);
  switch (node.kind) {
    case NodeKind::kNumber:
      program_.push_back({Op::kConst, 0, 0, node.value});
      return;
    case NodeKind::kVariable:
      if (node.variable >= variables_.size()) {
        throw std::invalid_argument("Expression: variable index out of range");
      }
      referenced_[node.variable] = true;
      max_variable_ = std::max(max_variable_, node.variable + 1);
      program_.push_back({Op::kVar, 0, node.variable, 0.0});
      return;
    case NodeKind::kNegate:
      compile(*node.lhs, depth);
      program_.push_back({Op::kNeg});
      return;
    case NodeKind::kAbs:
      compile(*node.lhs, depth);
      program_.push_back({Op::kAbs});
      return;
    case NodeKind::kPower:
      compile(*node.lhs, depth);
      program_.push_back({Op::kPow, node.exponent});
      return;
    case NodeKind::kAdd:
    case NodeKind::kSub:
    case NodeKind::kMul:
    case NodeKind::kDiv: {
      compile(*node.lhs, depth);
      compile(*node.rhs, depth + 1);
      const Op op = node.kind == NodeKind::kAdd   ? Op::kAdd
                    : node.kind == NodeKind::kSub ? Op::kSub
                    : node.kind == NodeKind::kMul ? Op::kMul
                                                  : Op::kDiv;
      program_.push_back({op});
      return;
    }
  }
}

double Expression::operator()(std::span<const double> point) const {
  if (point.size() < max_variable_) {
    throw EvalError("unassigned variable '" + variables_[point.size()] + "'");
  }
  std::vector<double> stack;
  stack.reserve(max_stack_);
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::kConst:
        stack.push_back(in.value);
        break;
      case Op::kVar:
        stack.push_back(point[in.index]);
        break;
      case Op::kNeg:
        stack.back() = -stack.back();
        break;
      case Op::kAbs:
        stack.back() = std::fabs(stack.back());
        break;
      case Op::kPow:
        stack.back() = int_power(stack.back(), in.exponent);
        break;
      default: {
        const double rhs = stack.back();
        stack.pop_back();
        double& lhs = stack.back();
        switch (in.op) {
          case Op::kAdd: lhs += rhs; break;
          case Op::kSub: lhs -= rhs; break;
          case Op::kMul: lhs *= rhs; break;
          default:
            if (rhs == 0.0) throw EvalError("division by zero");
            lhs /= rhs;
        }
      }
    }
  }
  return stack.back();
}

Expression parse(std::string_view source, std::vector<std::string> variables) {
  Parser parser(source, variables);
  NodePtr root = parser.parse_all();
  return Expression(std::move(root), std::move(variables));
}

double evaluate(const Expression& expr, std::span<const double> point) { return expr(point); }

double evaluate(const Expression& expr, const std::map<std::string, double>& assignment) {
  std::vector<double> point(expr.variables().size(), 0.0);
  for (std::size_t i = 0; i < point.size(); ++i) {
    const std::string& name = expr.variables()[i];
    const auto it = assignment.find(name);
    if (it != assignment.end()) {
      point[i] = it->second;
    } else if (expr.references(i)) {
      throw EvalError("unassigned variable '" + name + "'");
    }
  }
  return expr(point);
}

std::string to_string(const Expression& expr) {
  std::string out;
  print(expr.root(), expr.variables(), out);
  return out;
}

}  // namespace qapprox
