#pragma once

// Expression parsing and evaluation for scalar test functions.
//
// Grammar (see docs/grammar.md):
//
//   expr      := term (('+' | '-') term)*
//   term      := unary (('*' | '/') unary)*
//   unary     := ('-' | '+') unary | power
//   power     := primary ('^' unary)?
//   primary   := number | constant | variable | call | '(' expr ')' | piecewise
//   call      := name '(' expr (',' expr)* ')'
//   piecewise := 'piecewise' '(' branch (',' branch)* ',' 'else' ':' expr ')'
//   branch    := cond ':' expr
//   cond      := conj ('||' conj)*
//   conj      := cmp ('&&' cmp)*
//   cmp       := expr ('<' | '<=' | '>' | '>=' | '==' | '!=') expr
//
// Values are extended reals; NaN encodes "undefined" (domain violation).

#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pcvx {

using Real = long double;

inline constexpr Real kInf = std::numeric_limits<Real>::infinity();
inline constexpr Real kUndefined = std::numeric_limits<Real>::quiet_NaN();

enum class ParseErrorKind { syntax, unknown_identifier, arity_mismatch };

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what + " at byte " + std::to_string(offset)),
        kind_(kind),
        offset_(offset) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
};

struct EvalResult {
  Real value = kUndefined;

  bool defined() const noexcept { return !std::isnan(value); }
  bool finite() const noexcept { return std::isfinite(value); }
  bool pos_inf() const noexcept { return value == kInf; }
  bool neg_inf() const noexcept { return value == -kInf; }
};

namespace detail {

enum class Op {
  constant,
  variable,
  neg,
  add,
  sub,
  mul,
  div,
  pow,
  abs,
  min,
  max,
  exp,
  log,
  sqrt,
  sin,
  cos,
  piecewise,  // children: guard0, value0, guard1, value1, ..., else_value
  lt,
  le,
  gt,
  ge,
  eq,
  ne,
  logical_and,
  logical_or,
};

struct Node {
  Op op;
  Real constant = 0;
  int variable = 0;
  std::vector<int> children;
};

struct Tree {
  std::vector<Node> nodes;
  int root = -1;
  int arity = 1;
};

inline Real guard_value(bool b) { return b ? Real(1) : Real(0); }

// Conditions evaluate to 1/0, or NaN when an operand is undefined.
inline Real eval_node(const Tree& tree, int index, std::span<const Real> point) {
  const Node& n = tree.nodes[static_cast<std::size_t>(index)];
  auto child = [&](std::size_t i) { return eval_node(tree, n.children[i], point); };

  switch (n.op) {
    case Op::constant:
      return n.constant;
    case Op::variable:
      return point[static_cast<std::size_t>(n.variable)];
    case Op::neg:
      return -child(0);
    case Op::add:
      return child(0) + child(1);
    case Op::sub:
      return child(0) - child(1);
    case Op::mul:
      return child(0) * child(1);
    case Op::div: {
      const Real num = child(0);
      const Real den = child(1);
      if (den == 0) return kUndefined;
      return num / den;
    }
    case Op::pow: {
      const Real base = child(0);
      const Real expo = child(1);
      if (base == 0 && expo < 0) return kUndefined;
      return std::pow(base, expo);
    }
    case Op::abs:
      return std::fabs(child(0));
    case Op::min:
    case Op::max: {
      Real acc = child(0);
      for (std::size_t i = 1; i < n.children.size(); ++i) {
        const Real v = child(i);
        if (std::isnan(acc) || std::isnan(v)) return kUndefined;
        acc = (n.op == Op::min) ? std::fmin(acc, v) : std::fmax(acc, v);
      }
      return acc;
    }
    case Op::exp:
      return std::exp(child(0));
    case Op::log: {
      const Real a = child(0);
      if (!(a > 0)) return kUndefined;
      return std::log(a);
    }
    case Op::sqrt: {
      const Real a = child(0);
      if (a < 0) return kUndefined;
      return std::sqrt(a);
    }
    case Op::sin:
      return std::sin(child(0));
    case Op::cos:
      return std::cos(child(0));
    case Op::piecewise: {
      const std::size_t branches = (n.children.size() - 1) / 2;
      for (std::size_t b = 0; b < branches; ++b) {
        const Real g = child(2 * b);
        if (std::isnan(g)) return kUndefined;
        if (g != 0) return child(2 * b + 1);
      }
      return child(n.children.size() - 1);
    }
    case Op::lt:
    case Op::le:
    case Op::gt:
    case Op::ge:
    case Op::eq:
    case Op::ne: {
      const Real a = child(0);
      const Real b = child(1);
      if (std::isnan(a) || std::isnan(b)) return kUndefined;
      switch (n.op) {
        case Op::lt: return guard_value(a < b);
        case Op::le: return guard_value(a <= b);
        case Op::gt: return guard_value(a > b);
        case Op::ge: return guard_value(a >= b);
        case Op::eq: return guard_value(a == b);
        default: return guard_value(a != b);
      }
    }
    case Op::logical_and:
    case Op::logical_or: {
      const Real a = child(0);
      if (std::isnan(a)) return kUndefined;
      if (n.op == Op::logical_and && a == 0) return 0;
      if (n.op == Op::logical_or && a != 0) return 1;
      const Real b = child(1);
      if (std::isnan(b)) return kUndefined;
      return guard_value(b != 0);
    }
  }
  return kUndefined;
}

inline std::string format_real(Real v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "(-inf)";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  std::string s(buf);
  if (s.front() == '-') return "(" + s + ")";
  return s;
}

inline const char* op_symbol(Op op) {
  switch (op) {
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::pow: return "^";
    case Op::lt: return "<";
    case Op::le: return "<=";
    case Op::gt: return ">";
    case Op::ge: return ">=";
    case Op::eq: return "==";
    case Op::ne: return "!=";
    case Op::logical_and: return "&&";
    case Op::logical_or: return "||";
    default: return "?";
  }
}

inline const char* function_name(Op op) {
  switch (op) {
    case Op::abs: return "abs";
    case Op::min: return "min";
    case Op::max: return "max";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sqrt: return "sqrt";
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    default: return "?";
  }
}

inline void print_node(const Tree& tree, int index, std::string& out);

// Guards are printed without enclosing parentheses; the grammar has no
// parenthesized conditions.
inline void print_cond(const Tree& tree, int index, std::string& out) {
  const Node& n = tree.nodes[static_cast<std::size_t>(index)];
  const bool logical = n.op == Op::logical_and || n.op == Op::logical_or;
  auto side = [&](int child) {
    if (logical) {
      print_cond(tree, child, out);
    } else {
      print_node(tree, child, out);
    }
  };
  side(n.children[0]);
  out += " ";
  out += op_symbol(n.op);
  out += " ";
  side(n.children[1]);
}

inline void print_node(const Tree& tree, int index, std::string& out) {
  const Node& n = tree.nodes[static_cast<std::size_t>(index)];
  switch (n.op) {
    case Op::constant:
      out += format_real(n.constant);
      return;
    case Op::variable:
      out += tree.arity == 1 ? std::string("t") : "x" + std::to_string(n.variable + 1);
      return;
    case Op::neg:
      out += "(-";
      print_node(tree, n.children[0], out);
      out += ")";
      return;
    case Op::piecewise: {
      out += "piecewise(";
      const std::size_t branches = (n.children.size() - 1) / 2;
      for (std::size_t b = 0; b < branches; ++b) {
        print_cond(tree, n.children[2 * b], out);
        out += ": ";
        print_node(tree, n.children[2 * b + 1], out);
        out += ", ";
      }
      out += "else: ";
      print_node(tree, n.children.back(), out);
      out += ")";
      return;
    }
    case Op::abs:
    case Op::min:
    case Op::max:
    case Op::exp:
    case Op::log:
    case Op::sqrt:
    case Op::sin:
    case Op::cos:
      out += function_name(n.op);
      out += "(";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += ", ";
        print_node(tree, n.children[i], out);
      }
      out += ")";
      return;
    default:
      out += "(";
      print_node(tree, n.children[0], out);
      out += " ";
      out += op_symbol(n.op);
      out += " ";
      print_node(tree, n.children[1], out);
      out += ")";
      return;
  }
}

class Parser {
 public:
  Parser(std::string_view src, int arity) : src_(src) { tree_.arity = arity; }

  Tree run() {
    skip_ws();
    if (pos_ >= src_.size()) fail(ParseErrorKind::syntax, "empty expression");
    tree_.root = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) fail(ParseErrorKind::syntax, "unexpected trailing input");
    return std::move(tree_);
  }

 private:
  [[noreturn]] void fail(ParseErrorKind kind, const std::string& msg) const {
    throw ParseError(kind, pos_, msg);
  }
  [[noreturn]] void fail_at(ParseErrorKind kind, std::size_t at, const std::string& msg) const {
    throw ParseError(kind, at, msg);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (src_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail(ParseErrorKind::syntax, "expected '" + std::string(tok) + "'");
  }

  int add(Node n) {
    tree_.nodes.push_back(std::move(n));
    return static_cast<int>(tree_.nodes.size() - 1);
  }

  int binary(Op op, int lhs, int rhs) { return add(Node{op, 0, 0, {lhs, rhs}}); }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept("+")) {
        lhs = binary(Op::add, lhs, parse_term());
      } else if (peek_minus()) {
        ++pos_;
        lhs = binary(Op::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  bool peek_minus() {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == '-';
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept("*")) {
        lhs = binary(Op::mul, lhs, parse_unary());
      } else if (accept("/")) {
        lhs = binary(Op::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept("-")) return add(Node{Op::neg, 0, 0, {parse_unary()}});
    if (accept("+")) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    const int base = parse_primary();
    if (accept("^")) return binary(Op::pow, base, parse_unary());
    return base;
  }

  std::string_view identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    return src_.substr(start, pos_ - start);
  }

  int parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const Real v = std::strtold(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
      fail_at(ParseErrorKind::syntax, start, "malformed number '" + text + "'");
    }
    return add(Node{Op::constant, v, 0, {}});
  }

  int variable_index(std::string_view name, std::size_t at) const {
    const int arity = tree_.arity;
    if (name == "t" || name == "x") {
      if (arity != 1) {
        fail_at(ParseErrorKind::arity_mismatch, at,
                "variable '" + std::string(name) + "' requires arity 1 (got " +
                    std::to_string(arity) + ")");
      }
      return 0;
    }
    if (name.size() >= 2 && name[0] == 'x') {
      int idx = 0;
      for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) return -1;
        idx = idx * 10 + (name[i] - '0');
        if (idx > 1000000) return -1;
      }
      if (idx < 1 || idx > arity) {
        fail_at(ParseErrorKind::arity_mismatch, at,
                "variable '" + std::string(name) + "' exceeds arity " + std::to_string(arity));
      }
      return idx - 1;
    }
    return -1;
  }

  int parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail(ParseErrorKind::syntax, "unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      const int inner = parse_expr();
      expect(")");
      return inner;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      fail(ParseErrorKind::syntax, std::string("unexpected character '") + c + "'");
    }

    const std::size_t at = pos_;
    const std::string_view name = identifier();

    if (name == "piecewise") return parse_piecewise();
    if (name == "pi") return add(Node{Op::constant, std::acos(Real(-1)), 0, {}});
    if (name == "e") return add(Node{Op::constant, std::exp(Real(1)), 0, {}});
    if (name == "inf") return add(Node{Op::constant, kInf, 0, {}});

    struct Fn {
      std::string_view name;
      Op op;
      int min_args;
      int max_args;
    };
    static constexpr Fn kFunctions[] = {
        {"abs", Op::abs, 1, 1},   {"min", Op::min, 2, 64},  {"max", Op::max, 2, 64},
        {"exp", Op::exp, 1, 1},   {"log", Op::log, 1, 1},   {"sqrt", Op::sqrt, 1, 1},
        {"sin", Op::sin, 1, 1},   {"cos", Op::cos, 1, 1},
    };
    for (const Fn& fn : kFunctions) {
      if (fn.name != name) continue;
      expect("(");
      std::vector<int> args{parse_expr()};
      while (accept(",")) args.push_back(parse_expr());
      expect(")");
      const int count = static_cast<int>(args.size());
      if (count < fn.min_args || count > fn.max_args) {
        fail_at(ParseErrorKind::syntax, at,
                "wrong number of arguments to '" + std::string(name) + "'");
      }
      return add(Node{fn.op, 0, 0, std::move(args)});
    }

    const int var = variable_index(name, at);
    if (var < 0) {
      fail_at(ParseErrorKind::unknown_identifier, at,
              "unknown identifier '" + std::string(name) + "'");
    }
    return add(Node{Op::variable, 0, var, {}});
  }

  int parse_piecewise() {
    expect("(");
    std::vector<int> children;
    for (;;) {
      skip_ws();
      const std::size_t save = pos_;
      if (identifier() == "else") {
        expect(":");
        children.push_back(parse_expr());
        expect(")");
        return add(Node{Op::piecewise, 0, 0, std::move(children)});
      }
      pos_ = save;
      children.push_back(parse_cond());
      expect(":");
      children.push_back(parse_expr());
      if (!accept(",")) fail(ParseErrorKind::syntax, "piecewise requires a final 'else' branch");
    }
  }

  int parse_cond() {
    int lhs = parse_conj();
    while (accept("||")) lhs = binary(Op::logical_or, lhs, parse_conj());
    return lhs;
  }

  int parse_conj() {
    int lhs = parse_cmp();
    while (accept("&&")) lhs = binary(Op::logical_and, lhs, parse_cmp());
    return lhs;
  }

  int parse_cmp() {
    const int lhs = parse_expr();
    static constexpr std::pair<std::string_view, Op> kRelops[] = {
        {"<=", Op::le}, {">=", Op::ge}, {"==", Op::eq}, {"!=", Op::ne},
        {"<", Op::lt},  {">", Op::gt},
    };
    for (const auto& [tok, op] : kRelops) {
      if (accept(tok)) return binary(op, lhs, parse_expr());
    }
    fail(ParseErrorKind::syntax, "expected comparison operator in piecewise guard");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Tree tree_;
};

}  // namespace detail

/// Immutable parsed expression. Copies share the underlying tree.
class FunctionAst {
 public:
  FunctionAst() = default;

  int arity() const noexcept { return tree_ ? tree_->arity : 0; }
  bool empty() const noexcept { return !tree_; }

  EvalResult evaluate(std::span<const Real> point) const {
    if (!tree_ || point.size() != static_cast<std::size_t>(tree_->arity)) {
      throw std::invalid_argument("point length does not match function arity");
    }
    return EvalResult{detail::eval_node(*tree_, tree_->root, point)};
  }

  /// Convenience for univariate functions.
  Real operator()(Real t) const {
    const Real p[1] = {t};
    return evaluate(std::span<const Real>(p, 1)).value;
  }

  /// Fully parenthesized rendering that reparses to an equivalent AST.
  std::string to_string() const {
    std::string out;
    if (tree_) detail::print_node(*tree_, tree_->root, out);
    return out;
  }

  friend FunctionAst parse(std::string_view source, int arity);

 private:
  explicit FunctionAst(detail::Tree tree)
      : tree_(std::make_shared<const detail::Tree>(std::move(tree))) {}

  std::shared_ptr<const detail::Tree> tree_;
};

inline FunctionAst parse(std::string_view source, int arity) {
  if (arity < 1) throw std::invalid_argument("arity must be positive");
  return FunctionAst(detail::Parser(source, arity).run());
}

}  // namespace pcvx
