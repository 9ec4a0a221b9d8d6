#pragma once

// Expression language for map, curve and fold components.
//
//   tuple  := '(' expr (',' expr)* ')' | expr
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' exponent)?          exponent := ['-'] integer, right assoc.
//   atom   := number | ident | func '(' expr ')' | '(' expr ')'
//
// '^' binds tighter than unary minus, so -u^2 is -(u^2).  Implicit
// multiplication ("2u") is rejected.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "singcrit/error.hpp"
#include "singcrit/jet.hpp"

namespace singcrit {

enum class Func { Sqrt, Sin, Cos, Exp };

constexpr std::string_view func_name(Func f) noexcept {
  switch (f) {
    case Func::Sqrt: return "sqrt";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
  }
  return "";
}

namespace detail {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class NodeKind { Number, Variable, Add, Sub, Mul, Div, Neg, Pow, Call };

struct Node {
  NodeKind kind;
  std::size_t position = 0;
  double number = 0.0;
  int variable = -1;
  int exponent = 0;
  Func func = Func::Sqrt;
  NodePtr lhs;
  NodePtr rhs;
};

inline int precedence(NodeKind k) noexcept {
  switch (k) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    default: return 5;
  }
}

/// Shortest decimal text that reads back as exactly x.
inline std::string format_number(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Immutable expression tree over a declared variable list.
class Expr {
 public:
  Expr() = default;
  Expr(detail::NodePtr root, std::vector<std::string> variables)
      : root_(std::move(root)), variables_(std::move(variables)) {}

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  bool empty() const noexcept { return root_ == nullptr; }

  /// Canonical text: minimal parentheses, shortest round-tripping numbers.
  std::string to_string() const {
    std::string out;
    print(*root_, out);
    return out;
  }

  /// Evaluates with `values[i]` bound to variable i. T is double or a jet.
  /// Jet failures are rethrown with the offending column attached.
  template <class T>
  T evaluate(std::span<const T> values) const {
    if (values.size() != variables_.size())
      throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(variables_.size()) + " variable values");
    return eval<T>(*root_, values);
  }

  const detail::Node& root() const { return *root_; }

 private:
  template <class T>
  static T constant_like(const T& proto, double c) {
    if constexpr (std::is_same_v<T, double>) {
      return c;
    } else {
      return T(proto.order(), c);
    }
  }

  template <class T>
  T eval(const detail::Node& n, std::span<const T> values) const {
    using detail::NodeKind;
    try {
      switch (n.kind) {
        case NodeKind::Number: return constant_like(values.empty() ? T{} : values[0], n.number);
        case NodeKind::Variable: return values[static_cast<std::size_t>(n.variable)];
        case NodeKind::Add: return eval(*n.lhs, values) + eval(*n.rhs, values);
        case NodeKind::Sub: return eval(*n.lhs, values) - eval(*n.rhs, values);
        case NodeKind::Mul: return eval(*n.lhs, values) * eval(*n.rhs, values);
        case NodeKind::Div: {
          T num = eval(*n.lhs, values);
          T den = eval(*n.rhs, values);
          if constexpr (std::is_same_v<T, double>) {
            if (den == 0.0) throw Error(ErrorCode::DivisionBySingular, "division by zero");
          }
          return num / den;
        }
        case NodeKind::Neg: return -eval(*n.lhs, values);
        case NodeKind::Pow: {
          T base = eval(*n.lhs, values);
          if constexpr (std::is_same_v<T, double>) {
            if (n.exponent < 0 && base == 0.0) throw Error(ErrorCode::DivisionBySingular, "negative power of zero");
            return std::pow(base, n.exponent);
          } else {
            return pow(base, n.exponent);
          }
        }
        case NodeKind::Call: {
          T arg = eval(*n.lhs, values);
          switch (n.func) {
            case Func::Sqrt:
              if constexpr (std::is_same_v<T, double>) {
                if (arg < 0.0) throw Error(ErrorCode::SqrtOfNonpositive, "square root of a negative number");
                return std::sqrt(arg);
              } else {
                return sqrt(arg);
              }
            case Func::Sin: {
              using std::sin;
              return sin(arg);
            }
            case Func::Cos: {
              using std::cos;
              return cos(arg);
            }
            case Func::Exp: {
              using std::exp;
              return exp(arg);
            }
          }
        }
      }
    } catch (const Error& e) {
      if (e.position()) throw;
      throw Error(e.code(), e.detail(), n.position);
    }
    throw Error(ErrorCode::InvalidArgument, "corrupt expression node");
  }

  void print(const detail::Node& n, std::string& out) const {
    using detail::NodeKind;
    using detail::precedence;
    const int p = precedence(n.kind);
    auto child = [&](const detail::Node& c, bool strict) {
      const int cp = precedence(c.kind);
      const bool paren = strict ? cp <= p : cp < p;
      if (paren) out += '(';
      print(c, out);
      if (paren) out += ')';
    };
    switch (n.kind) {
      case NodeKind::Number: out += detail::format_number(n.number); return;
      case NodeKind::Variable: out += variables_[static_cast<std::size_t>(n.variable)]; return;
      case NodeKind::Add:
      case NodeKind::Sub:
      case NodeKind::Mul:
      case NodeKind::Div: {
        static constexpr std::string_view ops[] = {" + ", " - ", "*", "/"};
        child(*n.lhs, false);
        out += ops[static_cast<int>(n.kind) - static_cast<int>(NodeKind::Add)];
        child(*n.rhs, true);
        return;
      }
      case NodeKind::Neg:
        out += '-';
        child(*n.lhs, false);
        return;
      case NodeKind::Pow:
        child(*n.lhs, true);
        out += '^';
        out += std::to_string(n.exponent);
        return;
      case NodeKind::Call:
        out += func_name(n.func);
        out += '(';
        print(*n.lhs, out);
        out += ')';
        return;
    }
  }

  detail::NodePtr root_;
  std::vector<std::string> variables_;
};

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, std::vector<std::string> variables)
      : text_(text), variables_(std::move(variables)) {}

  std::vector<Expr> parse_tuple() {
    skip_space();
    if (at_end()) throw Error(ErrorCode::SyntaxError, "empty input", pos_);
    std::vector<NodePtr> items;
    if (peek() == '(') {
      const std::size_t open = pos_;
      ++pos_;
      items.push_back(parse_expr());
      while (match(',')) items.push_back(parse_expr());
      expect(')', open);
      if (items.size() == 1) {
        // Plain grouping: the closing parenthesis may be followed by more input.
        pos_ = 0;
        items.clear();
        items.push_back(parse_expr());
      }
    } else {
      items.push_back(parse_expr());
    }
    skip_space();
    if (!at_end()) throw Error(ErrorCode::SyntaxError, std::string("unexpected '") + peek() + "'", pos_);
    std::vector<Expr> out;
    out.reserve(items.size());
    for (auto& n : items) out.emplace_back(std::move(n), variables_);
    return out;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool match(char c) {
    skip_space();
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, std::size_t opened_at) {
    if (match(c)) return;
    skip_space();
    if (at_end())
      throw Error(ErrorCode::SyntaxError, std::string("missing '") + c + "' for the parenthesis opened at column " +
                                              std::to_string(opened_at),
                  pos_);
    throw Error(ErrorCode::SyntaxError, std::string("expected '") + c + "' but found '" + peek() + "'", pos_);
  }

  static std::shared_ptr<Node> make(NodeKind kind, std::size_t pos, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->position = pos;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (match('+')) {
        lhs = make(NodeKind::Add, at, lhs, parse_term());
      } else if (match('-')) {
        lhs = make(NodeKind::Sub, at, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_space();
      const std::size_t at = pos_;
      if (match('*')) {
        lhs = make(NodeKind::Mul, at, lhs, parse_unary());
      } else if (match('/')) {
        lhs = make(NodeKind::Div, at, lhs, parse_unary());
      } else {
        reject_implicit_product();
        return lhs;
      }
    }
  }

  void reject_implicit_product() {
    skip_space();
    const char c = peek();
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == '.' || c == '_')
      throw Error(ErrorCode::SyntaxError, "implicit multiplication is not allowed; use '*'", pos_);
  }

  NodePtr parse_unary() {
    skip_space();
    const std::size_t at = pos_;
    if (match('-')) return make(NodeKind::Neg, at, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    skip_space();
    const std::size_t at = pos_;
    if (!match('^')) return base;
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Pow;
    n->position = at;
    n->lhs = std::move(base);
    n->exponent = parse_exponent();
    return n;
  }

  // Right-associative chain of integer exponents, folded to one integer.
  int parse_exponent() {
    skip_space();
    bool paren = false;
    const std::size_t open = pos_;
    if (peek() == '(') {
      paren = true;
      ++pos_;
      skip_space();
    }
    bool negative = false;
    if (peek() == '-') {
      negative = true;
      ++pos_;
      skip_space();
    }
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      throw Error(ErrorCode::SyntaxError, "exponent must be an integer", pos_);
    long value = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1000) throw Error(ErrorCode::SyntaxError, "exponent too large", pos_);
      ++pos_;
    }
    if (peek() == '.') throw Error(ErrorCode::SyntaxError, "exponent must be an integer", pos_);
    if (paren) expect(')', open);
    long e = negative ? -value : value;
    skip_space();
    if (match('^')) {
      const int rest = parse_exponent();
      if (rest < 0) throw Error(ErrorCode::SyntaxError, "negative exponent in an exponent chain", pos_);
      long r = 1;
      for (int i = 0; i < rest; ++i) {
        r *= e;
        if (std::labs(r) > 1000) throw Error(ErrorCode::SyntaxError, "exponent too large", pos_);
      }
      e = r;
    }
    return static_cast<int>(e);
  }

  NodePtr parse_atom() {
    skip_space();
    const std::size_t at = pos_;
    if (at_end()) throw Error(ErrorCode::SyntaxError, "unexpected end of input", pos_);
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) name += text_[pos_++];
      for (Func f : {Func::Sqrt, Func::Sin, Func::Cos, Func::Exp}) {
        if (name != func_name(f)) continue;
        skip_space();
        const std::size_t open = pos_;
        if (!match('(')) throw Error(ErrorCode::SyntaxError, "function '" + name + "' needs an argument list", pos_);
        NodePtr arg = parse_expr();
        if (match(',')) throw Error(ErrorCode::ArityError, "function '" + name + "' takes one argument", pos_ - 1);
        expect(')', open);
        auto n = make(NodeKind::Call, at, std::move(arg));
        n->func = f;
        return n;
      }
      for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i] == name) {
          auto n = make(NodeKind::Variable, at);
          n->variable = static_cast<int>(i);
          return n;
        }
      }
      throw Error(ErrorCode::UnknownIdentifier, "'" + name + "' is not a declared variable or function", at);
    }
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (match(',')) throw Error(ErrorCode::SyntaxError, "tuples are only allowed at the top level", pos_ - 1);
      expect(')', at);
      return inner;
    }
    throw Error(ErrorCode::SyntaxError, std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t at = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) ++end;
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < text_.size() && (text_[e] == '+' || text_[e] == '-')) ++e;
      if (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) {
        while (e < text_.size() && std::isdigit(static_cast<unsigned char>(text_[e]))) ++e;
        end = e;
      }
    }
    const std::string token(text_.substr(at, end - at));
    char* stop = nullptr;
    const double value = std::strtod(token.c_str(), &stop);
    if (stop != token.c_str() + token.size() || token == ".")
      throw Error(ErrorCode::SyntaxError, "malformed number '" + token + "'", at);
    pos_ = end;
    auto n = make(NodeKind::Number, at);
    n->number = value;
    return n;
  }

  std::string_view text_;
  std::vector<std::string> variables_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses either a single expression or a parenthesized, comma separated
/// tuple. A single-element result is a scalar expression.
inline std::vector<Expr> parse_components(std::string_view text, std::vector<std::string> variables) {
  return detail::Parser(text, std::move(variables)).parse_tuple();
}

inline Expr parse_expr(std::string_view text, std::vector<std::string> variables) {
  auto parts = parse_components(text, std::move(variables));
  if (parts.size() != 1)
    throw Error(ErrorCode::ArityError, "expected a scalar expression, got " + std::to_string(parts.size()) +
                                           " components");
  return std::move(parts.front());
}

inline std::string to_string(const std::vector<Expr>& components) {
  if (components.size() == 1) return components.front().to_string();
  std::string out = "(";
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) out += ", ";
    out += components[i].to_string();
  }
  return out + ")";
}

}  // namespace singcrit
