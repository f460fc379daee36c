#pragma once

// A small arithmetic expression language over named manifold features.
//
// Grammar (ASCII):
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          right associative
//   atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
//
// so that -2^2 == -4 and 2^3^2 == 512. Identifiers `pi` and `e` are
// constants; any other bare identifier is a feature reference resolved when
// the expression is bound to a manifold.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ivopt/error.hpp"
#include "ivopt/manifold.hpp"

namespace ivopt::expr {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Constant {
  std::string name;
};
struct FeatureRef {
  std::string name;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  char op;  // one of + - * / ^
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  std::string function;
  NodePtr argument;
};

struct Node {
  std::variant<Number, Constant, FeatureRef, Negate, Binary, Call> v;
  std::size_t offset = 0;
};

inline const std::set<std::string, std::less<>>& known_functions() {
  static const std::set<std::string, std::less<>> fns{"ln", "exp", "sin", "cos", "sqrt", "abs"};
  return fns;
}

inline bool is_constant_name(std::string_view s) { return s == "pi" || s == "e"; }

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) {
      throw SyntaxError(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'",
                        {"operator", "end of input"});
    }
    return root;
  }

 private:
  static NodePtr make(std::size_t off, decltype(Node::v) v) {
    auto n = std::make_shared<Node>();
    n->v = std::move(v);
    n->offset = off;
    return n;
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('+')) {
        lhs = make(at, Binary{'+', lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make(at, Binary{'-', lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      skip_ws();
      const std::size_t at = pos_;
      if (accept('*')) {
        lhs = make(at, Binary{'*', lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make(at, Binary{'/', lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    skip_ws();
    const std::size_t at = pos_;
    if (accept('-')) return make(at, Negate{parse_unary()});
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_atom();
    skip_ws();
    const std::size_t at = pos_;
    if (accept('^')) return make(at, Binary{'^', base, parse_unary()});
    return base;
  }

  NodePtr parse_atom() {
    skip_ws();
    const std::size_t at = pos_;
    if (pos_ >= text_.size()) {
      throw SyntaxError(pos_, "unexpected end of input", {"number", "identifier", "'('", "'-'"});
    }
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) throw SyntaxError(pos_, "unbalanced parenthesis", {"')'"});
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
        ++end;
      }
      std::string name(text_.substr(pos_, end - pos_));
      pos_ = end;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        if (!known_functions().contains(name)) {
          throw Error(ErrorKind::UnknownFunction,
                      "unknown function '" + name + "' at offset " + std::to_string(at));
        }
        ++pos_;
        NodePtr arg = parse_expr();
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          throw SyntaxError(pos_, "function '" + name + "' takes one argument", {"')'"});
        }
        if (!accept(')')) throw SyntaxError(pos_, "unterminated call", {"')'"});
        return make(at, Call{std::move(name), std::move(arg)});
      }
      if (is_constant_name(name)) return make(at, Constant{std::move(name)});
      return make(at, FeatureRef{std::move(name)});
    }
    throw SyntaxError(pos_, "unexpected character '" + std::string(1, c) + "'",
                      {"number", "identifier", "'('", "'-'"});
  }

  NodePtr parse_number() {
    const std::size_t at = pos_;
    double value = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) throw SyntaxError(pos_, "malformed number", {"number"});
    pos_ += static_cast<std::size_t>(ptr - first);
    return make(at, Number{value});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Immutable parsed expression.
class Ast {
 public:
  explicit Ast(NodePtr root) : root_(std::move(root)) {}
  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

 private:
  NodePtr root_;
};

inline Ast parse(std::string_view text) { return Ast(detail::Parser(text).parse()); }

inline bool structurally_equal(const Node& a, const Node& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.v);
        if constexpr (std::is_same_v<T, Number>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Constant> || std::is_same_v<T, FeatureRef>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurally_equal(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) &&
                 structurally_equal(*x.rhs, *y.rhs);
        } else {
          return x.function == y.function && structurally_equal(*x.argument, *y.argument);
        }
      },
      a.v);
}

inline bool structurally_equal(const Ast& a, const Ast& b) {
  return structurally_equal(a.root(), b.root());
}

/// Fully parenthesized text that reparses to an identical tree.
inline std::string to_string(const Node& n) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          char buf[40];
          std::snprintf(buf, sizeof buf, "%.17g", x.value);
          return buf;
        } else if constexpr (std::is_same_v<T, Constant> || std::is_same_v<T, FeatureRef>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return "(-" + to_string(*x.operand) + ")";
        } else if constexpr (std::is_same_v<T, Binary>) {
          return "(" + to_string(*x.lhs) + " " + x.op + " " + to_string(*x.rhs) + ")";
        } else {
          return x.function + "(" + to_string(*x.argument) + ")";
        }
      },
      n.v);
}

inline std::string to_string(const Ast& a) { return to_string(a.root()); }

inline void collect_features(const Node& n, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, FeatureRef>) {
          out.insert(x.name);
        } else if constexpr (std::is_same_v<T, Negate>) {
          collect_features(*x.operand, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          collect_features(*x.lhs, out);
          collect_features(*x.rhs, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          collect_features(*x.argument, out);
        }
      },
      n.v);
}

// ---------------------------------------------------------------------------
// Features

/// Names a manifold exposes to expressions: Circle `theta`; Euclidean(n)
/// `x1`..`xn`; Spd(n) `logdet`, `trace`.
inline std::vector<std::string> feature_names(const Manifold& m) {
  switch (m.kind()) {
    case ManifoldKind::Circle: return {"theta"};
    case ManifoldKind::Euclidean: {
      std::vector<std::string> names;
      for (int i = 1; i <= m.dim(); ++i) names.push_back("x" + std::to_string(i));
      return names;
    }
    case ManifoldKind::Spd: return {"logdet", "trace"};
  }
  return {};
}

inline double spd_logdet(const Eigen::MatrixXd& p) {
  Eigen::LLT<Eigen::MatrixXd> llt(p);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NonPositiveDefinite, "Cholesky factorization failed");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

/// A feature resolved against a manifold: index into `feature_names`.
struct BoundFeature {
  ManifoldKind kind;
  int index;

  double operator()(const Point& p) const {
    if (p.kind() != kind) {
      throw Error(ErrorKind::BaseMismatch, "point is not on the manifold the expression is bound to");
    }
    switch (kind) {
      case ManifoldKind::Circle: return p.theta();
      case ManifoldKind::Euclidean:
        if (index >= p.vec().size()) {
          throw Error(ErrorKind::BaseMismatch, "Euclidean point has too few coordinates");
        }
        return p.vec()(index);
      case ManifoldKind::Spd: return index == 0 ? spd_logdet(p.mat()) : p.mat().trace();
    }
    return 0.0;
  }
};

inline BoundFeature bind_feature(const std::string& name, const Manifold& m) {
  const auto names = feature_names(m);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return {m.kind(), static_cast<int>(i)};
  }
  std::string avail;
  for (const auto& n : names) avail += (avail.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::UnknownFeature,
              "feature '" + name + "' is not provided by " + m.name() + " (available: " + avail + ")");
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, std::string("non-finite result in ") + what);
  return v;
}

inline double eval_node(const Node& n, const Point* p, const Manifold* m) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Number>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return x.name == "pi" ? std::numbers::pi : std::numbers::e;
        } else if constexpr (std::is_same_v<T, FeatureRef>) {
          if (p == nullptr || m == nullptr) {
            throw Error(ErrorKind::UnknownFeature, "feature '" + x.name + "' used without a point");
          }
          return bind_feature(x.name, *m)(*p);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval_node(*x.operand, p, m);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const double a = eval_node(*x.lhs, p, m);
          const double b = eval_node(*x.rhs, p, m);
          switch (x.op) {
            case '+': return checked(a + b, "addition");
            case '-': return checked(a - b, "subtraction");
            case '*': return checked(a * b, "multiplication");
            case '/':
              if (b == 0.0) throw Error(ErrorKind::NonFinite, "division by zero");
              return checked(a / b, "division");
            case '^': {
              const double r = std::pow(a, b);
              if (std::isnan(r)) {
                throw Error(ErrorKind::DomainError, "power of negative base with fractional exponent");
              }
              return checked(r, "power");
            }
          }
          throw Error(ErrorKind::InvalidArgument, "bad operator");
        } else {
          const double a = eval_node(*x.argument, p, m);
          const std::string& f = x.function;
          if (f == "ln") {
            if (!(a > 0.0)) throw Error(ErrorKind::DomainError, "ln of non-positive value " + std::to_string(a));
            return std::log(a);
          }
          if (f == "sqrt") {
            if (a < 0.0) throw Error(ErrorKind::DomainError, "sqrt of negative value " + std::to_string(a));
            return std::sqrt(a);
          }
          if (f == "exp") return checked(std::exp(a), "exp");
          if (f == "sin") return std::sin(a);
          if (f == "cos") return std::cos(a);
          if (f == "abs") return std::abs(a);
          throw Error(ErrorKind::UnknownFunction, "unknown function '" + f + "'");
        }
      },
      n.v);
}

}  // namespace detail

/// Evaluates an expression that references no features.
inline double evaluate_constant(const Ast& a) { return detail::eval_node(a.root(), nullptr, nullptr); }

/// Evaluates at `p`, resolving feature references against `m`.
inline double evaluate(const Ast& a, const Manifold& m, const Point& p) {
  return detail::eval_node(a.root(), &p, &m);
}

}  // namespace ivopt::expr
