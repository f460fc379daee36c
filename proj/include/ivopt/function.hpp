#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ivopt/error.hpp"
#include "ivopt/expr.hpp"
#include "ivopt/interval.hpp"
#include "ivopt/manifold.hpp"

namespace ivopt {

/// Real-valued function on a manifold: either a parsed expression bound to a
/// manifold, or a named built-in closure.
class RealFn {
 public:
  using Eval = std::function<double(const Point&)>;

  RealFn(std::string description, Eval fn) : description_(std::move(description)), fn_(std::move(fn)) {}

  /// Parses `text` and binds its feature references to `m`. Unknown
  /// features are reported here rather than at evaluation time.
  static RealFn parse(std::string_view text, const Manifold& m) {
    auto ast = std::make_shared<const expr::Ast>(expr::parse(text));
    std::set<std::string> features;
    expr::collect_features(ast->root(), features);
    for (const auto& f : features) expr::bind_feature(f, m);
    RealFn out(std::string(text), [ast, m](const Point& p) { return expr::evaluate(*ast, m, p); });
    out.ast_ = ast;
    return out;
  }

  static RealFn constant(double c) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    return RealFn(buf, [c](const Point&) { return c; });
  }

  double operator()(const Point& p) const {
    const double v = fn_(p);
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::NonFinite, "function '" + description_ + "' produced a non-finite value");
    }
    return v;
  }

  const std::string& description() const noexcept { return description_; }
  /// The parsed tree when built from text.
  const expr::Ast* ast() const noexcept { return ast_.get(); }

 private:
  std::string description_;
  Eval fn_;
  std::shared_ptr<const expr::Ast> ast_;
};

inline constexpr double kWidthClampTol = 1e-12;

/// Interval-valued function p -> <center(p), width(p)>.
class IvFn {
 public:
  IvFn(RealFn center, RealFn width) : center_(std::move(center)), width_(std::move(width)) {}

  /// Zero-width embedding of a real function.
  static IvFn degenerate(RealFn f) { return IvFn(std::move(f), RealFn::constant(0.0)); }

  static IvFn parse(std::string_view center, std::string_view width, const Manifold& m) {
    return IvFn(RealFn::parse(center, m), RealFn::parse(width, m));
  }

  static IvFn constant(const Interval& t) {
    return IvFn(RealFn::constant(t.center()), RealFn::constant(t.halfwidth()));
  }

  /// Widths in [-1e-12, 0) are clamped to 0; anything more negative throws
  /// NegativeWidth.
  Interval operator()(const Point& p) const {
    const double c = center_(p);
    double w = width_(p);
    if (w < 0.0) {
      if (w < -kWidthClampTol) {
        throw Error(ErrorKind::NegativeWidth,
                    "width function '" + width_.description() + "' is negative (" + std::to_string(w) + ")");
      }
      w = 0.0;
    }
    return Interval::from_center_width(c, w);
  }

  const RealFn& center() const noexcept { return center_; }
  const RealFn& width() const noexcept { return width_; }

  std::string description() const {
    return "<" + center_.description() + ", " + width_.description() + ">";
  }

 private:
  RealFn center_;
  RealFn width_;
};

inline double eval(const RealFn& f, const Point& p) { return f(p); }
inline Interval eval_iv(const IvFn& f, const Point& p) { return f(p); }

/// Evaluates `f` at every point, throwing NegativeWidth at the first point
/// whose width is negative beyond tolerance.
inline void validate_width(const IvFn& f, const std::vector<Point>& points) {
  for (const auto& p : points) (void)f(p);
}

/// alpha*f + beta*g, both coefficients nonnegative.
inline IvFn nonneg_combination(double alpha, const IvFn& f, double beta, const IvFn& g) {
  if (alpha < 0.0 || beta < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "combination coefficients must be nonnegative");
  }
  RealFn c(std::to_string(alpha) + "*(" + f.center().description() + ")+" + std::to_string(beta) + "*(" +
               g.center().description() + ")",
           [alpha, beta, fc = f.center(), gc = g.center()](const Point& p) {
             return alpha * fc(p) + beta * gc(p);
           });
  RealFn w(std::to_string(alpha) + "*(" + f.width().description() + ")+" + std::to_string(beta) + "*(" +
               g.width().description() + ")",
           [alpha, beta, fw = f.width(), gw = g.width()](const Point& p) {
             return alpha * fw(p) + beta * gw(p);
           });
  return IvFn(std::move(c), std::move(w));
}

}  // namespace ivopt
