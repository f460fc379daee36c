#pragma once

// Closed bounded real intervals with Minkowski arithmetic, the generalized
// Hukuhara difference, the Hausdorff metric and three order relations:
// the total center-halfwidth orders for minimization / maximization and the
// partial endpoint (lu) order.
//
// No outward rounding is performed; these are plain floating point bounds.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "ivopt/error.hpp"

namespace ivopt {

class Interval {
 public:
  constexpr Interval() = default;

  /// Throws InvalidArgument when lb > ub or either bound is NaN.
  Interval(double lb, double ub) : lb_(lb), ub_(ub) {
    if (!(lb <= ub)) {
      throw Error(ErrorKind::InvalidArgument,
                  "interval lower bound exceeds upper bound: [" + std::to_string(lb) + "," +
                      std::to_string(ub) + "]");
    }
  }

  /// Degenerate interval [x, x].
  static Interval point(double x) { return {x, x}; }

  static Interval from_center_width(double center, double halfwidth) {
    if (!(halfwidth >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument,
                  "negative halfwidth " + std::to_string(halfwidth));
    }
    return {center - halfwidth, center + halfwidth};
  }

  double lb() const noexcept { return lb_; }
  double ub() const noexcept { return ub_; }
  double center() const noexcept { return 0.5 * (lb_ + ub_); }
  double halfwidth() const noexcept { return 0.5 * (ub_ - lb_); }
  bool degenerate() const noexcept { return lb_ == ub_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lb_ = 0.0;
  double ub_ = 0.0;
};

enum class OrderRelation { MinOrder, MaxOrder, LuPartial };
enum class OrderOutcome { Less, Equal, Greater, Incomparable };

inline const char* to_string(OrderRelation r) {
  switch (r) {
    case OrderRelation::MinOrder: return "min";
    case OrderRelation::MaxOrder: return "max";
    case OrderRelation::LuPartial: return "lu";
  }
  return "?";
}

inline const char* to_string(OrderOutcome o) {
  switch (o) {
    case OrderOutcome::Less: return "Less";
    case OrderOutcome::Equal: return "Equal";
    case OrderOutcome::Greater: return "Greater";
    case OrderOutcome::Incomparable: return "Incomparable";
  }
  return "?";
}

inline Interval add(const Interval& a, const Interval& b) {
  return {a.lb() + b.lb(), a.ub() + b.ub()};
}

inline Interval scale(double n, const Interval& t) {
  if (n >= 0.0) return {n * t.lb(), n * t.ub()};
  return {n * t.ub(), n * t.lb()};
}

/// s1*T1 + s2*T2, computed in center/halfwidth form.
inline Interval combine(double s1, const Interval& t1, double s2, const Interval& t2) {
  return Interval::from_center_width(s1 * t1.center() + s2 * t2.center(),
                                     std::abs(s1) * t1.halfwidth() + std::abs(s2) * t2.halfwidth());
}

/// Generalized Hukuhara difference by the endpoint formula. Always exists.
inline Interval gh_diff(const Interval& a, const Interval& b) {
  const double dl = a.lb() - b.lb();
  const double du = a.ub() - b.ub();
  return {std::min(dl, du), std::max(dl, du)};
}

inline double hausdorff(const Interval& a, const Interval& b) {
  return std::max(std::abs(a.lb() - b.lb()), std::abs(a.ub() - b.ub()));
}

/// Center-equality tolerance used when none is supplied.
inline double default_center_eps(const Interval& a, const Interval& b) {
  return 1e-9 * std::max({1.0, std::abs(a.center()), std::abs(b.center())});
}

namespace detail {

// -1, 0, +1 with a symmetric dead zone of width eps.
inline int sign_with_tol(double x, double eps) {
  if (x < -eps) return -1;
  if (x > eps) return 1;
  return 0;
}

}  // namespace detail

/// Compares two intervals under `rel`. `eps` is the absolute tolerance under
/// which two centers (and, on a center tie, two halfwidths; or endpoints for
/// the lu order) count as equal. Without `eps` the relative default
/// `default_center_eps` applies; pass 0 for exact comparison.
///
/// Under MaxOrder, Greater means T1 is preferred for maximization: larger
/// center, or equal center and smaller halfwidth.
inline OrderOutcome compare(const Interval& t1, const Interval& t2,
                            OrderRelation rel = OrderRelation::MinOrder,
                            std::optional<double> eps = std::nullopt) {
  if (eps && !(*eps >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "comparison tolerance must be non-negative");
  }
  const double tol = eps.value_or(default_center_eps(t1, t2));
  switch (rel) {
    case OrderRelation::MinOrder: {
      const int c = detail::sign_with_tol(t1.center() - t2.center(), tol);
      if (c < 0) return OrderOutcome::Less;
      if (c > 0) return OrderOutcome::Greater;
      const int w = detail::sign_with_tol(t1.halfwidth() - t2.halfwidth(), tol);
      if (w < 0) return OrderOutcome::Less;
      if (w > 0) return OrderOutcome::Greater;
      return OrderOutcome::Equal;
    }
    case OrderRelation::MaxOrder: {
      const int c = detail::sign_with_tol(t1.center() - t2.center(), tol);
      if (c > 0) return OrderOutcome::Greater;
      if (c < 0) return OrderOutcome::Less;
      const int w = detail::sign_with_tol(t1.halfwidth() - t2.halfwidth(), tol);
      if (w < 0) return OrderOutcome::Greater;
      if (w > 0) return OrderOutcome::Less;
      return OrderOutcome::Equal;
    }
    case OrderRelation::LuPartial: {
      const int l = detail::sign_with_tol(t1.lb() - t2.lb(), tol);
      const int u = detail::sign_with_tol(t1.ub() - t2.ub(), tol);
      if (l == 0 && u == 0) return OrderOutcome::Equal;
      if (l <= 0 && u <= 0) return OrderOutcome::Less;
      if (l >= 0 && u >= 0) return OrderOutcome::Greater;
      return OrderOutcome::Incomparable;
    }
  }
  return OrderOutcome::Incomparable;
}

/// T1 <=min T2.
inline bool min_le(const Interval& t1, const Interval& t2, std::optional<double> eps = std::nullopt) {
  const auto o = compare(t1, t2, OrderRelation::MinOrder, eps);
  return o == OrderOutcome::Less || o == OrderOutcome::Equal;
}

/// T1 <min T2, i.e. T1 <=min T2 and T1 != T2. Ties inside the tolerance are
/// not strict.
inline bool min_lt(const Interval& t1, const Interval& t2, std::optional<double> eps = std::nullopt) {
  return compare(t1, t2, OrderRelation::MinOrder, eps) == OrderOutcome::Less;
}

/// Canonical text form `[lb,ub]` with 17 significant digits.
inline std::string format(const Interval& t) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.17g,%.17g]", t.lb(), t.ub());
  return buf;
}

/// Center-halfwidth form `<c,w>` with `digits` significant digits.
inline std::string format_cw(const Interval& t, int digits = 17) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "<%.*g,%.*g>", digits, t.center(), digits, t.halfwidth());
  return buf;
}

inline std::ostream& operator<<(std::ostream& os, const Interval& t) { return os << format(t); }

/// Accepts `[lb,ub]` or `<c,w>` with optional surrounding whitespace.
inline Interval parse_interval(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  const std::string_view s = trim(text);
  const auto bad = [&](const char* why) {
    return Error(ErrorKind::InvalidArgument,
                 std::string("cannot parse interval '") + std::string(text) + "': " + why);
  };
  if (s.size() < 5) throw bad("too short");
  const char open = s.front();
  const char close = s.back();
  const bool endpoints = open == '[' && close == ']';
  const bool cw = open == '<' && close == '>';
  if (!endpoints && !cw) throw bad("expected [lb,ub] or <c,w>");
  const std::string_view body = s.substr(1, s.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos) {
    throw bad("expected exactly one comma");
  }
  auto number = [&](std::string_view part) {
    const std::string str(trim(part));
    if (str.empty()) throw bad("empty bound");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(str, &used);
    } catch (const std::exception&) {
      throw bad("not a number");
    }
    if (used != str.size()) throw bad("trailing characters in number");
    return v;
  };
  const double a = number(body.substr(0, comma));
  const double b = number(body.substr(comma + 1));
  if (endpoints) return Interval(a, b);
  return Interval::from_center_width(a, b);
}

}  // namespace ivopt
