#pragma once

// One-sided directional derivatives along geodesics.
//
// The difference quotient (f(exp_p(hX)) - f(p)) / h is sampled on the step
// ladder h_k = h0 * 2^-k and extrapolated to h -> 0+ with a Richardson
// tableau. Forward quotients have an error expansion in integer powers of h,
// so column j removes the h^j term with factor 1 / (2^j - 1).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ivopt/error.hpp"
#include "ivopt/function.hpp"
#include "ivopt/interval.hpp"
#include "ivopt/manifold.hpp"

namespace ivopt {

struct DerivScheme {
  double h0 = 1e-2;
  int levels = 6;
  int rich_order = 2;
  double tol = 1e-6;

  void validate() const {
    if (!(h0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "derivative h0 must be positive");
    if (levels < 2) throw Error(ErrorKind::InvalidArgument, "derivative ladder needs at least 2 levels");
    if (rich_order < 0) throw Error(ErrorKind::InvalidArgument, "Richardson depth must be >= 0");
    if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "derivative tolerance must be positive");
  }

  double step(int k) const { return std::ldexp(h0, -k); }
};

struct GhDerivative {
  Interval value;
  double center_part = 0.0;
  /// Signed limit of the width quotient; nonnegative when the width is
  /// non-decreasing along the geodesic.
  double width_part = 0.0;
  bool monotone_width_ok = false;
};

namespace detail {

/// Diagonal of the Richardson tableau built from forward quotients.
inline std::vector<double> richardson_diagonal(const std::vector<double>& quotients, int depth) {
  std::vector<double> diag(quotients.size());
  std::vector<std::vector<double>> table(quotients.size());
  for (std::size_t k = 0; k < quotients.size(); ++k) {
    table[k].push_back(quotients[k]);
    const int top = std::min<int>(static_cast<int>(k), depth);
    for (int j = 1; j <= top; ++j) {
      const double factor = std::ldexp(1.0, j) - 1.0;
      const double cur = table[k][j - 1];
      const double up = table[k - 1][j - 1];
      table[k].push_back(cur + (cur - up) / factor);
    }
    diag[k] = table[k].back();
  }
  return diag;
}

inline double rel_scale(double x) { return std::max(1.0, std::abs(x)); }

}  // namespace detail

/// One-sided directional derivative of f at p along the geodesic with
/// initial velocity X. Throws NotConverged when the last two extrapolated
/// estimates differ by more than tol (relative to max(1, |estimate|)).
inline double dir_deriv(const RealFn& f, const Point& p, const TangentDirection& x,
                        const DerivScheme& scheme = {}) {
  scheme.validate();
  const double f0 = f(p);
  std::vector<double> q(static_cast<std::size_t>(scheme.levels));
  for (int k = 0; k < scheme.levels; ++k) {
    const double h = scheme.step(k);
    q[static_cast<std::size_t>(k)] = (f(exp_map(p, x, h)) - f0) / h;
  }
  const auto diag = detail::richardson_diagonal(q, scheme.rich_order);
  const double last = diag.back();
  const double change = std::abs(last - diag[diag.size() - 2]);
  if (change > scheme.tol * detail::rel_scale(last)) {
    throw Error(ErrorKind::NotConverged, "directional derivative of '" + f.description() +
                                             "' did not settle (last change " + std::to_string(change) + ")");
  }
  return last;
}

/// gH-directional derivative: limit of gh_diff(f(gamma(h)), f(p)) / h in the
/// Hausdorff metric. Centers and signed width quotients are extrapolated
/// separately; the width of the limit is the absolute value of the width
/// limit, which is exactly what the gH quotient <dc/h, |dw|/h> converges to.
inline GhDerivative gh_dir_deriv(const IvFn& f, const Point& p, const TangentDirection& x,
                                 const DerivScheme& scheme = {}) {
  scheme.validate();
  const Interval f0 = f(p);
  const auto n = static_cast<std::size_t>(scheme.levels);
  std::vector<double> qc(n), qw(n), widths(n);
  for (int k = 0; k < scheme.levels; ++k) {
    const double h = scheme.step(k);
    const Interval fk = f(exp_map(p, x, h));
    const auto idx = static_cast<std::size_t>(k);
    qc[idx] = (fk.center() - f0.center()) / h;
    qw[idx] = (fk.halfwidth() - f0.halfwidth()) / h;
    widths[idx] = fk.halfwidth();
  }
  const auto dc = detail::richardson_diagonal(qc, scheme.rich_order);
  const auto dw = detail::richardson_diagonal(qw, scheme.rich_order);

  const Interval last = Interval::from_center_width(dc.back(), std::abs(dw.back()));
  const Interval prev = Interval::from_center_width(dc[n - 2], std::abs(dw[n - 2]));
  const double change = hausdorff(last, prev);
  const double scale = std::max({1.0, std::abs(last.lb()), std::abs(last.ub())});
  if (change > scheme.tol * scale) {
    throw Error(ErrorKind::NotConverged, "gH-directional derivative of " + f.description() +
                                             " did not settle (last change " + std::to_string(change) + ")");
  }

  // Ladder points in increasing s are widths[n-1], ..., widths[0].
  bool monotone = widths[n - 1] >= f0.halfwidth() - 1e-10;
  for (std::size_t k = n - 1; k > 0 && monotone; --k) {
    monotone = widths[k - 1] >= widths[k] - 1e-10;
  }

  GhDerivative out;
  out.value = last;
  out.center_part = dc.back();
  out.width_part = dw.back();
  out.monotone_width_ok = monotone;
  return out;
}

/// True iff the width of f is non-decreasing (to 1e-10) over `grid` evenly
/// spaced samples of s in [0, 1] along the geodesic.
inline bool width_monotone_along(const IvFn& f, const Geodesic& g, int grid) {
  if (grid < 2) throw Error(ErrorKind::InvalidArgument, "monotonicity grid needs at least 2 points");
  double prev = f.width()(g.start);
  for (int k = 1; k < grid; ++k) {
    const double s = static_cast<double>(k) / (grid - 1);
    const double w = f.width()(k == grid - 1 ? g.end : geodesic_at(g, s));
    if (w < prev - 1e-10) return false;
    prev = w;
  }
  return true;
}

}  // namespace ivopt
