#pragma once

// Sampled certifiers for geodesic convexity of real and interval-valued
// functions. Every verdict is relative to the sampled points: a
// counterexample is a genuine violation (it carries a witness that
// re-evaluates to one), while HoldsOnSamples is evidence only.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ivopt/calculus.hpp"
#include "ivopt/domain.hpp"
#include "ivopt/function.hpp"
#include "ivopt/interval.hpp"
#include "ivopt/manifold.hpp"

namespace ivopt {

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Margin a strict inequality must clear, relative to max(1, |values|).
inline constexpr double kStrictMargin = 1e-10;
/// Agreement required by the affinity check.
inline constexpr double kAffineTol = 1e-9;

enum class Verdict { HoldsOnSamples, CounterexampleFound };

inline const char* to_string(Verdict v) {
  return v == Verdict::HoldsOnSamples ? "HoldsOnSamples" : "CounterexampleFound";
}

struct Witness {
  Point p;
  Point q;
  double s = 0.0;
  std::optional<Interval> lhs;
  std::optional<Interval> rhs;
  std::string what;
};

struct ConvexityReport {
  Verdict verdict = Verdict::HoldsOnSamples;
  std::optional<Witness> counterexample;
  std::size_t samples_used = 0;
  /// Samples left out because a hypothesis (e.g. width monotonicity) failed.
  std::size_t skipped = 0;

  bool holds() const noexcept { return verdict == Verdict::HoldsOnSamples; }
};

struct SampleOptions {
  int pairs = 64;  // pairs for set checks, targets for at-a-point checks
  int grid = 33;   // evenly spaced s in [0, 1], endpoints included
  std::uint64_t seed = kDefaultSeed;

  void validate() const {
    if (pairs < 1) throw Error(ErrorKind::InvalidArgument, "need at least one sample pair");
    if (grid < 3) throw Error(ErrorKind::InvalidArgument, "convexity grid needs at least 3 points");
  }

  double s_at(int k) const { return static_cast<double>(k) / (grid - 1); }
};

/// Curve joining two points, parameterized on [0, 1].
using Path = std::function<Point(const Point&, const Point&, double)>;

inline Path geodesic_path() {
  return [](const Point& p, const Point& q, double s) { return geodesic_at(Geodesic{p, q}, s); };
}

/// Straight chord in the ambient coordinates: (1-s)p + sq. Coincides with
/// the geodesic on Euclidean space and on the circle chart; on SPD it is the
/// flat-space segment, which stays positive definite.
inline Path euclidean_chord_path() {
  return [](const Point& p, const Point& q, double s) {
    switch (p.kind()) {
      case ManifoldKind::Spd: return Point::spd((1.0 - s) * p.mat() + s * q.mat());
      default: return geodesic_at(Geodesic{p, q}, s);
    }
  };
}

namespace detail {

enum class Relation { Le, Lt, Eq };

inline double value_scale(const Interval& a, const Interval& b) {
  return std::max({1.0, std::abs(a.center()), std::abs(b.center()), a.halfwidth(), b.halfwidth()});
}

inline bool relation_holds(const Interval& lhs, const Interval& rhs, Relation rel) {
  switch (rel) {
    case Relation::Le: return min_le(lhs, rhs);
    case Relation::Lt: return min_lt(lhs, rhs, kStrictMargin * value_scale(lhs, rhs));
    case Relation::Eq: return hausdorff(lhs, rhs) <= kAffineTol * value_scale(lhs, rhs);
  }
  return false;
}

inline const char* relation_name(Relation rel) {
  switch (rel) {
    case Relation::Le: return "f(gamma(s)) <=min (1-s)f(p) + s f(q)";
    case Relation::Lt: return "f(gamma(s)) <min (1-s)f(p) + s f(q)";
    case Relation::Eq: return "f(gamma(s)) = (1-s)f(p) + s f(q)";
  }
  return "";
}

/// Runs the convexity inequality over every pair and interior grid point.
inline ConvexityReport check_pairs(const IvFn& f, const std::vector<std::pair<Point, Point>>& pairs,
                                   const SampleOptions& opt, Relation rel, const Path& path,
                                   const std::string& label = {}) {
  ConvexityReport report;
  for (const auto& [p, q] : pairs) {
    if (rel == Relation::Lt && distance(p, q) <= 1e-12) {
      ++report.skipped;
      continue;
    }
    const Interval fp = f(p);
    const Interval fq = f(q);
    ++report.samples_used;
    for (int k = 1; k < opt.grid - 1; ++k) {
      const double s = opt.s_at(k);
      const Interval lhs = f(path(p, q, s));
      const Interval rhs = combine(1.0 - s, fp, s, fq);
      if (!relation_holds(lhs, rhs, rel)) {
        report.verdict = Verdict::CounterexampleFound;
        report.counterexample =
            Witness{p, q, s, lhs, rhs, (label.empty() ? "" : label + ": ") + relation_name(rel)};
        return report;
      }
    }
  }
  return report;
}

inline std::vector<std::pair<Point, Point>> sample_pairs(const DomainSampler& dom, const SampleOptions& opt) {
  const auto pts = dom.sample(2 * static_cast<std::size_t>(opt.pairs), opt.seed);
  std::vector<std::pair<Point, Point>> out;
  out.reserve(static_cast<std::size_t>(opt.pairs));
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) out.emplace_back(pts[i], pts[i + 1]);
  return out;
}

inline std::vector<std::pair<Point, Point>> anchored_pairs(const Point& p0, const DomainSampler& dom,
                                                          const SampleOptions& opt) {
  const auto pts = dom.sample(static_cast<std::size_t>(opt.pairs), opt.seed);
  std::vector<std::pair<Point, Point>> out;
  out.reserve(pts.size());
  for (const auto& q : pts) out.emplace_back(p0, q);
  return out;
}

inline Relation convex_relation(bool strict) { return strict ? Relation::Lt : Relation::Le; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Convexity on a set

inline ConvexityReport check_convex(const IvFn& f, const DomainSampler& dom, const SampleOptions& opt = {},
                                    bool strict = false, const Path& path = geodesic_path()) {
  opt.validate();
  return detail::check_pairs(f, detail::sample_pairs(dom, opt), opt, detail::convex_relation(strict), path);
}

inline ConvexityReport check_convex(const RealFn& f, const DomainSampler& dom, const SampleOptions& opt = {},
                                    bool strict = false, const Path& path = geodesic_path()) {
  return check_convex(IvFn::degenerate(f), dom, opt, strict, path);
}

/// Center and halfwidth both convex as real functions.
inline ConvexityReport check_cw_convex(const IvFn& f, const DomainSampler& dom, const SampleOptions& opt = {},
                                       bool strict = false) {
  opt.validate();
  const auto pairs = detail::sample_pairs(dom, opt);
  const auto rel = detail::convex_relation(strict);
  auto rc = detail::check_pairs(IvFn::degenerate(f.center()), pairs, opt, rel, geodesic_path(), "center");
  if (!rc.holds()) return rc;
  auto rw = detail::check_pairs(IvFn::degenerate(f.width()), pairs, opt, rel, geodesic_path(), "width");
  rw.samples_used += rc.samples_used;
  return rw;
}

inline ConvexityReport check_affine(const IvFn& f, const DomainSampler& dom, const SampleOptions& opt = {}) {
  opt.validate();
  return detail::check_pairs(f, detail::sample_pairs(dom, opt), opt, detail::Relation::Eq, geodesic_path());
}

inline ConvexityReport check_affine(const RealFn& f, const DomainSampler& dom, const SampleOptions& opt = {}) {
  return check_affine(IvFn::degenerate(f), dom, opt);
}

// ---------------------------------------------------------------------------
// Convexity at a point: only geodesics emanating from p0

inline ConvexityReport check_convex_at(const IvFn& f, const Point& p0, const DomainSampler& dom,
                                       const SampleOptions& opt = {}, bool strict = false,
                                       const Path& path = geodesic_path()) {
  opt.validate();
  return detail::check_pairs(f, detail::anchored_pairs(p0, dom, opt), opt, detail::convex_relation(strict),
                             path);
}

inline ConvexityReport check_convex_at(const RealFn& f, const Point& p0, const DomainSampler& dom,
                                       const SampleOptions& opt = {}, bool strict = false,
                                       const Path& path = geodesic_path()) {
  return check_convex_at(IvFn::degenerate(f), p0, dom, opt, strict, path);
}

inline ConvexityReport check_cw_convex_at(const IvFn& f, const Point& p0, const DomainSampler& dom,
                                          const SampleOptions& opt = {}, bool strict = false) {
  opt.validate();
  const auto pairs = detail::anchored_pairs(p0, dom, opt);
  const auto rel = detail::convex_relation(strict);
  auto rc = detail::check_pairs(IvFn::degenerate(f.center()), pairs, opt, rel, geodesic_path(), "center");
  if (!rc.holds()) return rc;
  auto rw = detail::check_pairs(IvFn::degenerate(f.width()), pairs, opt, rel, geodesic_path(), "width");
  rw.samples_used += rc.samples_used;
  return rw;
}

inline ConvexityReport check_affine_at(const RealFn& f, const Point& p0, const DomainSampler& dom,
                                       const SampleOptions& opt = {}) {
  opt.validate();
  return detail::check_pairs(IvFn::degenerate(f), detail::anchored_pairs(p0, dom, opt), opt,
                             detail::Relation::Eq, geodesic_path());
}

// ---------------------------------------------------------------------------
// Sets

/// Every interior geodesic grid point from p0 to a sampled member is a member.
inline ConvexityReport check_star_shaped(const DomainSampler& dom, const Point& p0, const SampleOptions& opt = {}) {
  opt.validate();
  ConvexityReport report;
  for (const auto& q : dom.sample(static_cast<std::size_t>(opt.pairs), opt.seed)) {
    ++report.samples_used;
    for (int k = 1; k < opt.grid - 1; ++k) {
      const double s = opt.s_at(k);
      const Point x = geodesic_at(Geodesic{p0, q}, s);
      if (!dom.contains(x)) {
        report.verdict = Verdict::CounterexampleFound;
        report.counterexample = Witness{p0, q, s, std::nullopt, std::nullopt, "gamma(s) leaves the set"};
        return report;
      }
    }
  }
  return report;
}

/// Every interior geodesic grid point between two sampled members is a member.
inline ConvexityReport check_totally_convex(const DomainSampler& dom, const SampleOptions& opt = {}) {
  opt.validate();
  ConvexityReport report;
  for (const auto& [p, q] : detail::sample_pairs(dom, opt)) {
    ++report.samples_used;
    for (int k = 1; k < opt.grid - 1; ++k) {
      const double s = opt.s_at(k);
      if (!dom.contains(geodesic_at(Geodesic{p, q}, s))) {
        report.verdict = Verdict::CounterexampleFound;
        report.counterexample = Witness{p, q, s, std::nullopt, std::nullopt, "gamma(s) leaves the set"};
        return report;
      }
    }
  }
  return report;
}

/// Lower level set {p in E : f(p) <=min bound}.
inline DomainSampler lower_level_set(const DomainSampler& dom, const IvFn& f, const Interval& bound) {
  return dom.restricted([f, bound](const Point& p) { return min_le(f(p), bound); },
                        "level set f <=min " + format(bound));
}

// ---------------------------------------------------------------------------
// Restrictions to a single geodesic

/// Convexity of s -> f(gamma(s)) on [0, 1], checked on nested triples
/// s1 < (1-t)s1 + t s2 < s2 drawn from a grid.
inline ConvexityReport check_pullback_convex(const IvFn& f, const Geodesic& g, int grid = 9) {
  if (grid < 3) throw Error(ErrorKind::InvalidArgument, "pullback grid needs at least 3 points");
  ConvexityReport report;
  std::vector<Interval> values;
  values.reserve(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) values.push_back(f(geodesic_at(g, static_cast<double>(k) / (grid - 1))));
  for (int i = 0; i < grid; ++i) {
    for (int j = i + 2; j < grid; ++j) {
      ++report.samples_used;
      for (int m = i + 1; m < j; ++m) {
        const double t = static_cast<double>(m - i) / (j - i);
        const Interval rhs = combine(1.0 - t, values[i], t, values[j]);
        if (!min_le(values[m], rhs)) {
          report.verdict = Verdict::CounterexampleFound;
          report.counterexample = Witness{geodesic_at(g, static_cast<double>(i) / (grid - 1)),
                                          geodesic_at(g, static_cast<double>(j) / (grid - 1)), t,
                                          values[m], rhs, "pullback convexity on [0,1]"};
          return report;
        }
      }
    }
  }
  return report;
}

/// Convexity of s -> f(gamma(s)) at s = 0.
inline ConvexityReport check_pullback_convex_at_zero(const IvFn& f, const Geodesic& g, int grid = 9) {
  if (grid < 3) throw Error(ErrorKind::InvalidArgument, "pullback grid needs at least 3 points");
  ConvexityReport report;
  const Interval f0 = f(g.start);
  for (int j = 2; j < grid; ++j) {
    const double sj = static_cast<double>(j) / (grid - 1);
    const Interval fj = f(geodesic_at(g, sj));
    ++report.samples_used;
    for (int m = 1; m < j; ++m) {
      const double t = static_cast<double>(m) / j;
      const Interval lhs = f(geodesic_at(g, t * sj));
      const Interval rhs = combine(1.0 - t, f0, t, fj);
      if (!min_le(lhs, rhs)) {
        report.verdict = Verdict::CounterexampleFound;
        report.counterexample = Witness{g.start, geodesic_at(g, sj), t, lhs, rhs, "pullback convexity at 0"};
        return report;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Epigraph

/// Mixed-pair epigraph property: for sampled (p, B), (q, C) with f(p) <=min B
/// and f(q) <=min C, f(gamma(s)) <=min (1-s)B + sC. Bounds are f plus a
/// random nonnegative center and halfwidth perturbation.
inline ConvexityReport check_epigraph(const IvFn& f, const DomainSampler& dom, const SampleOptions& opt = {},
                                      double max_perturbation = 1.0) {
  opt.validate();
  Rng rng(opt.seed ^ 0x5bd1e995ULL);
  ConvexityReport report;
  for (const auto& [p, q] : detail::sample_pairs(dom, opt)) {
    const Interval fp = f(p);
    const Interval fq = f(q);
    const Interval b = combine(1.0, fp, 1.0,
                               Interval::from_center_width(rng.uniform(0.0, max_perturbation),
                                                           rng.uniform(0.0, max_perturbation)));
    const Interval c = combine(1.0, fq, 1.0,
                               Interval::from_center_width(rng.uniform(0.0, max_perturbation),
                                                           rng.uniform(0.0, max_perturbation)));
    ++report.samples_used;
    for (int k = 1; k < opt.grid - 1; ++k) {
      const double s = opt.s_at(k);
      const Interval lhs = f(geodesic_at(Geodesic{p, q}, s));
      const Interval rhs = combine(1.0 - s, b, s, c);
      if (!min_le(lhs, rhs)) {
        report.verdict = Verdict::CounterexampleFound;
        report.counterexample = Witness{p, q, s, lhs, rhs, "epigraph mixed pair"};
        return report;
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Gradient inequalities and local minima

/// Comparison tolerance for quantities that went through a numerical
/// derivative.
inline double derivative_eps(const DerivScheme& scheme, const Interval& a, const Interval& b) {
  return std::max(default_center_eps(a, b), scheme.tol * detail::value_scale(a, b));
}

/// Df(p0; log_{p0} q) <=min f(q) gH- f(p0) for sampled targets q. Geodesics
/// along which the width of f is not non-decreasing are skipped and counted.
inline ConvexityReport check_gradient_inequality(const IvFn& f, const Point& p0, const DomainSampler& dom,
                                                 const SampleOptions& opt = {}, const DerivScheme& scheme = {}) {
  opt.validate();
  ConvexityReport report;
  const Interval f0 = f(p0);
  for (const auto& q : dom.sample(static_cast<std::size_t>(opt.pairs), opt.seed)) {
    if (distance(p0, q) <= 1e-12) continue;
    if (!width_monotone_along(f, Geodesic{p0, q}, opt.grid)) {
      ++report.skipped;
      continue;
    }
    ++report.samples_used;
    const Interval d = gh_dir_deriv(f, p0, log_map(p0, q), scheme).value;
    const Interval rhs = gh_diff(f(q), f0);
    if (!min_le(d, rhs, derivative_eps(scheme, d, rhs))) {
      report.verdict = Verdict::CounterexampleFound;
      report.counterexample = Witness{p0, q, 0.0, d, rhs, "Df(p0;X) <=min f(q) gH- f(p0)"};
      return report;
    }
  }
  return report;
}

/// Real case: f(q) - f(p0) >= Df(p0; log_{p0} q).
inline ConvexityReport check_gradient_inequality(const RealFn& f, const Point& p0, const DomainSampler& dom,
                                                 const SampleOptions& opt = {}, const DerivScheme& scheme = {}) {
  return check_gradient_inequality(IvFn::degenerate(f), p0, dom, opt, scheme);
}

struct LocalMinReport {
  bool minimum = true;
  std::size_t directions = 0;
  std::optional<Point> witness_target;
  std::optional<Interval> witness_derivative;
  ConvexityReport cw_convexity;
};

/// p0 is reported a minimum iff [0,0] <=min Df(p0; X) for every sampled
/// direction X = log_{p0} q. cw-convexity at p0 is checked and reported.
inline LocalMinReport check_local_min(const IvFn& f, const Point& p0, const DomainSampler& dom,
                                      const SampleOptions& opt = {}, const DerivScheme& scheme = {}) {
  opt.validate();
  LocalMinReport report;
  report.cw_convexity = check_cw_convex_at(f, p0, dom, opt);
  const Interval zero = Interval::point(0.0);
  for (const auto& q : dom.sample(static_cast<std::size_t>(opt.pairs), opt.seed)) {
    if (distance(p0, q) <= 1e-12) continue;
    ++report.directions;
    const Interval d = gh_dir_deriv(f, p0, log_map(p0, q), scheme).value;
    if (!min_le(zero, d, derivative_eps(scheme, zero, d))) {
      report.minimum = false;
      report.witness_target = q;
      report.witness_derivative = d;
      return report;
    }
  }
  return report;
}

}  // namespace ivopt
