#pragma once

// KKT-type sufficient optimality conditions on sampled tangent directions.
//
// A certificate never claims non-optimality: Inconclusive only means the
// sufficient conditions could not be confirmed on the samples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ivopt/calculus.hpp"
#include "ivopt/convexity.hpp"
#include "ivopt/domain.hpp"
#include "ivopt/error.hpp"
#include "ivopt/function.hpp"
#include "ivopt/interval.hpp"
#include "ivopt/lp.hpp"
#include "ivopt/manifold.hpp"

namespace ivopt {

/// Real or interval-valued function.
using AnyFn = std::variant<RealFn, IvFn>;

inline bool is_interval(const AnyFn& f) { return std::holds_alternative<IvFn>(f); }

inline IvFn as_ivfn(const AnyFn& f) {
  return std::visit(
      [](const auto& g) -> IvFn {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, RealFn>) return IvFn::degenerate(g);
        else return g;
      },
      f);
}

inline Interval value_at(const AnyFn& f, const Point& p) {
  return std::visit(
      [&p](const auto& g) -> Interval {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, RealFn>) return Interval::point(g(p));
        else return g(p);
      },
      f);
}

inline std::string describe(const AnyFn& f) {
  return std::visit([](const auto& g) { return g.description(); }, f);
}

inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr double kMultiplierCap = 1e6;
inline constexpr double kSlacknessTol = 1e-12;
inline constexpr double kDistinctTol = 1e-12;

enum class ProblemLabel { P2, P3, P4 };

inline const char* to_string(ProblemLabel l) {
  switch (l) {
    case ProblemLabel::P2: return "P2";
    case ProblemLabel::P3: return "P3";
    case ProblemLabel::P4: return "P4";
  }
  return "?";
}

/// minimize f(p) subject to g_i(p) <= 0 (real) or g_i(p) <=min [0,0]
/// (interval), p in the domain E.
struct Problem {
  std::string name;
  AnyFn objective;
  std::vector<AnyFn> constraints;
  DomainSampler domain;

  Problem(std::string name_, AnyFn objective_, std::vector<AnyFn> constraints_, DomainSampler domain_)
      : name(std::move(name_)),
        objective(std::move(objective_)),
        constraints(std::move(constraints_)),
        domain(std::move(domain_)) {}

  const Manifold& manifold() const { return domain.manifold; }

  ProblemLabel label() const {
    const bool iv_cons = std::any_of(constraints.begin(), constraints.end(), is_interval);
    if (iv_cons) return ProblemLabel::P4;
    return is_interval(objective) ? ProblemLabel::P3 : ProblemLabel::P2;
  }

  Interval objective_at(const Point& p) const { return value_at(objective, p); }
  Interval constraint_at(std::size_t i, const Point& p) const { return value_at(constraints.at(i), p); }

  bool constraint_holds(std::size_t i, const Point& p, double tol = kFeasibilityTol) const {
    const Interval g = constraint_at(i, p);
    if (!is_interval(constraints[i])) return g.center() <= tol;
    return min_le(g, Interval::point(0.0));
  }

  bool feasible(const Point& p, double tol = kFeasibilityTol) const {
    if (!domain.contains(p)) return false;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      if (!constraint_holds(i, p, tol)) return false;
    }
    return true;
  }

  DomainSampler feasible_set() const {
    auto self = *this;
    DomainSampler out = domain.restricted(
        [self](const Point& p) {
          for (std::size_t i = 0; i < self.constraints.size(); ++i) {
            if (!self.constraint_holds(i, p)) return false;
          }
          return true;
        },
        "the feasible set");
    return out;
  }
};

/// Indices of the constraints binding at p0. Throws InfeasibleCandidate when
/// p0 is not feasible.
inline std::vector<std::size_t> active_set(const Problem& prob, const Point& p0, double tol = kFeasibilityTol) {
  if (!prob.feasible(p0)) {
    throw Error(ErrorKind::InfeasibleCandidate, "candidate is not feasible for " + prob.name);
  }
  std::vector<std::size_t> j;
  for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
    const Interval g = prob.constraint_at(i, p0);
    if (hausdorff(g, Interval::point(0.0)) <= tol) j.push_back(i);
  }
  return j;
}

enum class DirectionSource { Feasible, Domain };

struct DirectionSample {
  Point target;
  TangentDirection direction;
  bool feasible_target = true;
};

/// Directions log_{p0}(q) toward `n` sampled points q != p0, drawn from the
/// feasible set or the whole domain.
inline std::vector<DirectionSample> direction_samples(const Problem& prob, const Point& p0, int n,
                                                      std::uint64_t seed,
                                                      DirectionSource source = DirectionSource::Feasible) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "direction count must be nonnegative");
  std::vector<DirectionSample> out;
  if (n == 0) return out;
  const DomainSampler sampler = source == DirectionSource::Feasible ? prob.feasible_set() : prob.domain;
  Rng rng(seed);
  const std::size_t budget = 1000 * static_cast<std::size_t>(n) + 1000;
  std::size_t attempts = 0;
  while (out.size() < static_cast<std::size_t>(n)) {
    if (++attempts > budget) {
      throw Error(ErrorKind::SamplerExhausted, "could not draw " + std::to_string(n) + " directions from " +
                                                   sampler.description);
    }
    Point q = sampler.draw(rng);
    if (!sampler.contains(q) || distance(p0, q) <= 1e-12) continue;
    const bool feas = source == DirectionSource::Feasible || prob.feasible(q);
    TangentDirection x = log_map(p0, q);
    out.push_back(DirectionSample{std::move(q), std::move(x), feas});
  }
  return out;
}

enum class KktVerdict { Optimal, StrictOptimal, Inconclusive };

inline const char* to_string(KktVerdict v) {
  switch (v) {
    case KktVerdict::Optimal: return "Optimal";
    case KktVerdict::StrictOptimal: return "StrictOptimal";
    case KktVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// Which part of the objective enters the stationarity condition: the whole
/// (interval) objective, or only its center or halfwidth function.
enum class SplitMode { CenterNonConstant, CenterConstant };

inline const char* to_string(SplitMode m) {
  return m == SplitMode::CenterNonConstant ? "center-nonconstant" : "center-constant";
}

enum class ObjectivePart { Whole, Center, Width };

inline ObjectivePart part_for(std::optional<SplitMode> mode) {
  if (!mode) return ObjectivePart::Whole;
  return *mode == SplitMode::CenterNonConstant ? ObjectivePart::Center : ObjectivePart::Width;
}

struct KktOptions {
  int directions = 64;
  std::uint64_t seed = kDefaultSeed;
  double active_tol = kFeasibilityTol;
  /// Stationarity must hold to -tol * max(1, |terms|).
  double stationarity_tol = 1e-9;
  DerivScheme scheme{};
  SampleOptions hypothesis{};
  int constancy_samples = 64;
  DirectionSource source = DirectionSource::Feasible;
};

struct DirectionResidual {
  Point target;
  TangentDirection direction;
  bool feasible_target = true;
  Interval objective_derivative;
  /// Aligned with the certificate's active set.
  std::vector<Interval> constraint_derivatives;
  Interval residual;
  bool ok = true;
};

struct HypothesisCheck {
  std::string name;
  bool ok = true;
  /// A failed check that is not required has been replaced by a weaker,
  /// sufficient check recorded separately.
  bool required = true;
  std::string detail;
};

struct KktCertificate {
  std::string condition;
  Point candidate;
  Interval value;
  std::vector<std::size_t> active_set;
  std::vector<double> multipliers;
  std::vector<DirectionResidual> directions;
  std::vector<HypothesisCheck> hypotheses;
  KktVerdict verdict = KktVerdict::Inconclusive;
  std::vector<std::string> reasons;
  std::optional<std::size_t> failing_direction;
  /// Feasible points the non-constancy decision was based on.
  std::size_t sample_basis = 0;
  std::uint64_t seed = kDefaultSeed;
};

namespace detail {

inline Interval objective_derivative(const Problem& prob, ObjectivePart part, const Point& p0,
                                     const TangentDirection& x, const DerivScheme& scheme) {
  const IvFn f = as_ivfn(prob.objective);
  switch (part) {
    case ObjectivePart::Whole:
      if (!is_interval(prob.objective)) return Interval::point(dir_deriv(std::get<RealFn>(prob.objective), p0, x, scheme));
      return gh_dir_deriv(f, p0, x, scheme).value;
    case ObjectivePart::Center: return Interval::point(dir_deriv(f.center(), p0, x, scheme));
    case ObjectivePart::Width: return Interval::point(dir_deriv(f.width(), p0, x, scheme));
  }
  return Interval::point(0.0);
}

inline Interval constraint_derivative(const AnyFn& g, const Point& p0, const TangentDirection& x,
                                      const DerivScheme& scheme) {
  if (is_interval(g)) return gh_dir_deriv(std::get<IvFn>(g), p0, x, scheme).value;
  return Interval::point(dir_deriv(std::get<RealFn>(g), p0, x, scheme));
}

struct DerivRow {
  Interval objective;
  std::vector<Interval> constraints;  // aligned with J
};

inline std::vector<DerivRow> derivative_table(const Problem& prob, const Point& p0,
                                              const std::vector<std::size_t>& J,
                                              const std::vector<DirectionSample>& dirs, ObjectivePart part,
                                              const DerivScheme& scheme) {
  std::vector<DerivRow> rows;
  rows.reserve(dirs.size());
  for (const auto& d : dirs) {
    DerivRow r{objective_derivative(prob, part, p0, d.direction, scheme), {}};
    r.constraints.reserve(J.size());
    for (std::size_t i : J) r.constraints.push_back(constraint_derivative(prob.constraints[i], p0, d.direction, scheme));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline double stationarity_eps(double tol, const DerivRow& row, const std::vector<double>& mu_j) {
  double mag = std::abs(row.objective.center());
  for (std::size_t k = 0; k < row.constraints.size(); ++k) mag += std::abs(mu_j[k] * row.constraints[k].center());
  return tol * std::max(1.0, mag);
}

/// Center-only multiplier LP: minimize sum(mu) subject to
/// obj_k + sum_j mu_j d_jk >= -tol * max(1, |obj_k|), 0 <= mu <= cap.
inline std::optional<std::vector<double>> solve_multipliers(const std::vector<DerivRow>& table,
                                                            std::size_t nj, double tol) {
  if (nj == 0) {
    for (const auto& r : table) {
      if (r.objective.center() < -tol * std::max(1.0, std::abs(r.objective.center()))) return std::nullopt;
    }
    return std::vector<double>{};
  }
  std::vector<lp::Row> rows;
  rows.reserve(table.size() + nj);
  for (const auto& r : table) {
    lp::Row row;
    row.a.reserve(nj);
    for (const auto& d : r.constraints) row.a.push_back(d.center());
    row.sense = lp::Sense::Ge;
    row.b = -r.objective.center() - tol * std::max(1.0, std::abs(r.objective.center()));
    rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < nj; ++j) {
    lp::Row cap;
    cap.a.assign(nj, 0.0);
    cap.a[j] = 1.0;
    cap.sense = lp::Sense::Le;
    cap.b = kMultiplierCap;
    rows.push_back(std::move(cap));
  }
  const auto res = lp::minimize(std::vector<double>(nj, 1.0), rows);
  if (res.status != lp::Status::Optimal) return std::nullopt;
  return res.x;
}

}  // namespace detail

/// Nonnegative multipliers (zero off J) satisfying the center part of the
/// stationarity inequality on every sampled direction, minimizing their sum;
/// nullopt when none exist.
inline std::optional<std::vector<double>> find_multipliers(const Problem& prob, const Point& p0,
                                                           const std::vector<std::size_t>& J,
                                                           const std::vector<DirectionSample>& dirs,
                                                           const KktOptions& opt = {},
                                                           ObjectivePart part = ObjectivePart::Whole) {
  const auto table = detail::derivative_table(prob, p0, J, dirs, part, opt.scheme);
  const auto mu_j = detail::solve_multipliers(table, J.size(), opt.stationarity_tol);
  if (!mu_j) return std::nullopt;
  std::vector<double> mu(prob.constraints.size(), 0.0);
  for (std::size_t k = 0; k < J.size(); ++k) mu[J[k]] = (*mu_j)[k];
  return mu;
}

namespace detail {

enum class Condition { P2, P3, P3Split, P4 };

inline std::string condition_name(Condition c, std::optional<SplitMode> mode) {
  std::string base;
  switch (c) {
    case Condition::P2: base = "P2"; break;
    case Condition::P3: base = "P3"; break;
    case Condition::P3Split: base = "P3"; break;
    case Condition::P4: base = "P4"; break;
  }
  if (mode) base += std::string(" (") + to_string(*mode) + ")";
  return base;
}

inline bool pairwise_distinct(const std::vector<Interval>& values) {
  for (std::size_t a = 0; a < values.size(); ++a) {
    for (std::size_t b = a + 1; b < values.size(); ++b) {
      if (hausdorff(values[a], values[b]) <= kDistinctTol) return false;
    }
  }
  return true;
}

inline bool all_equal(const std::vector<Interval>& values) {
  for (const auto& v : values) {
    if (hausdorff(v, values.front()) > kDistinctTol * std::max(1.0, std::abs(values.front().center()))) {
      return false;
    }
  }
  return true;
}

/// p0 followed by sampled feasible points distinct from it.
inline std::vector<Point> constancy_basis(const Problem& prob, const Point& p0, const KktOptions& opt) {
  std::vector<Point> pts{p0};
  if (opt.constancy_samples <= 0) return pts;
  const DomainSampler feas = prob.feasible_set();
  Rng rng(opt.seed ^ 0xc0ffee5eedULL);
  const std::size_t want = static_cast<std::size_t>(opt.constancy_samples);
  const std::size_t budget = 1000 * want + 1000;
  for (std::size_t attempts = 0; pts.size() < want + 1 && attempts < budget; ++attempts) {
    Point q = feas.draw(rng);
    if (feas.contains(q) && distance(p0, q) > 1e-12) pts.push_back(std::move(q));
  }
  return pts;
}

inline std::vector<Interval> values_on(const std::vector<Point>& pts, const std::function<Interval(const Point&)>& f) {
  std::vector<Interval> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(f(p));
  return out;
}

inline std::string report_detail(const ConvexityReport& r) {
  std::string s = std::string(to_string(r.verdict)) + " on " + std::to_string(r.samples_used) + " samples";
  if (r.counterexample) s += " (witness s=" + std::to_string(r.counterexample->s) + ")";
  return s;
}

inline KktCertificate verify(const Problem& prob, const Point& p0, const std::vector<double>& mu,
                             const std::vector<DirectionSample>& dirs, const KktOptions& opt, Condition cond,
                             std::optional<SplitMode> mode) {
  const ProblemLabel label = prob.label();
  if (cond == Condition::P2 && label != ProblemLabel::P2) {
    throw Error(ErrorKind::InvalidArgument, "the P2 conditions need real objective and constraints");
  }
  if ((cond == Condition::P3 || cond == Condition::P3Split) && label == ProblemLabel::P4) {
    throw Error(ErrorKind::InvalidArgument, "the P3 conditions need real-valued constraints");
  }
  if (mu.size() != prob.constraints.size()) {
    throw Error(ErrorKind::InvalidArgument, "expected " + std::to_string(prob.constraints.size()) +
                                                " multipliers, got " + std::to_string(mu.size()));
  }
  for (double m : mu) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw Error(ErrorKind::InvalidArgument, "multipliers must be finite and >= 0");
  }

  KktCertificate cert{condition_name(cond, mode), p0, prob.objective_at(p0), {}, mu, {}, {}, KktVerdict::Inconclusive,
                      {}, std::nullopt, 0, opt.seed};
  cert.active_set = active_set(prob, p0, opt.active_tol);
  const auto& J = cert.active_set;

  // Complementary slackness, before any derivative work.
  bool slack_ok = true;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const bool active = std::find(J.begin(), J.end(), i) != J.end();
    if (mu[i] > kSlacknessTol && !active) {
      slack_ok = false;
      cert.reasons.push_back("complementary slackness fails: mu_" + std::to_string(i + 1) + " = " +
                             std::to_string(mu[i]) + " but g_" + std::to_string(i + 1) + "(p0) = " +
                             format(prob.constraint_at(i, p0)));
    }
  }
  if (!slack_ok) return cert;

  const ObjectivePart part = part_for(mode);
  const IvFn f = as_ivfn(prob.objective);
  const bool interval_constraints = cond == Condition::P4;

  // Split modes: constancy of f^c on sampled feasible points must match.
  const auto basis = constancy_basis(prob, p0, opt);
  cert.sample_basis = basis.size();
  const auto center_vals = values_on(basis, [&f](const Point& p) { return Interval::point(f.center()(p)); });
  if (mode == SplitMode::CenterNonConstant && !pairwise_distinct(center_vals)) {
    throw Error(ErrorKind::ModeMismatch, "center function is not non-constant on the sampled feasible set");
  }
  if (mode == SplitMode::CenterConstant && !all_equal(center_vals)) {
    throw Error(ErrorKind::ModeMismatch, "center function is not constant on the sampled feasible set");
  }

  // Objective hypotheses.
  const SampleOptions& hs = opt.hypothesis;
  auto add_check = [&cert](std::string name, const ConvexityReport& r, bool required = true) {
    cert.hypotheses.push_back(HypothesisCheck{std::move(name), r.holds(), required, report_detail(r)});
  };
  switch (cond) {
    case Condition::P2:
      add_check("f convex at p0", check_convex_at(f, p0, prob.domain, hs));
      break;
    case Condition::P3:
      add_check("f cw-convex at p0", check_cw_convex_at(f, p0, prob.domain, hs));
      break;
    case Condition::P3Split:
    case Condition::P4:
      if (part == ObjectivePart::Center) {
        add_check("f^c convex at p0", check_convex_at(f.center(), p0, prob.domain, hs));
      } else if (part == ObjectivePart::Width) {
        add_check("f^w convex at p0", check_convex_at(f.width(), p0, prob.domain, hs));
      } else {
        add_check("f cw-convex at p0", check_cw_convex_at(f, p0, prob.domain, hs));
      }
      break;
  }

  // Active constraint hypotheses. A failure is not fatal by itself: what
  // the sufficiency argument needs from it is Dg_i(p0; X) <=min 0 toward
  // feasible points, which is then checked directly.
  std::vector<std::size_t> fallback;
  for (std::size_t k = 0; k < J.size(); ++k) {
    const std::size_t i = J[k];
    const std::string gi = "g_" + std::to_string(i + 1);
    ConvexityReport r = interval_constraints
                            ? check_cw_convex_at(as_ivfn(prob.constraints[i]), p0, prob.domain, hs)
                            : check_convex_at(as_ivfn(prob.constraints[i]), p0, prob.domain, hs);
    if (!r.holds()) fallback.push_back(k);
    add_check(gi + (interval_constraints ? " cw-convex at p0" : " convex at p0"), r, r.holds());
  }

  // Width monotonicity along every sampled geodesic.
  const bool objective_width_needed =
      (cond == Condition::P3) || (cond == Condition::P4 && part == ObjectivePart::Whole);
  if (objective_width_needed || interval_constraints) {
    std::vector<std::pair<std::string, IvFn>> widths;
    if (objective_width_needed) widths.emplace_back("f^w", f);
    if (interval_constraints) {
      for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
        if (is_interval(prob.constraints[i])) {
          widths.emplace_back("g_" + std::to_string(i + 1) + "^w", std::get<IvFn>(prob.constraints[i]));
        }
      }
    }
    for (const auto& [name, fn] : widths) {
      std::size_t bad = 0;
      for (const auto& d : dirs) {
        if (!width_monotone_along(fn, Geodesic{p0, d.target}, hs.grid)) ++bad;
      }
      cert.hypotheses.push_back(HypothesisCheck{name + " non-decreasing along sampled geodesics", bad == 0, true,
                                                std::to_string(dirs.size() - bad) + "/" +
                                                    std::to_string(dirs.size()) + " geodesics monotone"});
    }
  }

  // Stationarity on every direction.
  const auto table = derivative_table(prob, p0, J, dirs, part, opt.scheme);
  std::vector<double> mu_j;
  mu_j.reserve(J.size());
  for (std::size_t i : J) mu_j.push_back(mu[i]);
  const Interval zero = Interval::point(0.0);
  bool stationary = true;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    Interval res = table[k].objective;
    for (std::size_t j = 0; j < J.size(); ++j) res = add(res, scale(mu_j[j], table[k].constraints[j]));
    const bool ok = min_le(zero, res, stationarity_eps(opt.stationarity_tol, table[k], mu_j));
    cert.directions.push_back(DirectionResidual{dirs[k].target, dirs[k].direction, dirs[k].feasible_target,
                                                table[k].objective, table[k].constraints, res, ok});
    if (!ok && stationary) {
      stationary = false;
      cert.failing_direction = k;
      cert.reasons.push_back("stationarity fails in direction " + std::to_string(k) + ": residual " + format(res));
    }
  }

  for (std::size_t k : fallback) {
    const std::size_t i = J[k];
    std::size_t used = 0;
    bool ok = true;
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      if (!dirs[d].feasible_target) continue;
      ++used;
      const Interval dg = table[d].constraints[k];
      const double eps = opt.stationarity_tol * std::max(1.0, std::abs(dg.center()));
      if (!min_le(dg, zero, eps)) ok = false;
    }
    cert.hypotheses.push_back(HypothesisCheck{"Dg_" + std::to_string(i + 1) + "(p0;X) <=min 0 toward feasible points",
                                              ok, true,
                                              std::to_string(used) + " feasible directions checked"});
  }

  for (const auto& h : cert.hypotheses) {
    if (h.required && !h.ok) cert.reasons.push_back("hypothesis fails: " + h.name + " (" + h.detail + ")");
  }
  const bool hyp_ok = std::all_of(cert.hypotheses.begin(), cert.hypotheses.end(),
                                  [](const HypothesisCheck& h) { return h.ok || !h.required; });
  if (!stationary || !hyp_ok) return cert;

  // Strictness from non-constancy on the sampled feasible set.
  bool strict = false;
  switch (cond) {
    case Condition::P2:
    case Condition::P3:
      strict = pairwise_distinct(values_on(basis, [&f](const Point& p) { return f(p); }));
      break;
    case Condition::P3Split:
    case Condition::P4:
      if (part == ObjectivePart::Center) strict = true;
      else if (part == ObjectivePart::Width)
        strict = pairwise_distinct(values_on(basis, [&f](const Point& p) { return Interval::point(f.width()(p)); }));
      else strict = pairwise_distinct(values_on(basis, [&f](const Point& p) { return f(p); }));
      break;
  }
  cert.verdict = strict ? KktVerdict::StrictOptimal : KktVerdict::Optimal;
  if (!strict) cert.reasons.push_back("objective is not non-constant on the sampled feasible set");
  return cert;
}

}  // namespace detail

inline std::vector<DirectionSample> default_directions(const Problem& prob, const Point& p0, const KktOptions& opt) {
  return direction_samples(prob, p0, opt.directions, opt.seed, opt.source);
}

/// Real objective and constraints.
inline KktCertificate verify_p2(const Problem& prob, const Point& p0, const std::vector<double>& mu,
                                const std::vector<DirectionSample>& dirs, const KktOptions& opt = {}) {
  return detail::verify(prob, p0, mu, dirs, opt, detail::Condition::P2, std::nullopt);
}

inline KktCertificate verify_p2(const Problem& prob, const Point& p0, const std::vector<double>& mu,
                                const KktOptions& opt = {}) {
  return verify_p2(prob, p0, mu, default_directions(prob, p0, opt), opt);
}

/// Interval objective, real constraints, whole-interval stationarity.
inline KktCertificate verify_p3(const Problem& prob, const Point& p0, const std::vector<double>& mu,
                                const std::vector<DirectionSample>& dirs, const KktOptions& opt = {}) {
  return detail::verify(prob, p0, mu, dirs, opt, detail::Condition::P3, std::nullopt);
}

inline KktCertificate verify_p3(const Problem& prob, const Point& p0, const std::vector<double>& mu,
                                const KktOptions& opt = {}) {
  return verify_p3(prob, p0, mu, default_directions(prob, p0, opt), opt);
}

/// Interval objective, real constraints, stationarity on f^c or f^w alone.
inline KktCertificate verify_p3_split(const Problem& prob, const Point& p0, const std::vector<double>& mu,
                                      const std::vector<DirectionSample>& dirs, const KktOptions& opt,
                                      SplitMode mode) {
  return detail::verify(prob, p0, mu, dirs, opt, detail::Condition::P3Split, mode);
}

inline KktCertificate verify_p3_split(const Problem& prob, const Point& p0, const std::vector<double>& mu,
                                      const KktOptions& opt, SplitMode mode) {
  return verify_p3_split(prob, p0, mu, default_directions(prob, p0, opt), opt, mode);
}

/// Interval objective and constraints. With a mode, stationarity uses f^c or
/// f^w; without one, the whole gH-derivative of f under cw-convexity and
/// width monotonicity of f.
inline KktCertificate verify_p4(const Problem& prob, const Point& p0, const std::vector<double>& mu,
                                const std::vector<DirectionSample>& dirs, const KktOptions& opt,
                                std::optional<SplitMode> mode) {
  return detail::verify(prob, p0, mu, dirs, opt, detail::Condition::P4, mode);
}

inline KktCertificate verify_p4(const Problem& prob, const Point& p0, const std::vector<double>& mu,
                                const KktOptions& opt, std::optional<SplitMode> mode) {
  return verify_p4(prob, p0, mu, default_directions(prob, p0, opt), opt, mode);
}

/// Picks the verifier matching the problem label.
inline KktCertificate verify_kkt(const Problem& prob, const Point& p0, const std::vector<double>& mu,
                                 const std::vector<DirectionSample>& dirs, const KktOptions& opt,
                                 std::optional<SplitMode> mode = std::nullopt) {
  switch (prob.label()) {
    case ProblemLabel::P2: return verify_p2(prob, p0, mu, dirs, opt);
    case ProblemLabel::P3: return mode ? verify_p3_split(prob, p0, mu, dirs, opt, *mode) : verify_p3(prob, p0, mu, dirs, opt);
    case ProblemLabel::P4: return verify_p4(prob, p0, mu, dirs, opt, mode);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown problem label");
}

/// Multiplier search followed by verification. When no multipliers exist on
/// the samples the certificate is Inconclusive with all-zero multipliers.
inline KktCertificate solve_kkt(const Problem& prob, const Point& p0, const KktOptions& opt = {},
                                std::optional<SplitMode> mode = std::nullopt) {
  const auto J = active_set(prob, p0, opt.active_tol);
  const auto dirs = default_directions(prob, p0, opt);
  const auto mu = find_multipliers(prob, p0, J, dirs, opt, part_for(mode));
  if (!mu) {
    auto cert = verify_kkt(prob, p0, std::vector<double>(prob.constraints.size(), 0.0), dirs, opt, mode);
    cert.verdict = KktVerdict::Inconclusive;
    cert.reasons.insert(cert.reasons.begin(), "no nonnegative multipliers satisfy stationarity on the samples");
    return cert;
  }
  return verify_kkt(prob, p0, *mu, dirs, opt, mode);
}

/// Real constraints h_i built pointwise from interval constraints: the
/// center where it is nonzero (beyond tol), the halfwidth where it vanishes.
inline Problem reduce_p4(const Problem& prob, double tol = kFeasibilityTol) {
  std::vector<AnyFn> h;
  h.reserve(prob.constraints.size());
  for (std::size_t i = 0; i < prob.constraints.size(); ++i) {
    const IvFn g = as_ivfn(prob.constraints[i]);
    h.emplace_back(RealFn("h_" + std::to_string(i + 1) + "[" + g.description() + "]",
                          [g, tol](const Point& p) {
                            const double c = g.center()(p);
                            return std::abs(c) > tol ? c : g.width()(p);
                          }));
  }
  return Problem(prob.name + " (reduced)", prob.objective, std::move(h), prob.domain);
}

/// A sampled feasible point that beats p0: f(p) <min f(p0), or for the
/// strict case f(p) <=min f(p0) (exact comparison) with p != p0.
inline std::optional<Point> find_improvement(const Problem& prob, const Point& p0, std::size_t n,
                                             std::uint64_t seed, bool strict) {
  const Interval f0 = prob.objective_at(p0);
  for (const auto& p : prob.feasible_set().sample(n, seed)) {
    const Interval fp = prob.objective_at(p);
    if (strict) {
      if (distance(p, p0) > 1e-12 && compare(fp, f0, OrderRelation::MinOrder, 0.0) != OrderOutcome::Greater) return p;
    } else if (compare(fp, f0) == OrderOutcome::Less) {
      return p;
    }
  }
  return std::nullopt;
}

}  // namespace ivopt
