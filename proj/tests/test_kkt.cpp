#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ivopt/builtins/catalog.hpp"
#include "ivopt/kkt.hpp"

namespace {

using namespace ivopt;
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2;

const std::vector<std::string> kCircleConstraints = {"theta - pi/2", "exp(-(theta - pi/2)^2) - 1",
                                                     "-ln(9*pi^2 - (theta - pi/2)^2)"};

Problem circle_with_objective(AnyFn objective, const std::string& name = "test") {
  const Manifold m = Manifold::circle();
  std::vector<AnyFn> cons;
  for (const auto& g : kCircleConstraints) cons.emplace_back(RealFn::parse(g, m));
  return Problem(name, std::move(objective), std::move(cons), domains::circle_arc());
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::InvalidArgument;
}

TEST(ActiveSet, Examples) {
  EXPECT_EQ(active_set(builtins::circle_problem(), builtins::circle_candidate()), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(active_set(builtins::rays_problem(), builtins::rays_candidate()), (std::vector<std::size_t>{0}));
  EXPECT_TRUE(active_set(builtins::circle_problem(), Point::circle(1.0)).empty());
  EXPECT_EQ(kind_of([] { active_set(builtins::circle_problem(), Point::circle(2.5)); }),
            ErrorKind::InfeasibleCandidate);
}

TEST(Directions, CircleDirectionsAreSignedOffsets) {
  const auto prob = builtins::circle_problem();
  const Point p0 = builtins::circle_candidate();
  const auto dirs = direction_samples(prob, p0, 16, 42);
  ASSERT_EQ(dirs.size(), 16u);
  for (const auto& d : dirs) {
    EXPECT_NEAR(d.direction.velocity(), d.target.theta() - kHalfPi, 1e-15);
    EXPECT_LE(d.target.theta(), kHalfPi + 1e-9);
    EXPECT_TRUE(d.feasible_target);
  }
  EXPECT_TRUE(direction_samples(prob, p0, 0, 42).empty());
  EXPECT_THROW(direction_samples(prob, p0, -1, 42), Error);
}

TEST(Directions, DomainSourceMarksInfeasibleTargets) {
  const auto dirs = direction_samples(builtins::circle_problem(), builtins::circle_candidate(), 64, 42,
                                      DirectionSource::Domain);
  bool infeasible = false;
  for (const auto& d : dirs) {
    if (d.target.theta() > kHalfPi + 1e-9) {
      EXPECT_FALSE(d.feasible_target);
      infeasible = true;
    }
  }
  EXPECT_TRUE(infeasible);
}

TEST(VerifyP2, CircleProblemIsStrictlyOptimal) {
  const auto cert = verify_p2(builtins::circle_problem(), builtins::circle_candidate(), {0, 1, 0});
  EXPECT_EQ(cert.verdict, KktVerdict::StrictOptimal);
  EXPECT_EQ(cert.value, Interval::point(0.0));
  EXPECT_EQ(cert.directions.size(), 64u);
  EXPECT_FALSE(cert.failing_direction.has_value());
  for (const auto& d : cert.directions) EXPECT_TRUE(d.ok);
}

TEST(VerifyP2, ConstraintConvexityFallbackIsRecorded) {
  const auto cert = verify_p2(builtins::circle_problem(), builtins::circle_candidate(), {0, 1, 0});
  bool optional_failure = false;
  for (const auto& h : cert.hypotheses) {
    if (!h.ok) {
      EXPECT_FALSE(h.required) << h.name;
      optional_failure = true;
    }
  }
  EXPECT_TRUE(optional_failure);
}

TEST(VerifyP2, SlacknessViolationStopsEarly) {
  const auto cert = verify_p2(builtins::circle_problem(), builtins::circle_candidate(), {0, 1, 1});
  EXPECT_EQ(cert.verdict, KktVerdict::Inconclusive);
  EXPECT_TRUE(cert.directions.empty());
  ASSERT_FALSE(cert.reasons.empty());
  EXPECT_NE(cert.reasons.front().find("slackness"), std::string::npos);
}

TEST(VerifyP2, InputValidation) {
  const auto prob = builtins::circle_problem();
  const Point p0 = builtins::circle_candidate();
  EXPECT_EQ(kind_of([&] { verify_p2(prob, p0, {0, 1}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { verify_p2(prob, p0, {0, -1, 0}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { verify_p2(prob, p0, {0, NAN, 0}); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { verify_p2(builtins::rays_problem(), builtins::rays_candidate(), {1, 0, 0}); }),
            ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { verify_p2(prob, Point::circle(2.5), {0, 0, 0}); }), ErrorKind::InfeasibleCandidate);
}

TEST(VerifyP2, NonStationaryPointIsInconclusive) {
  // Interior point with nonzero derivative.
  const auto cert = verify_p2(builtins::circle_problem(), Point::circle(1.0), {0, 0, 0});
  EXPECT_EQ(cert.verdict, KktVerdict::Inconclusive);
  ASSERT_TRUE(cert.failing_direction.has_value());
  EXPECT_FALSE(cert.directions[*cert.failing_direction].ok);
}

TEST(VerifyP3, TwoRayProblemIsOptimalButNotStrict) {
  const auto cert = verify_p3(builtins::rays_problem(), builtins::rays_candidate(), {1, 0, 0});
  EXPECT_EQ(cert.verdict, KktVerdict::Optimal);
  EXPECT_EQ(cert.value, Interval(-1, 1));
  EXPECT_FALSE(find_improvement(builtins::rays_problem(), builtins::rays_candidate(), 2000, 5, false));
  // The diagonal ray ties with the candidate.
  EXPECT_TRUE(find_improvement(builtins::rays_problem(), builtins::rays_candidate(), 2000, 5, true));
}

TEST(VerifyP3, ConstantObjectiveIsOptimal) {
  const auto prob = circle_with_objective(IvFn::constant(Interval(2, 4)));
  const auto cert = verify_p3(prob, Point::circle(1.0), {0, 0, 0});
  EXPECT_EQ(cert.verdict, KktVerdict::Optimal);
}

TEST(VerifyP3, IncreasingObjectiveAtInteriorPointIsInconclusive) {
  const auto prob = circle_with_objective(IvFn::parse("theta", "1", Manifold::circle()));
  EXPECT_EQ(verify_p3(prob, Point::circle(1.0), {0, 0, 0}).verdict, KktVerdict::Inconclusive);
}

TEST(VerifyP3, DegenerateRecastOfCircleProblem) {
  const auto prob = circle_with_objective(IvFn::parse("(theta - pi/2)^2", "0", Manifold::circle()));
  const auto cert = verify_p3_split(prob, builtins::circle_candidate(), {0, 1, 0}, {}, SplitMode::CenterNonConstant);
  EXPECT_EQ(cert.verdict, KktVerdict::StrictOptimal);
  EXPECT_EQ(verify_p3(prob, builtins::circle_candidate(), {0, 1, 0}).verdict, KktVerdict::StrictOptimal);
}

TEST(VerifyP3Split, WidthVariant) {
  const auto prob = circle_with_objective(IvFn::parse("5", "(theta - pi/2)^2 + 1", Manifold::circle()));
  const Point p0 = builtins::circle_candidate();
  EXPECT_EQ(verify_p3_split(prob, p0, {0, 1, 0}, {}, SplitMode::CenterConstant).verdict, KktVerdict::StrictOptimal);
  EXPECT_EQ(kind_of([&] { verify_p3_split(prob, p0, {0, 1, 0}, {}, SplitMode::CenterNonConstant); }),
            ErrorKind::ModeMismatch);
  EXPECT_EQ(kind_of([&] {
              verify_p3_split(builtins::rays_problem(), builtins::rays_candidate(), {1, 0, 0}, {},
                              SplitMode::CenterConstant);
            }),
            ErrorKind::ModeMismatch);
}

TEST(VerifyP4, LiftedTwoRayProblem) {
  const auto lifted = builtins::rays_problem_lifted();
  EXPECT_EQ(lifted.label(), ProblemLabel::P4);
  const auto cert = verify_p4(lifted, builtins::rays_candidate(), {1, 0, 0}, {}, std::nullopt);
  EXPECT_EQ(cert.verdict, KktVerdict::Optimal);
  EXPECT_EQ(kind_of([&] { verify_p3(lifted, builtins::rays_candidate(), {1, 0, 0}); }), ErrorKind::InvalidArgument);
}

TEST(VerifyP4, InfeasibleCandidateThrows) {
  const Problem p("box", IvFn::parse("x1^2", "1", Manifold::euclidean(1)),
                  {IvFn::parse("x1 - 1", "0.5", Manifold::euclidean(1))}, domains::euclidean_box(1, -3, 3));
  EXPECT_EQ(kind_of([&] { verify_p4(p, Point::euclidean(Eigen::VectorXd::Constant(1, 2.0)), {0}, {}, std::nullopt); }),
            ErrorKind::InfeasibleCandidate);
}

TEST(ReduceP4, PointwiseRule) {
  const Manifold m = Manifold::euclidean(1);
  const Problem p("r", RealFn::parse("x1", m),
                  {IvFn::constant(Interval::from_center_width(-1, 0.5)), IvFn::constant(Interval(0, 0)),
                   IvFn::parse("x1", "abs(x1)", m)},
                  domains::euclidean_box(1, -1, 1));
  const Problem r = reduce_p4(p);
  EXPECT_EQ(r.label(), ProblemLabel::P2);
  const Point x = Point::euclidean(Eigen::VectorXd::Constant(1, 0.5));
  const Point zero = Point::euclidean(Eigen::VectorXd::Zero(1));
  EXPECT_EQ(r.constraint_at(0, x).center(), -1.0);
  EXPECT_EQ(r.constraint_at(1, x).center(), 0.0);
  EXPECT_EQ(r.constraint_at(2, x).center(), 0.5);
  EXPECT_EQ(r.constraint_at(2, zero).center(), 0.0);
}

TEST(ReduceP4, LiftedProblemReducesToOriginal) {
  const Problem r = reduce_p4(builtins::rays_problem_lifted());
  const Problem orig = builtins::rays_problem();
  for (const auto& p : orig.domain.sample(200, 3)) {
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.constraint_at(i, p).center(), orig.constraint_at(i, p).center(), 1e-12);
    EXPECT_EQ(r.feasible(p), orig.feasible(p));
  }
  EXPECT_EQ(verify_p3(r, builtins::rays_candidate(), {1, 0, 0}).verdict, KktVerdict::Optimal);
}

TEST(FindMultipliers, CircleProblemNeedsNone) {
  const auto prob = builtins::circle_problem();
  const Point p0 = builtins::circle_candidate();
  const auto J = active_set(prob, p0);
  KktOptions opt;
  const auto mu = find_multipliers(prob, p0, J, default_directions(prob, p0, opt), opt, ObjectivePart::Whole);
  ASSERT_TRUE(mu.has_value());
  for (double m : *mu) EXPECT_NEAR(m, 0.0, 1e-9);
}

TEST(FindMultipliers, ScalingAConstraintRescalesItsMultiplier) {
  // min theta subject to pi/2 - theta <= 0: stationarity needs mu = 1 over both signs of direction.
  const Manifold m = Manifold::circle();
  KktOptions opt;
  opt.source = DirectionSource::Domain;
  const Point p0 = Point::circle(kHalfPi);
  for (double lambda : {0.5, 1.0, 4.0}) {
    const Problem p("scaled", RealFn::parse("theta", m),
                    {RealFn::parse(std::to_string(lambda) + "*(pi/2 - theta)", m)}, domains::circle_arc());
    const auto dirs = default_directions(p, p0, opt);
    const auto mu = find_multipliers(p, p0, active_set(p, p0), dirs, opt, ObjectivePart::Whole);
    ASSERT_TRUE(mu.has_value());
    EXPECT_NEAR((*mu)[0], 1.0 / lambda, 1e-6) << lambda;
    EXPECT_EQ(verify_p2(p, p0, *mu, dirs, opt).verdict, KktVerdict::StrictOptimal);
  }
}

TEST(SolveKkt, ReportsMissingMultipliers) {
  // Interior point of theta^2 away from its minimizer: nothing helps.
  const auto prob = circle_with_objective(RealFn::parse("theta^2", Manifold::circle()));
  const auto cert = solve_kkt(prob, Point::circle(1.0));
  EXPECT_EQ(cert.verdict, KktVerdict::Inconclusive);
  ASSERT_FALSE(cert.reasons.empty());
  EXPECT_NE(cert.reasons.front().find("multipliers"), std::string::npos);
}

TEST(SolveKkt, Examples) {
  EXPECT_EQ(solve_kkt(builtins::circle_problem(), builtins::circle_candidate()).verdict, KktVerdict::StrictOptimal);
  EXPECT_EQ(solve_kkt(builtins::rays_problem(), builtins::rays_candidate()).verdict, KktVerdict::Optimal);
  EXPECT_EQ(solve_kkt(builtins::rays_problem_lifted(), builtins::rays_candidate()).verdict, KktVerdict::Optimal);
}

TEST(SolveKkt, IsDeterministicForAFixedSeed) {
  const auto a = solve_kkt(builtins::circle_problem(), builtins::circle_candidate());
  const auto b = solve_kkt(builtins::circle_problem(), builtins::circle_candidate());
  ASSERT_EQ(a.directions.size(), b.directions.size());
  for (std::size_t k = 0; k < a.directions.size(); ++k) {
    EXPECT_EQ(a.directions[k].target.theta(), b.directions[k].target.theta());
    EXPECT_EQ(a.directions[k].residual, b.directions[k].residual);
  }
  EXPECT_EQ(a.multipliers, b.multipliers);
}

// ---------------------------------------------------------------------------
// Soundness: certified candidates are not beaten by sampled feasible points

TEST(Soundness, CertifiedCandidatesSurviveBruteForce) {
  const Manifold e2 = Manifold::euclidean(2);
  Rng rng(2024);
  int certified = 0;
  for (int k = 0; k < 40; ++k) {
    const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
    // Convex quadratic over the half plane x1 + x2 <= 1 in a box.
    Eigen::VectorXd x(2);
    x << a, b;
    if (x.sum() > 1) x -= Eigen::VectorXd::Constant(2, (x.sum() - 1) / 2);
    // Convex quadratic over the half plane x1 + x2 <= 1 in a box; the width
    // grows along every geodesic leaving the candidate.
    const std::string fc = "(x1 - " + num(a) + ")^2 + (x2 - " + num(b) + ")^2";
    const std::string fw = "1 + (x1 - " + num(x(0)) + ")^2 + (x2 - " + num(x(1)) + ")^2";
    const Problem p("q", IvFn::parse(fc, fw, e2), {RealFn::parse("x1 + x2 - 1", e2)},
                    domains::euclidean_box(2, -2, 2));
    const Point p0 = Point::euclidean(x);
    const auto cert = solve_kkt(p, p0);
    if (cert.verdict == KktVerdict::Inconclusive) continue;
    ++certified;
    EXPECT_FALSE(find_improvement(p, p0, 1000, 11 + k, false).has_value());
  }
  EXPECT_GE(certified, 30);
}

TEST(Soundness, InconclusiveCanCoexistWithOptimality) {
  // theta = 2 is the global minimizer of -exp(-(theta - 2)^2), but the
  // objective is not convex at it, so no certificate is issued.
  const Problem p("bump", RealFn::parse("-exp(-(theta - 2)^2)", Manifold::circle()), {}, domains::circle_arc());
  const Point p0 = Point::circle(2.0);
  EXPECT_FALSE(find_improvement(p, p0, 2000, 1, false).has_value());
  const auto cert = verify_p2(p, p0, {});
  EXPECT_EQ(cert.verdict, KktVerdict::Inconclusive);
  ASSERT_FALSE(cert.hypotheses.empty());
  EXPECT_FALSE(cert.hypotheses.front().ok);
}

}  // namespace
