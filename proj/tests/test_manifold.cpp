#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ivopt/domain.hpp"
#include "ivopt/expr.hpp"
#include "ivopt/manifold.hpp"

namespace {

using namespace ivopt;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

MatrixXd diag2(double a, double b) {
  MatrixXd m = MatrixXd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

MatrixXd eye(double s = 1.0) { return s * MatrixXd::Identity(2, 2); }

Point vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return Point::euclidean(v);
}

TEST(Manifold, Constructors) {
  EXPECT_THROW(Manifold::euclidean(0), Error);
  EXPECT_THROW(Manifold::spd(0), Error);
  EXPECT_EQ(Manifold::circle().dim(), 1);
  EXPECT_EQ(Manifold::spd(3).name(), "spd(3)");
}

TEST(Point, Validation) {
  EXPECT_THROW(Point::circle(-0.1), Error);
  EXPECT_THROW(Point::circle(7.0), Error);
  EXPECT_DOUBLE_EQ(Point::circle(kTwoPi + 1e-13).theta(), kTwoPi);
  EXPECT_THROW(Point::spd(diag2(1, -1)), Error);
  EXPECT_THROW(Point::spd(diag2(1, 0)), Error);

  MatrixXd asym = eye();
  asym(0, 1) = 1e-3;
  try {
    Point::spd(asym);
    FAIL() << "asymmetric matrix accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPositiveDefinite);
  }

  MatrixXd tiny = eye();
  tiny(0, 1) = 1e-10;
  const Point p = Point::spd(tiny);
  EXPECT_DOUBLE_EQ(p.mat()(0, 1), p.mat()(1, 0));
}

TEST(Point, MixedManifoldsRejected) {
  try {
    distance(Point::circle(1.0), vec2(0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BaseMismatch);
  }
  EXPECT_THROW(distance(vec2(0, 0), Point::euclidean(VectorXd::Zero(3))), Error);
}

TEST(Geodesic, Examples) {
  const Point mid = geodesic_at({Point::spd(eye()), Point::spd(eye(2))}, 0.5);
  EXPECT_LE((mid.mat() - eye(std::sqrt(2.0))).norm(), 1e-12);
  EXPECT_NEAR(expr::spd_logdet(mid.mat()), kLn2, 1e-12);

  EXPECT_DOUBLE_EQ(geodesic_at({Point::circle(kPi / 2), Point::circle(0.3)}, 0.0).theta(), kPi / 2);

  VectorXd a(1), b(1);
  a << 0;
  b << 4;
  EXPECT_DOUBLE_EQ(geodesic_at({Point::euclidean(a), Point::euclidean(b)}, 0.25).vec()(0), 1.0);
}

TEST(LogMap, Examples) {
  const Point p = vec2(1, 2);
  EXPECT_EQ(log_map(p, p).vec().norm(), 0.0);
  EXPECT_DOUBLE_EQ(log_map(Point::circle(kPi / 2), Point::circle(0)).velocity(), -kPi / 2);
  EXPECT_LE((log_map(Point::spd(eye()), Point::spd(eye(2))).mat() - eye(kLn2)).norm(), 1e-12);
}

TEST(ExpMap, Examples) {
  const Point p = Point::spd(diag2(1, 3));
  EXPECT_LE(distance(exp_map(p, TangentDirection::zero(p), 0.7), p), 1e-12);

  const Point i = Point::spd(eye());
  const TangentDirection x(i, MatrixXd(eye(kLn2)));
  for (double s : {0.0, 0.3, 1.0, 2.5}) {
    EXPECT_LE((exp_map(i, x, s).mat() - eye(std::pow(2.0, s))).norm(), 1e-12) << s;
  }

  const double theta = 0.4;
  const Point c = Point::circle(kPi / 2);
  EXPECT_NEAR(exp_map(c, TangentDirection(c, theta - kPi / 2), 1.0).theta(), theta, 1e-15);
  EXPECT_THROW(exp_map(c, TangentDirection(c, 1.0), -0.5), Error);
}

TEST(Distance, Examples) {
  const Point p = Point::spd(diag2(2, 5));
  EXPECT_NEAR(distance(p, p), 0.0, 1e-14);
  EXPECT_NEAR(distance(Point::spd(eye()), Point::spd(eye(2))), std::sqrt(2.0) * kLn2, 1e-12);
  EXPECT_DOUBLE_EQ(distance(vec2(0, 0), vec2(3, 4)), 5.0);
}

TEST(Inner, Examples) {
  MatrixXd a(2, 2), b(2, 2);
  a << 1, 2, 2, 3;
  b << 0, 1, 1, -4;
  const Point i = Point::spd(eye());
  EXPECT_NEAR(inner(i, {i, a}, {i, b}), (a * b).trace(), 1e-12);

  const Point p = Point::spd(diag2(2, 0.5));
  const TangentDirection x(p, MatrixXd(a));
  EXPECT_GT(inner(p, x, x), 0.0);

  const Point two = Point::spd(eye(2));
  EXPECT_NEAR(inner(two, {two, MatrixXd(eye())}, {two, MatrixXd(eye())}), 0.5, 1e-12);

  try {
    inner(two, {i, MatrixXd(eye())}, {two, MatrixXd(eye())});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BaseMismatch);
  }
}

TEST(SymPower, Examples) {
  EXPECT_LE((spd::sym_power(eye(4), 0.5) - eye(2)).norm(), 1e-12);
  MatrixXd p(2, 2);
  p << 3, 1, 1, 2;
  EXPECT_LE((spd::sym_power(p, 1.0) - p).norm(), 1e-12);
  EXPECT_LE((spd::sym_power(diag2(1, 4), 0.5) - diag2(1, 2)).norm(), 1e-12);
  EXPECT_THROW(spd::sym_power(diag2(1, -4), 0.5), Error);
}

TEST(Tangent, PayloadMustMatchBase) {
  const Point c = Point::circle(1.0);
  EXPECT_THROW(TangentDirection(c, VectorXd(VectorXd::Ones(2))), Error);
  EXPECT_THROW(TangentDirection(vec2(0, 0), VectorXd(VectorXd::Ones(3))), Error);
  EXPECT_THROW(TangentDirection(Point::spd(eye()), MatrixXd(MatrixXd::Identity(3, 3))), Error);
}

// ---------------------------------------------------------------------------
// Properties over random pairs

struct Sampled {
  const char* name;
  DomainSampler domain;
};

class ManifoldProperty : public ::testing::TestWithParam<int> {
 protected:
  static Sampled make(int which) {
    switch (which) {
      case 0: return {"euclidean3", domains::euclidean_box(3, -5, 5)};
      case 1: return {"circle", domains::circle_arc()};
      case 2: return {"spd2", domains::spd_spectrum(2, 0.05, 20)};
      default: return {"spd3", domains::spd_spectrum(3, 0.1, 10)};
    }
  }
};

TEST_P(ManifoldProperty, GeodesicEndpoints) {
  const Sampled m = make(GetParam());
  const auto pts = m.domain.sample(2000, 7);
  for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
    const Geodesic g{pts[k], pts[k + 1]};
    EXPECT_LE(distance(geodesic_at(g, 0.0), g.start), 1e-10) << m.name;
    EXPECT_LE(distance(geodesic_at(g, 1.0), g.end), 1e-10) << m.name;
  }
}

TEST_P(ManifoldProperty, ExpInvertsLog) {
  const Sampled m = make(GetParam());
  const auto pts = m.domain.sample(400, 11);
  for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
    const Point& p = pts[k];
    const Point& q = pts[k + 1];
    EXPECT_LE(distance(exp_map(p, log_map(p, q), 1.0), q), 1e-8) << m.name;
  }
}

TEST_P(ManifoldProperty, GeodesicIsConstantSpeed) {
  const Sampled m = make(GetParam());
  const auto pts = m.domain.sample(100, 13);
  for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
    const Geodesic g{pts[k], pts[k + 1]};
    const double total = distance(g.start, g.end);
    const Point a = geodesic_at(g, 0.25);
    const Point b = geodesic_at(g, 0.75);
    EXPECT_NEAR(distance(a, b), 0.5 * total, 1e-8 * std::max(1.0, total)) << m.name;
    EXPECT_NEAR(norm(log_map(g.start, g.end)), total, 1e-8 * std::max(1.0, total)) << m.name;
  }
}

INSTANTIATE_TEST_SUITE_P(All, ManifoldProperty, ::testing::Values(0, 1, 2, 3));

TEST(SpdProperty, GeodesicStaysPositiveDefinite) {
  const auto d = domains::spd_spectrum(3, 1e-3, 1e3);
  const auto pts = d.sample(200, 17);
  for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
    const Geodesic g{pts[k], pts[k + 1]};
    for (int i = 0; i <= 16; ++i) {
      EXPECT_GT(spd::min_eigenvalue(geodesic_at(g, i / 16.0).mat()), 0.0);
    }
  }
}

TEST(SpdProperty, LogdetIsAffineAlongGeodesics) {
  const auto d = domains::spd_spectrum(2, 0.05, 20);
  const auto pts = d.sample(400, 19);
  for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
    const Geodesic g{pts[k], pts[k + 1]};
    const double lp = expr::spd_logdet(g.start.mat());
    const double lq = expr::spd_logdet(g.end.mat());
    for (double s : {0.1, 0.5, 0.9}) {
      EXPECT_NEAR(expr::spd_logdet(geodesic_at(g, s).mat()), (1 - s) * lp + s * lq, 1e-9);
    }
  }
}

TEST(Domain, SamplingIsDeterministicAndInside) {
  const auto d = domains::spd_spectrum(2, 0.25, 4);
  const auto a = d.sample(50, 3);
  const auto b = d.sample(50, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(d.contains(a[i]));
    EXPECT_EQ(a[i].mat(), b[i].mat());
  }
}

TEST(Domain, ExhaustedSamplerThrows) {
  const auto d = domains::circle_arc().restricted([](const Point&) { return false; }, "nothing");
  try {
    d.sample(1, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SamplerExhausted);
  }
}

}  // namespace
