#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "ivopt/lp.hpp"

namespace {

using namespace ivopt::lp;

TEST(Lp, SimpleOptimum) {
  // min -x - y s.t. x + 2y <= 4, 3x + y <= 6.
  const auto r = minimize({-1, -1}, {{{1, 2}, Sense::Le, 4}, {{3, 1}, Sense::Le, 6}});
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_NEAR(r.x[0], 1.6, 1e-9);
  EXPECT_NEAR(r.x[1], 1.2, 1e-9);
  EXPECT_NEAR(r.objective, -2.8, 1e-9);
}

TEST(Lp, GreaterEqualAndEquality) {
  // min x + y s.t. x + y >= 2, x - y = 1.
  const auto r = minimize({1, 1}, {{{1, 1}, Sense::Ge, 2}, {{1, -1}, Sense::Eq, 1}});
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_NEAR(r.x[0], 1.5, 1e-9);
  EXPECT_NEAR(r.x[1], 0.5, 1e-9);
}

TEST(Lp, NegativeRightHandSide) {
  // -x <= -3 means x >= 3.
  const auto r = minimize({1}, {{{-1}, Sense::Le, -3}});
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_NEAR(r.x[0], 3.0, 1e-9);
}

TEST(Lp, Infeasible) {
  EXPECT_EQ(minimize({1, 1}, {{{1, 1}, Sense::Le, 1}, {{1, 1}, Sense::Ge, 2}}).status, Status::Infeasible);
  EXPECT_EQ(minimize({0}, {{{1}, Sense::Eq, -1}}).status, Status::Infeasible);
}

TEST(Lp, Unbounded) {
  EXPECT_EQ(minimize({-1, 0}, {{{0, 1}, Sense::Le, 1}}).status, Status::Unbounded);
  EXPECT_EQ(minimize({-1}, {}).status, Status::Unbounded);
}

TEST(Lp, NoRows) {
  const auto r = minimize({2, 3}, {});
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_EQ(r.x, (std::vector<double>{0, 0}));
}

TEST(Lp, RowSizeMismatchThrows) { EXPECT_THROW(minimize({1, 1}, {{{1}, Sense::Le, 1}}), ivopt::Error); }

TEST(Lp, RedundantEqualities) {
  const auto r = minimize({1, 2}, {{{1, 1}, Sense::Eq, 1}, {{2, 2}, Sense::Eq, 2}});
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_NEAR(r.objective, 1.0, 1e-9);
}

TEST(Lp, BealeCyclingExampleTerminates) {
  // Degenerate problem on which the textbook largest-coefficient rule cycles.
  const std::vector<double> c = {-0.75, 150, -0.02, 6};
  const std::vector<Row> rows = {
      {{0.25, -60, -0.04, 9}, Sense::Le, 0},
      {{0.5, -90, -0.02, 3}, Sense::Le, 0},
      {{0, 0, 1, 0}, Sense::Le, 1},
  };
  const auto r = minimize(c, rows);
  ASSERT_EQ(r.status, Status::Optimal);
  EXPECT_NEAR(r.objective, -0.05, 1e-9);
}

// ---------------------------------------------------------------------------
// Brute-force vertex enumeration as an oracle

std::optional<double> brute_force(const std::vector<double>& c, const std::vector<Row>& rows) {
  const int n = static_cast<int>(c.size());
  // Every constraint as a.x <= b, including x >= 0 and equalities split in two.
  std::vector<std::pair<Eigen::VectorXd, double>> hs;
  for (const auto& r : rows) {
    const Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(r.a.data(), n);
    if (r.sense != Sense::Ge) hs.push_back({a, r.b});
    if (r.sense != Sense::Le) hs.push_back({-a, -r.b});
  }
  for (int i = 0; i < n; ++i) hs.push_back({-Eigen::VectorXd::Unit(n, i), 0.0});
  const int m = static_cast<int>(hs.size());
  std::optional<double> best;
  std::vector<int> pick(n);
  auto visit = [&](auto&& self, int start, int depth) -> void {
    if (depth == n) {
      Eigen::MatrixXd a(n, n);
      Eigen::VectorXd b(n);
      for (int k = 0; k < n; ++k) {
        a.row(k) = hs[pick[k]].first.transpose();
        b(k) = hs[pick[k]].second;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() < n) return;
      const Eigen::VectorXd x = lu.solve(b);
      for (const auto& [h, hb] : hs) {
        if (h.dot(x) > hb + 1e-9) return;
      }
      const double v = Eigen::Map<const Eigen::VectorXd>(c.data(), n).dot(x);
      if (!best || v < *best) best = v;
      return;
    }
    for (int k = start; k < m; ++k) {
      pick[depth] = k;
      self(self, k + 1, depth + 1);
    }
  };
  visit(visit, 0, 0);
  return best;
}

TEST(Lp, MatchesVertexEnumeration) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-3, 3);
  std::uniform_int_distribution<int> dims(1, 4), nrows(1, 4), sense(0, 2);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = dims(rng);
    std::vector<double> c(n);
    for (double& v : c) v = coef(rng);
    std::vector<Row> rows;
    for (int k = nrows(rng); k > 0; --k) {
      Row r;
      r.a.resize(n);
      for (double& v : r.a) v = coef(rng);
      r.sense = static_cast<Sense>(sense(rng));
      r.b = coef(rng);
      rows.push_back(r);
    }
    // A box keeps the region bounded, so every feasible instance has a vertex optimum.
    for (int i = 0; i < n; ++i) {
      Row r;
      r.a.assign(n, 0.0);
      r.a[i] = 1;
      r.b = 5;
      rows.push_back(r);
    }
    const auto got = minimize(c, rows);
    const auto want = brute_force(c, rows);
    if (!want) {
      EXPECT_EQ(got.status, Status::Infeasible) << trial;
      ++infeasible;
      continue;
    }
    ASSERT_EQ(got.status, Status::Optimal) << trial;
    ++optimal;
    EXPECT_NEAR(got.objective, *want, 1e-7 * std::max(1.0, std::abs(*want))) << trial;
    for (const auto& r : rows) {
      double lhs = 0;
      for (int i = 0; i < n; ++i) lhs += r.a[i] * got.x[i];
      if (r.sense == Sense::Le) {
        EXPECT_LE(lhs, r.b + 1e-8);
      }
      if (r.sense == Sense::Ge) {
        EXPECT_GE(lhs, r.b - 1e-8);
      }
      if (r.sense == Sense::Eq) {
        EXPECT_NEAR(lhs, r.b, 1e-8);
      }
    }
    for (double v : got.x) EXPECT_GE(v, -1e-12);
  }
  EXPECT_GT(optimal, 100);
  EXPECT_GT(infeasible, 10);
}

}  // namespace
