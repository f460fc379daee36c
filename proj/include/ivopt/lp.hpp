#pragma once

// Small dense linear programs: minimize c.x subject to row constraints and
// x >= 0. Two-phase tableau simplex with Bland's rule, which cannot cycle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "ivopt/error.hpp"

namespace ivopt::lp {

enum class Sense { Le, Ge, Eq };

struct Row {
  std::vector<double> a;
  Sense sense = Sense::Le;
  double b = 0.0;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

namespace detail {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows, std::vector<double>(cols + 1, 0.0)) {}

  double& at(std::size_t i, std::size_t j) { return t_[i][j]; }
  double& rhs(std::size_t i) { return t_[i][n_]; }

  /// Minimizes cost.x over columns with allowed[j]. Returns false when
  /// unbounded.
  bool run(const std::vector<double>& cost, const std::vector<bool>& allowed, std::vector<std::size_t>& basis,
           double eps) {
    const std::size_t limit = 50 * (m_ + n_) + 1000;
    for (std::size_t iter = 0; iter < limit; ++iter) {
      std::vector<double> reduced(n_);
      for (std::size_t j = 0; j < n_; ++j) {
        double z = cost[j];
        for (std::size_t i = 0; i < m_; ++i) z -= cost[basis[i]] * t_[i][j];
        reduced[j] = z;
      }
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (allowed[j] && reduced[j] < -eps) {
          enter = j;
          break;
        }
      }
      if (enter == n_) return true;

      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] > eps) {
          const double ratio = t_[i][n_] / t_[i][enter];
          if (leave == m_ || ratio < best - eps) {
            leave = i;
            best = ratio;
          } else if (ratio <= best + eps && basis[i] < basis[leave]) {
            leave = i;
            best = std::min(best, ratio);
          }
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
      basis[leave] = enter;
    }
    throw Error(ErrorKind::NotConverged, "simplex iteration limit reached");
  }

  void pivot(std::size_t r, std::size_t c) {
    const double piv = t_[r][c];
    for (double& v : t_[r]) v /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double factor = t_[i][c];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) t_[i][j] -= factor * t_[r][j];
    }
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<std::vector<double>> t_;
};

}  // namespace detail

/// Minimizes c.x subject to `rows` and x >= 0.
inline Result minimize(const std::vector<double>& c, const std::vector<Row>& rows, double eps = 1e-10) {
  const std::size_t n = c.size();
  const std::size_t m = rows.size();
  for (const auto& r : rows) {
    if (r.a.size() != n) throw Error(ErrorKind::InvalidArgument, "LP row has the wrong number of coefficients");
  }
  if (m == 0) {
    for (double ci : c) {
      if (ci < 0.0) return {Status::Unbounded, {}, 0.0};
    }
    return {Status::Optimal, std::vector<double>(n, 0.0), 0.0};
  }

  // Normalize to b >= 0, then count slack and artificial columns.
  std::vector<Row> norm = rows;
  for (auto& r : norm) {
    if (r.b < 0.0) {
      for (double& v : r.a) v = -v;
      r.b = -r.b;
      if (r.sense == Sense::Le) r.sense = Sense::Ge;
      else if (r.sense == Sense::Ge) r.sense = Sense::Le;
    }
  }
  std::size_t slacks = 0;
  std::size_t artificials = 0;
  for (const auto& r : norm) {
    if (r.sense != Sense::Eq) ++slacks;
    if (r.sense != Sense::Le) ++artificials;
  }
  const std::size_t cols = n + slacks + artificials;
  detail::Tableau tab(m, cols);
  std::vector<std::size_t> basis(m);
  std::vector<bool> is_artificial(cols, false);
  std::size_t next_slack = n;
  std::size_t next_art = n + slacks;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = norm[i].a[j];
    tab.rhs(i) = norm[i].b;
    switch (norm[i].sense) {
      case Sense::Le:
        tab.at(i, next_slack) = 1.0;
        basis[i] = next_slack++;
        break;
      case Sense::Ge:
        tab.at(i, next_slack++) = -1.0;
        tab.at(i, next_art) = 1.0;
        is_artificial[next_art] = true;
        basis[i] = next_art++;
        break;
      case Sense::Eq:
        tab.at(i, next_art) = 1.0;
        is_artificial[next_art] = true;
        basis[i] = next_art++;
        break;
    }
  }

  double scale = 1.0;
  for (const auto& r : norm) scale = std::max(scale, std::abs(r.b));

  if (artificials > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) phase1[j] = is_artificial[j] ? 1.0 : 0.0;
    std::vector<bool> all(cols, true);
    tab.run(phase1, all, basis, eps);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (is_artificial[basis[i]]) infeas += tab.rhs(i);
    }
    if (infeas > 1e-9 * scale) return {Status::Infeasible, {}, 0.0};
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_artificial[basis[i]]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (!is_artificial[j] && std::abs(tab.at(i, j)) > eps) {
          tab.pivot(i, j);
          basis[i] = j;
          break;
        }
      }
    }
  }

  std::vector<double> cost(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = c[j];
  std::vector<bool> allowed(cols, true);
  for (std::size_t j = 0; j < cols; ++j) allowed[j] = !is_artificial[j];
  if (!tab.run(cost, allowed, basis, eps)) return {Status::Unbounded, {}, 0.0};

  Result out;
  out.status = Status::Optimal;
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) out.x[basis[i]] = std::max(0.0, tab.rhs(i));
  }
  for (std::size_t j = 0; j < n; ++j) out.objective += c[j] * out.x[j];
  return out;
}

}  // namespace ivopt::lp
