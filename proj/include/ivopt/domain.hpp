#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ivopt/error.hpp"
#include "ivopt/manifold.hpp"

namespace ivopt {

/// Deterministic random source. Uniform variates are built from raw
/// mt19937_64 output, so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

  double normal() {
    // Box-Muller; u1 kept away from 0.
    const double u1 = (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Independent child stream, for reproducible sub-sampling.
  Rng fork() { return Rng(eng_() ^ 0x9e3779b97f4a7c15ULL); }

 private:
  std::mt19937_64 eng_;
};

/// A subset E of a manifold: membership predicate plus a generator of
/// member points. `anchor`, when set, is the point E is star-shaped at.
struct DomainSampler {
  Manifold manifold = Manifold::circle();
  std::function<bool(const Point&)> contains;
  std::function<Point(Rng&)> draw;
  std::optional<Point> anchor;
  std::string description;

  /// `n` members of E, reproducible for a given seed. Throws
  /// SamplerExhausted when acceptance is too rare.
  std::vector<Point> sample(std::size_t n, std::uint64_t seed) const {
    Rng rng(seed);
    return sample(n, rng);
  }

  std::vector<Point> sample(std::size_t n, Rng& rng) const {
    std::vector<Point> out;
    out.reserve(n);
    const std::size_t budget = 1000 * n + 1000;
    std::size_t attempts = 0;
    while (out.size() < n) {
      if (++attempts > budget) {
        throw Error(ErrorKind::SamplerExhausted, "could not draw " + std::to_string(n) +
                                                     " members of " + description);
      }
      Point p = draw(rng);
      if (contains(p)) out.push_back(std::move(p));
    }
    return out;
  }

  /// E intersected with {p : extra(p)}.
  DomainSampler restricted(std::function<bool(const Point&)> extra, const std::string& what) const {
    DomainSampler out = *this;
    out.contains = [base = contains, extra = std::move(extra)](const Point& p) {
      return base(p) && extra(p);
    };
    out.description = description + " restricted to " + what;
    return out;
  }

  DomainSampler with_anchor(Point p0) const {
    DomainSampler out = *this;
    out.anchor = std::move(p0);
    return out;
  }
};

namespace domains {

inline DomainSampler euclidean_box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() != hi.size() || lo.size() == 0 || (hi - lo).minCoeff() < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "invalid Euclidean box");
  }
  DomainSampler d;
  d.manifold = Manifold::euclidean(static_cast<int>(lo.size()));
  d.contains = [lo, hi](const Point& p) {
    if (p.kind() != ManifoldKind::Euclidean || p.vec().size() != lo.size()) return false;
    return ((p.vec() - lo).array() >= -1e-12).all() && ((hi - p.vec()).array() >= -1e-12).all();
  };
  d.draw = [lo, hi](Rng& rng) {
    Eigen::VectorXd x(lo.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.uniform(lo(i), hi(i));
    return Point::euclidean(std::move(x));
  };
  d.description = "euclidean box";
  return d;
}

inline DomainSampler euclidean_box(int n, double lo, double hi) {
  return euclidean_box(Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi));
}

/// Chart arc {theta in [lo, hi]} of the circle; the full circle by default.
inline DomainSampler circle_arc(double lo = 0.0, double hi = kTwoPi) {
  if (lo < 0.0 || hi > kTwoPi || lo > hi) throw Error(ErrorKind::InvalidArgument, "invalid circle arc");
  DomainSampler d;
  d.manifold = Manifold::circle();
  d.contains = [lo, hi](const Point& p) {
    return p.kind() == ManifoldKind::Circle && p.theta() >= lo - 1e-12 && p.theta() <= hi + 1e-12;
  };
  d.draw = [lo, hi](Rng& rng) { return Point::circle(rng.uniform(lo, hi)); };
  d.description = "circle arc";
  return d;
}

/// SPD(n) matrices whose eigenvalues lie in [lo, hi]. The set is
/// geodesically convex for the affine-invariant metric. Eigenvalues are
/// drawn log-uniformly, eigenvectors from a random orthogonal matrix.
inline DomainSampler spd_spectrum(int n, double lo, double hi) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw Error(ErrorKind::InvalidArgument, "invalid SPD spectrum box");
  DomainSampler d;
  d.manifold = Manifold::spd(n);
  d.contains = [n, lo, hi](const Point& p) {
    if (p.kind() != ManifoldKind::Spd || p.mat().rows() != n) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.mat(), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double slack = 1e-9 * hi;
    return ev.minCoeff() >= lo - slack && ev.maxCoeff() <= hi + slack;
  };
  d.draw = [n, lo, hi](Rng& rng) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd ev(n);
    for (int i = 0; i < n; ++i) ev(i) = std::exp(rng.uniform(std::log(lo), std::log(hi)));
    return Point::spd(q * ev.asDiagonal() * q.transpose());
  };
  d.description = "spd(" + std::to_string(n) + ") with spectrum in [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]";
  return d;
}

/// Uniform draws from a fixed list; membership is within 1e-9 of a member.
inline DomainSampler finite_set(std::vector<Point> points, std::string description = "finite set") {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "empty finite domain");
  DomainSampler d;
  d.manifold = points.front().manifold();
  d.contains = [points](const Point& p) {
    for (const auto& q : points) {
      if (p.manifold() == q.manifold() && distance(p, q) <= 1e-9) return true;
    }
    return false;
  };
  d.draw = [points](Rng& rng) { return points[rng.index(points.size())]; };
  d.description = std::move(description);
  return d;
}

}  // namespace domains

}  // namespace ivopt
