#pragma once

// Three complete Riemannian manifolds with closed-form geodesics:
//
//   Euclidean(n)  straight lines, flat metric
//   Circle        chart angle theta in [0, 2pi]; geodesics interpolate the
//                 chart angle linearly, without shortest-arc wrapping
//   Spd(n)        symmetric positive definite matrices with the
//                 affine-invariant metric g_p(X, Y) = Tr(p^-1 X p^-1 Y)
//
// Points carry their manifold tag; every operation checks that its operands
// live on the same manifold.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "ivopt/error.hpp"

namespace ivopt {

enum class ManifoldKind { Euclidean, Circle, Spd };

class Manifold {
 public:
  static Manifold euclidean(int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "Euclidean dimension must be >= 1");
    return Manifold(ManifoldKind::Euclidean, n);
  }
  static Manifold circle() { return Manifold(ManifoldKind::Circle, 1); }
  static Manifold spd(int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "SPD matrix size must be >= 1");
    return Manifold(ManifoldKind::Spd, n);
  }

  ManifoldKind kind() const noexcept { return kind_; }
  /// Vector length for Euclidean, matrix size for Spd, 1 for Circle.
  int dim() const noexcept { return dim_; }

  std::string name() const {
    switch (kind_) {
      case ManifoldKind::Euclidean: return "euclidean(" + std::to_string(dim_) + ")";
      case ManifoldKind::Circle: return "circle";
      case ManifoldKind::Spd: return "spd(" + std::to_string(dim_) + ")";
    }
    return "?";
  }

  friend bool operator==(const Manifold&, const Manifold&) = default;

 private:
  Manifold(ManifoldKind k, int n) : kind_(k), dim_(n) {}
  ManifoldKind kind_;
  int dim_;
};

namespace spd {

inline constexpr double kEigenFloor = 1e-12;
inline constexpr double kAsymmetryLimit = 1e-8;

/// Symmetrizes `m`, rejecting it when the asymmetry exceeds 1e-8.
inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::NonPositiveDefinite, "matrix is not square");
  }
  if (!m.allFinite()) throw Error(ErrorKind::NonPositiveDefinite, "matrix has non-finite entries");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kAsymmetryLimit) {
    throw Error(ErrorKind::NonPositiveDefinite,
                "matrix asymmetry " + std::to_string(asym) + " exceeds tolerance");
  }
  return 0.5 * (m + m.transpose());
}

/// Applies a scalar function to the eigenvalues of a symmetric matrix.
template <class F>
Eigen::MatrixXd eig_apply(const Eigen::MatrixXd& sym, F&& fn) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::NonPositiveDefinite, "eigendecomposition failed");
  }
  const Eigen::VectorXd mapped = es.eigenvalues().unaryExpr(fn);
  Eigen::MatrixXd out = es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

inline double min_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Symmetrizes and checks positive definiteness (eigenvalues > 1e-12).
inline Eigen::MatrixXd validated(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd s = symmetrized(m);
  const double lo = min_eigenvalue(s);
  if (!(lo > kEigenFloor)) {
    throw Error(ErrorKind::NonPositiveDefinite,
                "minimum eigenvalue " + std::to_string(lo) + " is not positive");
  }
  return s;
}

/// p^s for symmetric positive definite p.
inline Eigen::MatrixXd sym_power(const Eigen::MatrixXd& p, double s) {
  const Eigen::MatrixXd v = validated(p);
  return eig_apply(v, [s](double lambda) { return std::pow(lambda, s); });
}

/// Principal matrix logarithm of an SPD matrix.
inline Eigen::MatrixXd sym_log(const Eigen::MatrixXd& p) {
  const Eigen::MatrixXd v = validated(p);
  return eig_apply(v, [](double lambda) { return std::log(lambda); });
}

/// Matrix exponential of a symmetric matrix.
inline Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& x) {
  return eig_apply(symmetrized(x), [](double lambda) { return std::exp(lambda); });
}

}  // namespace spd

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Point {
 public:
  using Payload = std::variant<Eigen::VectorXd, double, Eigen::MatrixXd>;

  static Point euclidean(Eigen::VectorXd x) {
    if (x.size() < 1) throw Error(ErrorKind::InvalidArgument, "empty Euclidean point");
    if (!x.allFinite()) throw Error(ErrorKind::OffManifold, "non-finite Euclidean coordinate");
    return Point(Payload(std::move(x)));
  }

  /// Angles within 1e-12 outside [0, 2pi] are clamped; anything further out
  /// is rejected.
  static Point circle(double theta) {
    if (!std::isfinite(theta) || theta < -1e-12 || theta > kTwoPi + 1e-12) {
      throw Error(ErrorKind::OffManifold,
                  "circle angle " + std::to_string(theta) + " outside [0, 2pi]");
    }
    return Point(Payload(std::clamp(theta, 0.0, kTwoPi)));
  }

  static Point spd(const Eigen::MatrixXd& m) { return Point(Payload(spd::validated(m))); }

  ManifoldKind kind() const noexcept {
    return static_cast<ManifoldKind>(payload_.index());
  }

  Manifold manifold() const {
    switch (kind()) {
      case ManifoldKind::Euclidean: return Manifold::euclidean(static_cast<int>(vec().size()));
      case ManifoldKind::Circle: return Manifold::circle();
      case ManifoldKind::Spd: return Manifold::spd(static_cast<int>(mat().rows()));
    }
    return Manifold::circle();
  }

  const Eigen::VectorXd& vec() const { return std::get<Eigen::VectorXd>(payload_); }
  double theta() const { return std::get<double>(payload_); }
  const Eigen::MatrixXd& mat() const { return std::get<Eigen::MatrixXd>(payload_); }
  const Payload& payload() const noexcept { return payload_; }

 private:
  explicit Point(Payload p) : payload_(std::move(p)) {}
  Payload payload_;
};

/// Tangent vector at `base`. The payload type mirrors the point payload:
/// vector, scalar velocity, or symmetric matrix.
class TangentDirection {
 public:
  TangentDirection(Point base, Point::Payload v) : base_(std::move(base)), v_(std::move(v)) {
    if (v_.index() != base_.payload().index()) {
      throw Error(ErrorKind::BaseMismatch, "tangent payload does not match base point manifold");
    }
    switch (base_.kind()) {
      case ManifoldKind::Euclidean:
        if (vec().size() != base_.vec().size()) {
          throw Error(ErrorKind::BaseMismatch, "tangent vector dimension mismatch");
        }
        break;
      case ManifoldKind::Circle: break;
      case ManifoldKind::Spd:
        if (mat().rows() != base_.mat().rows()) {
          throw Error(ErrorKind::BaseMismatch, "tangent matrix size mismatch");
        }
        v_ = spd::symmetrized(mat());
        break;
    }
  }

  static TangentDirection zero(const Point& base) {
    switch (base.kind()) {
      case ManifoldKind::Euclidean:
        return {base, Eigen::VectorXd(Eigen::VectorXd::Zero(base.vec().size()))};
      case ManifoldKind::Circle: return {base, 0.0};
      case ManifoldKind::Spd:
        return {base, Eigen::MatrixXd(Eigen::MatrixXd::Zero(base.mat().rows(), base.mat().cols()))};
    }
    return {base, 0.0};
  }

  const Point& base() const noexcept { return base_; }
  const Point::Payload& payload() const noexcept { return v_; }
  const Eigen::VectorXd& vec() const { return std::get<Eigen::VectorXd>(v_); }
  double velocity() const { return std::get<double>(v_); }
  const Eigen::MatrixXd& mat() const { return std::get<Eigen::MatrixXd>(v_); }

  TangentDirection scaled(double s) const {
    return std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          return TangentDirection(base_, Point::Payload(T(v * s)));
        },
        v_);
  }

 private:
  Point base_;
  Point::Payload v_;
};

struct Geodesic {
  Point start;
  Point end;
};

namespace detail {

inline void require_same_manifold(const Point& p, const Point& q) {
  if (!(p.manifold() == q.manifold())) {
    throw Error(ErrorKind::BaseMismatch,
                "points on different manifolds: " + p.manifold().name() + " vs " + q.manifold().name());
  }
}

struct SpdFrame {
  Eigen::MatrixXd half;      // p^{1/2}
  Eigen::MatrixXd inv_half;  // p^{-1/2}
};

inline SpdFrame spd_frame(const Eigen::MatrixXd& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
  const Eigen::VectorXd& ev = es.eigenvalues();
  if (!(ev.minCoeff() > spd::kEigenFloor)) {
    throw Error(ErrorKind::NonPositiveDefinite, "base point is not positive definite");
  }
  const Eigen::MatrixXd& u = es.eigenvectors();
  SpdFrame f;
  f.half = u * ev.cwiseSqrt().asDiagonal() * u.transpose();
  f.inv_half = u * ev.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose();
  return f;
}

inline Eigen::MatrixXd sandwich(const Eigen::MatrixXd& a, const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = a * m * a;
  return 0.5 * (out + out.transpose());
}

}  // namespace detail

/// Point at parameter s on the geodesic from `start` to `end`. Euclidean
/// lines accept any s; Circle and Spd accept s >= 0 as long as the closed
/// form stays on the manifold.
inline Point geodesic_at(const Geodesic& g, double s) {
  detail::require_same_manifold(g.start, g.end);
  switch (g.start.kind()) {
    case ManifoldKind::Euclidean:
      return Point::euclidean((1.0 - s) * g.start.vec() + s * g.end.vec());
    case ManifoldKind::Circle:
      if (s < 0.0) throw Error(ErrorKind::OffManifold, "circle geodesic parameter must be >= 0");
      return Point::circle((1.0 - s) * g.start.theta() + s * g.end.theta());
    case ManifoldKind::Spd: {
      if (s < 0.0) throw Error(ErrorKind::OffManifold, "SPD geodesic parameter must be >= 0");
      const auto f = detail::spd_frame(g.start.mat());
      const Eigen::MatrixXd inner = detail::sandwich(f.inv_half, g.end.mat());
      return Point::spd(detail::sandwich(f.half, spd::sym_power(inner, s)));
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown manifold");
}

/// Inverse of the exponential map at p: the initial velocity of the geodesic
/// from p reaching q at s = 1.
inline TangentDirection log_map(const Point& p, const Point& q) {
  detail::require_same_manifold(p, q);
  switch (p.kind()) {
    case ManifoldKind::Euclidean:
      return {p, Eigen::VectorXd(q.vec() - p.vec())};
    case ManifoldKind::Circle:
      return {p, q.theta() - p.theta()};
    case ManifoldKind::Spd: {
      const auto f = detail::spd_frame(p.mat());
      const Eigen::MatrixXd inner = detail::sandwich(f.inv_half, q.mat());
      return {p, detail::sandwich(f.half, spd::sym_log(inner))};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown manifold");
}

/// exp_p(s X): the point at parameter s on the geodesic leaving p with
/// velocity X.
inline Point exp_map(const Point& p, const TangentDirection& x, double s = 1.0) {
  detail::require_same_manifold(p, x.base());
  if (s < 0.0 && p.kind() != ManifoldKind::Euclidean) {
    throw Error(ErrorKind::OffManifold, "exponential map parameter must be >= 0");
  }
  switch (p.kind()) {
    case ManifoldKind::Euclidean:
      return Point::euclidean(p.vec() + s * x.vec());
    case ManifoldKind::Circle:
      return Point::circle(p.theta() + s * x.velocity());
    case ManifoldKind::Spd: {
      const auto f = detail::spd_frame(p.mat());
      const Eigen::MatrixXd inner = detail::sandwich(f.inv_half, x.mat());
      return Point::spd(detail::sandwich(f.half, spd::sym_exp(s * inner)));
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown manifold");
}

inline double distance(const Point& p, const Point& q) {
  detail::require_same_manifold(p, q);
  switch (p.kind()) {
    case ManifoldKind::Euclidean: return (q.vec() - p.vec()).norm();
    case ManifoldKind::Circle: return std::abs(q.theta() - p.theta());
    case ManifoldKind::Spd: {
      const auto f = detail::spd_frame(p.mat());
      return spd::sym_log(detail::sandwich(f.inv_half, q.mat())).norm();
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown manifold");
}

/// Riemannian metric at p. Both directions must be based at p.
inline double inner(const Point& p, const TangentDirection& x, const TangentDirection& y) {
  constexpr double kBaseTol = 1e-12;
  if (distance(p, x.base()) > kBaseTol || distance(p, y.base()) > kBaseTol) {
    throw Error(ErrorKind::BaseMismatch, "tangent directions are not based at the given point");
  }
  switch (p.kind()) {
    case ManifoldKind::Euclidean: return x.vec().dot(y.vec());
    case ManifoldKind::Circle: return x.velocity() * y.velocity();
    case ManifoldKind::Spd: {
      const Eigen::MatrixXd pinv = p.mat().inverse();
      return (pinv * x.mat() * pinv * y.mat()).trace();
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown manifold");
}

inline double norm(const TangentDirection& x) { return std::sqrt(inner(x.base(), x, x)); }

}  // namespace ivopt
