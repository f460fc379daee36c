#pragma once

// Built-in functions, domains and problems that the expression language
// cannot describe, plus the registered example problems.

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ivopt/domain.hpp"
#include "ivopt/error.hpp"
#include "ivopt/expr.hpp"
#include "ivopt/function.hpp"
#include "ivopt/kkt.hpp"
#include "ivopt/manifold.hpp"

namespace ivopt::builtins {

// ---------------------------------------------------------------------------
// Two-ray domain in SPD(2): {2^s I} and {diag(1, 2^s)}, s in [0, 1], joined at
// the identity. Functions on it are piecewise by ray.

namespace rays {

inline constexpr double kRayTol = 1e-9;

enum class Ray { Scalar, Diagonal, Both };

/// Which ray the matrix lies on (any s); throws DomainError off both rays.
inline Ray classify(const Point& p) {
  if (p.kind() != ManifoldKind::Spd || p.mat().rows() != 2) {
    throw Error(ErrorKind::DomainError, "two-ray functions are defined on SPD(2) only");
  }
  const Eigen::MatrixXd& m = p.mat();
  const double tol = kRayTol * std::max(1.0, m.cwiseAbs().maxCoeff());
  if (std::abs(m(0, 1)) > tol) throw Error(ErrorKind::DomainError, "point is off the two-ray domain");
  const bool scalar = std::abs(m(0, 0) - m(1, 1)) <= tol;
  const bool diagonal = std::abs(m(0, 0) - 1.0) <= tol;
  if (scalar && diagonal) return Ray::Both;
  if (scalar) return Ray::Scalar;
  if (diagonal) return Ray::Diagonal;
  throw Error(ErrorKind::DomainError, "point is off the two-ray domain");
}

/// Ray parameter s with p = 2^s I or diag(1, 2^s).
inline double parameter(const Point& p) {
  switch (classify(p)) {
    case Ray::Both: return 0.0;
    case Ray::Scalar: return std::log2(p.mat()(0, 0));
    case Ray::Diagonal: return std::log2(p.mat()(1, 1));
  }
  return 0.0;
}

inline Point scalar_point(double s) { return Point::spd(std::exp2(s) * Eigen::MatrixXd::Identity(2, 2)); }

inline Point diagonal_point(double s) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(1, 1) = std::exp2(s);
  return Point::spd(m);
}

/// Piecewise function: `on_scalar(logdet p)` on the scalar ray, `on_diagonal`
/// on the diagonal ray.
inline RealFn piecewise(std::string name, double (*on_scalar)(double), double on_diagonal) {
  return RealFn(std::move(name), [on_scalar, on_diagonal](const Point& p) {
    switch (classify(p)) {
      case Ray::Both:
      case Ray::Scalar: return on_scalar(expr::spd_logdet(p.mat()));
      case Ray::Diagonal: return on_diagonal;
    }
    return on_diagonal;
  });
}

inline DomainSampler domain() {
  DomainSampler d;
  d.manifold = Manifold::spd(2);
  d.contains = [](const Point& p) {
    try {
      const double s = parameter(p);
      return s >= -kRayTol && s <= 1.0 + kRayTol;
    } catch (const Error&) {
      return false;
    }
  };
  d.draw = [](Rng& rng) {
    const bool scalar = rng.uniform() < 0.5;
    const double s = rng.uniform();
    return scalar ? scalar_point(s) : diagonal_point(s);
  };
  d.anchor = Point::spd(Eigen::MatrixXd::Identity(2, 2));
  d.description = "two rays {2^s I} and {diag(1,2^s)} in spd(2)";
  return d;
}

inline RealFn f_center() {
  return piecewise("rays.fc", [](double ld) { return ld; }, 0.0);
}
inline RealFn g1() {
  return piecewise("rays.g1", [](double ld) { return -ld; }, 0.0);
}
inline RealFn g2() {
  return piecewise("rays.g2", [](double ld) { return -ld * ld - 1.0; }, -1.0);
}
inline RealFn g3() {
  return piecewise("rays.g3", [](double ld) { return ld - 1.0; }, -1.0);
}
inline IvFn f() { return IvFn(f_center(), RealFn::constant(1.0)); }

}  // namespace rays

/// Names accepted by `{"builtin": name}` in problem files.
inline const std::map<std::string, AnyFn>& function_registry() {
  static const std::map<std::string, AnyFn> reg = {
      {"rays.f", AnyFn(rays::f())},
      {"rays.fc", AnyFn(rays::f_center())},
      {"rays.g1", AnyFn(rays::g1())},
      {"rays.g2", AnyFn(rays::g2())},
      {"rays.g3", AnyFn(rays::g3())},
      {"rays.g1_interval", AnyFn(IvFn::degenerate(rays::g1()))},
      {"rays.g2_interval", AnyFn(IvFn::degenerate(rays::g2()))},
      {"rays.g3_interval", AnyFn(IvFn::degenerate(rays::g3()))},
  };
  return reg;
}

inline AnyFn function(const std::string& name) {
  const auto& reg = function_registry();
  const auto it = reg.find(name);
  if (it == reg.end()) throw Error(ErrorKind::ConfigError, "unknown builtin function '" + name + "'");
  return it->second;
}

inline DomainSampler domain(const std::string& name) {
  if (name == "rays") return rays::domain();
  throw Error(ErrorKind::ConfigError, "unknown builtin domain '" + name + "'");
}

// ---------------------------------------------------------------------------
// Registered problems

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Circle problem with a real objective and three real constraints, one of
/// which is not convex at the candidate.
inline Problem circle_problem() {
  const Manifold m = Manifold::circle();
  return Problem("Pstar", RealFn::parse("(theta - pi/2)^2", m),
                 {RealFn::parse("theta - pi/2", m), RealFn::parse("exp(-(theta - pi/2)^2) - 1", m),
                  RealFn::parse("-ln(9*pi^2 - (theta - pi/2)^2)", m)},
                 domains::circle_arc().with_anchor(Point::circle(kHalfPi)));
}

inline Point circle_candidate() { return Point::circle(kHalfPi); }

/// Interval objective on the two-ray domain with piecewise real constraints.
inline Problem rays_problem() {
  return Problem("Pstarstar", rays::f(), {rays::g1(), rays::g2(), rays::g3()}, rays::domain());
}

/// Same problem with every constraint embedded as a zero-width interval.
inline Problem rays_problem_lifted() {
  return Problem("Pstarstar-lifted", rays::f(),
                 {IvFn::degenerate(rays::g1()), IvFn::degenerate(rays::g2()), IvFn::degenerate(rays::g3())},
                 rays::domain());
}

inline Point rays_candidate() { return Point::spd(Eigen::MatrixXd::Identity(2, 2)); }

}  // namespace ivopt::builtins
