#pragma once

// JSON problem files and JSON rendering of points, reports and certificates.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ivopt/builtins/catalog.hpp"
#include "ivopt/convexity.hpp"
#include "ivopt/domain.hpp"
#include "ivopt/error.hpp"
#include "ivopt/function.hpp"
#include "ivopt/interval.hpp"
#include "ivopt/kkt.hpp"
#include "ivopt/manifold.hpp"

namespace ivopt::io {

using json = nlohmann::json;

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw Error(ErrorKind::ConfigError, "unknown key '" + key + "' in " + where);
  }
}

inline double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw Error(ErrorKind::ConfigError, what + " must be a number");
  return j.get<double>();
}

inline std::string text(const json& j, const std::string& what) {
  if (!j.is_string()) throw Error(ErrorKind::ConfigError, what + " must be a string");
  return j.get<std::string>();
}

inline std::vector<double> numbers(const json& j, const std::string& what) {
  if (!j.is_array()) throw Error(ErrorKind::ConfigError, what + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

inline Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Points

/// Euclidean `[x1,...,xn]`, circle `{"theta": t}` or a bare angle, SPD row-major
/// nested arrays.
inline Point point_from_json(const json& j, const Manifold& m) {
  switch (m.kind()) {
    case ManifoldKind::Euclidean: {
      const auto v = detail::numbers(j, "Euclidean point");
      if (static_cast<int>(v.size()) != m.dim()) {
        throw Error(ErrorKind::ConfigError, "Euclidean point has " + std::to_string(v.size()) +
                                                " coordinates, expected " + std::to_string(m.dim()));
      }
      return Point::euclidean(detail::to_vector(v));
    }
    case ManifoldKind::Circle:
      if (j.is_number()) return Point::circle(j.get<double>());
      detail::require_keys(j, {"theta"}, "circle point");
      if (!j.contains("theta")) throw Error(ErrorKind::ConfigError, "circle point needs \"theta\"");
      return Point::circle(detail::number(j.at("theta"), "theta"));
    case ManifoldKind::Spd: {
      if (!j.is_array() || static_cast<int>(j.size()) != m.dim()) {
        throw Error(ErrorKind::ConfigError, "SPD point must be " + std::to_string(m.dim()) + " rows");
      }
      Eigen::MatrixXd a(m.dim(), m.dim());
      for (int r = 0; r < m.dim(); ++r) {
        const auto row = detail::numbers(j[static_cast<std::size_t>(r)], "SPD row");
        if (static_cast<int>(row.size()) != m.dim()) throw Error(ErrorKind::ConfigError, "SPD row has wrong length");
        for (int c = 0; c < m.dim(); ++c) a(r, c) = row[static_cast<std::size_t>(c)];
      }
      return Point::spd(a);
    }
  }
  throw Error(ErrorKind::ConfigError, "unknown manifold");
}

inline Point parse_point(const std::string& text, const Manifold& m) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, "cannot parse point '" + text + "': " + e.what());
  }
  return point_from_json(j, m);
}

inline json to_json(const Point& p) {
  switch (p.kind()) {
    case ManifoldKind::Euclidean: return json(std::vector<double>(p.vec().data(), p.vec().data() + p.vec().size()));
    case ManifoldKind::Circle: return json{{"theta", p.theta()}};
    case ManifoldKind::Spd: {
      json rows = json::array();
      for (Eigen::Index r = 0; r < p.mat().rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < p.mat().cols(); ++c) row.push_back(p.mat()(r, c));
        rows.push_back(row);
      }
      return rows;
    }
  }
  return nullptr;
}

inline json to_json(const TangentDirection& x) {
  switch (x.base().kind()) {
    case ManifoldKind::Euclidean: return json(std::vector<double>(x.vec().data(), x.vec().data() + x.vec().size()));
    case ManifoldKind::Circle: return json(x.velocity());
    case ManifoldKind::Spd: {
      json rows = json::array();
      for (Eigen::Index r = 0; r < x.mat().rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < x.mat().cols(); ++c) row.push_back(x.mat()(r, c));
        rows.push_back(row);
      }
      return rows;
    }
  }
  return nullptr;
}

inline json to_json(const Interval& t) {
  return json{{"lb", t.lb()}, {"ub", t.ub()}, {"center", t.center()}, {"halfwidth", t.halfwidth()}};
}

// ---------------------------------------------------------------------------
// Problem files

struct FileOptions {
  std::optional<int> pairs;
  std::optional<int> grid;
  std::optional<int> directions;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<bool> strict;
  std::optional<DirectionSource> source;
  std::optional<SplitMode> mode;
};

struct ProblemFile {
  Problem problem;
  std::optional<Point> candidate;
  FileOptions options;
};

inline Manifold manifold_from_json(const json& j) {
  detail::require_keys(j, {"kind", "dim", "box", "theta_range", "eig_range", "domain"}, "manifold");
  if (!j.contains("kind")) throw Error(ErrorKind::ConfigError, "manifold needs \"kind\"");
  const std::string kind = detail::text(j.at("kind"), "manifold kind");
  const int dim = j.contains("dim") ? static_cast<int>(detail::number(j.at("dim"), "dim")) : -1;
  if (kind == "circle") return Manifold::circle();
  if (kind == "euclidean") {
    if (dim < 1) throw Error(ErrorKind::ConfigError, "euclidean manifold needs \"dim\" >= 1");
    return Manifold::euclidean(dim);
  }
  if (kind == "spd") {
    if (dim < 1) throw Error(ErrorKind::ConfigError, "spd manifold needs \"dim\" >= 1");
    return Manifold::spd(dim);
  }
  throw Error(ErrorKind::ConfigError, "unknown manifold kind '" + kind + "' (euclidean, circle, spd)");
}

/// Domain from the manifold block: a box, a chart arc, an eigenvalue range,
/// or a named builtin domain.
inline DomainSampler domain_from_json(const json& j, const Manifold& m) {
  if (j.contains("domain")) return builtins::domain(detail::text(j.at("domain"), "domain"));
  switch (m.kind()) {
    case ManifoldKind::Euclidean: {
      if (!j.contains("box")) return domains::euclidean_box(m.dim(), -1.0, 1.0);
      const json& box = j.at("box");
      if (!box.is_array() || box.size() != 2) throw Error(ErrorKind::ConfigError, "box must be [lo, hi]");
      if (box[0].is_number()) {
        return domains::euclidean_box(m.dim(), detail::number(box[0], "box lo"), detail::number(box[1], "box hi"));
      }
      return domains::euclidean_box(detail::to_vector(detail::numbers(box[0], "box lo")),
                                    detail::to_vector(detail::numbers(box[1], "box hi")));
    }
    case ManifoldKind::Circle: {
      if (!j.contains("theta_range")) return domains::circle_arc();
      const auto r = detail::numbers(j.at("theta_range"), "theta_range");
      if (r.size() != 2) throw Error(ErrorKind::ConfigError, "theta_range must be [lo, hi]");
      return domains::circle_arc(r[0], r[1]);
    }
    case ManifoldKind::Spd: {
      std::vector<double> r{0.25, 4.0};
      if (j.contains("eig_range")) r = detail::numbers(j.at("eig_range"), "eig_range");
      if (r.size() != 2) throw Error(ErrorKind::ConfigError, "eig_range must be [lo, hi]");
      return domains::spd_spectrum(m.dim(), r[0], r[1]);
    }
  }
  throw Error(ErrorKind::ConfigError, "unknown manifold");
}

/// `{"real": e}`, `{"center": c, "width": w}` or `{"builtin": name}`.
inline AnyFn function_from_json(const json& j, const Manifold& m, const std::string& where) {
  detail::require_keys(j, {"real", "center", "width", "builtin"}, where);
  if (j.contains("builtin")) {
    if (j.size() != 1) throw Error(ErrorKind::ConfigError, where + ": builtin excludes other keys");
    return builtins::function(detail::text(j.at("builtin"), "builtin"));
  }
  if (j.contains("real")) {
    if (j.size() != 1) throw Error(ErrorKind::ConfigError, where + ": real excludes other keys");
    return RealFn::parse(detail::text(j.at("real"), "real"), m);
  }
  if (j.contains("center") && j.contains("width")) {
    return IvFn::parse(detail::text(j.at("center"), "center"), detail::text(j.at("width"), "width"), m);
  }
  throw Error(ErrorKind::ConfigError, where + " needs \"real\", \"center\"+\"width\", or \"builtin\"");
}

inline FileOptions options_from_json(const json& j) {
  detail::require_keys(j, {"pairs", "grid", "directions", "seed", "tol", "strict", "source", "mode"}, "options");
  FileOptions o;
  if (j.contains("pairs")) o.pairs = static_cast<int>(detail::number(j.at("pairs"), "pairs"));
  if (j.contains("grid")) o.grid = static_cast<int>(detail::number(j.at("grid"), "grid"));
  if (j.contains("directions")) o.directions = static_cast<int>(detail::number(j.at("directions"), "directions"));
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw Error(ErrorKind::ConfigError, "seed must be a nonnegative integer");
    o.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("tol")) o.tol = detail::number(j.at("tol"), "tol");
  if (j.contains("strict")) {
    if (!j.at("strict").is_boolean()) throw Error(ErrorKind::ConfigError, "strict must be a boolean");
    o.strict = j.at("strict").get<bool>();
  }
  if (j.contains("source")) {
    const auto s = detail::text(j.at("source"), "source");
    if (s == "feasible") o.source = DirectionSource::Feasible;
    else if (s == "domain") o.source = DirectionSource::Domain;
    else throw Error(ErrorKind::ConfigError, "source must be \"feasible\" or \"domain\"");
  }
  if (j.contains("mode")) {
    const auto s = detail::text(j.at("mode"), "mode");
    if (s == "center-nonconstant") o.mode = SplitMode::CenterNonConstant;
    else if (s == "center-constant") o.mode = SplitMode::CenterConstant;
    else throw Error(ErrorKind::ConfigError, "mode must be \"center-nonconstant\" or \"center-constant\"");
  }
  return o;
}

inline ProblemFile problem_from_json(const json& j, const std::string& name) {
  detail::require_keys(j, {"name", "manifold", "objective", "constraints", "candidate", "options"}, "problem");
  if (!j.contains("manifold")) throw Error(ErrorKind::ConfigError, "problem needs \"manifold\"");
  if (!j.contains("objective")) throw Error(ErrorKind::ConfigError, "problem needs \"objective\"");
  const Manifold m = manifold_from_json(j.at("manifold"));
  DomainSampler dom = domain_from_json(j.at("manifold"), m);
  if (!(dom.manifold == m)) throw Error(ErrorKind::ConfigError, "builtin domain lives on " + dom.manifold.name());
  AnyFn objective = function_from_json(j.at("objective"), m, "objective");
  std::vector<AnyFn> constraints;
  if (j.contains("constraints")) {
    if (!j.at("constraints").is_array()) throw Error(ErrorKind::ConfigError, "constraints must be an array");
    std::size_t k = 0;
    for (const auto& c : j.at("constraints")) {
      constraints.push_back(function_from_json(c, m, "constraint " + std::to_string(++k)));
    }
  }
  std::optional<Point> candidate;
  if (j.contains("candidate")) candidate = point_from_json(j.at("candidate"), m);
  FileOptions options;
  if (j.contains("options")) options = options_from_json(j.at("options"));
  const std::string pname = j.contains("name") ? detail::text(j.at("name"), "name") : name;
  if (candidate) dom = dom.with_anchor(*candidate);
  return ProblemFile{Problem(pname, std::move(objective), std::move(constraints), std::move(dom)), candidate,
                     options};
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open problem file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, "invalid JSON in '" + path + "': " + e.what());
  }
  return problem_from_json(j, path);
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const ConvexityReport& r) {
  json out{{"verdict", to_string(r.verdict)}, {"samples_used", r.samples_used}, {"skipped", r.skipped}};
  if (r.counterexample) {
    const Witness& w = *r.counterexample;
    json wj{{"p", to_json(w.p)}, {"q", to_json(w.q)}, {"s", w.s}, {"what", w.what}};
    if (w.lhs) wj["lhs"] = to_json(*w.lhs);
    if (w.rhs) wj["rhs"] = to_json(*w.rhs);
    out["witness"] = wj;
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

inline json to_json(const KktCertificate& c) {
  json dirs = json::array();
  for (const auto& d : c.directions) {
    json cons = json::array();
    for (const auto& g : d.constraint_derivatives) cons.push_back(to_json(g));
    dirs.push_back(json{{"target", to_json(d.target)},
                        {"direction", to_json(d.direction)},
                        {"feasible_target", d.feasible_target},
                        {"objective_derivative", to_json(d.objective_derivative)},
                        {"constraint_derivatives", cons},
                        {"residual", to_json(d.residual)},
                        {"ok", d.ok}});
  }
  json hyps = json::array();
  for (const auto& h : c.hypotheses) {
    hyps.push_back(json{{"name", h.name}, {"ok", h.ok}, {"required", h.required}, {"detail", h.detail}});
  }
  json active = json::array();
  for (std::size_t i : c.active_set) active.push_back(i + 1);
  return json{{"condition", c.condition},
              {"candidate", to_json(c.candidate)},
              {"value", to_json(c.value)},
              {"active_set", active},
              {"multipliers", c.multipliers},
              {"verdict", to_string(c.verdict)},
              {"reasons", c.reasons},
              {"hypotheses", hyps},
              {"failing_direction", c.failing_direction ? json(*c.failing_direction) : json(nullptr)},
              {"sample_basis", c.sample_basis},
              {"seed", c.seed},
              {"directions", dirs}};
}

}  // namespace ivopt::io
