// ivopt command-line front end.
//
//   ivopt order T1 T2 [--relation min|max|lu] [--eps E]
//   ivopt check-convexity --problem f.json [--at <point>] [--pairs N] [--grid G] [--strict] [--seed S]
//   ivopt check-kkt --problem f.json [--point <point>] [--mu a,b,c | --find-mu] [--directions N] [--seed S]
//   ivopt repro --example ID | --all
//
// Exit codes: 0 success, 2 inconclusive / counterexample / mismatch, 1 error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivopt/ivopt.hpp"

namespace {

using ivopt::io::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNegative = 2;

std::string point_text(const ivopt::Point& p) { return ivopt::io::to_json(p).dump(); }

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (item.empty() || used != item.size()) {
      throw ivopt::Error(ivopt::ErrorKind::InvalidArgument, "bad number '" + item + "' in list '" + text + "'");
    }
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct OrderArgs {
  std::string t1;
  std::string t2;
  std::string relation = "min";
  std::optional<double> eps;
};

int run_order(const OrderArgs& a) {
  const auto t1 = ivopt::parse_interval(a.t1);
  const auto t2 = ivopt::parse_interval(a.t2);
  ivopt::OrderRelation rel = ivopt::OrderRelation::MinOrder;
  if (a.relation == "max") rel = ivopt::OrderRelation::MaxOrder;
  else if (a.relation == "lu") rel = ivopt::OrderRelation::LuPartial;
  std::cout << ivopt::to_string(ivopt::compare(t1, t2, rel, a.eps)) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ConvexityArgs {
  std::string problem;
  std::string at;
  std::string function = "objective";
  std::optional<int> pairs;
  std::optional<int> grid;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  bool cw = false;
  bool chord = false;
  bool json = false;
};

int run_check_convexity(const ConvexityArgs& a) {
  const auto file = ivopt::io::load_problem(a.problem);
  const auto& prob = file.problem;

  ivopt::SampleOptions opt;
  opt.pairs = a.pairs.value_or(file.options.pairs.value_or(opt.pairs));
  opt.grid = a.grid.value_or(file.options.grid.value_or(opt.grid));
  opt.seed = a.seed.value_or(file.options.seed.value_or(opt.seed));
  const bool strict = a.strict || file.options.strict.value_or(false);

  ivopt::AnyFn fn = prob.objective;
  if (a.function != "objective") {
    if (a.function.size() < 2 || a.function[0] != 'g') {
      throw ivopt::Error(ivopt::ErrorKind::InvalidArgument, "--function must be 'objective' or gN");
    }
    const auto idx = static_cast<std::size_t>(std::stoul(a.function.substr(1)));
    if (idx < 1 || idx > prob.constraints.size()) {
      throw ivopt::Error(ivopt::ErrorKind::InvalidArgument, "no constraint " + a.function);
    }
    fn = prob.constraints[idx - 1];
  }
  const ivopt::IvFn f = ivopt::as_ivfn(fn);
  const ivopt::Path path = a.chord ? ivopt::euclidean_chord_path() : ivopt::geodesic_path();

  std::optional<ivopt::Point> at;
  if (!a.at.empty()) at = ivopt::io::parse_point(a.at, prob.manifold());

  ivopt::ConvexityReport rep;
  std::string what = a.cw ? "cw-convex" : (strict ? "strictly convex" : "convex");
  if (at) {
    rep = a.cw ? ivopt::check_cw_convex_at(f, *at, prob.domain, opt, strict)
               : ivopt::check_convex_at(f, *at, prob.domain, opt, strict, path);
    what += " at " + point_text(*at);
  } else {
    rep = a.cw ? ivopt::check_cw_convex(f, prob.domain, opt, strict)
               : ivopt::check_convex(f, prob.domain, opt, strict, path);
  }

  if (a.json) {
    json out = ivopt::io::to_json(rep);
    out["function"] = ivopt::describe(fn);
    out["property"] = what;
    out["path"] = a.chord ? "chord" : "geodesic";
    out["pairs"] = opt.pairs;
    out["grid"] = opt.grid;
    out["seed"] = opt.seed;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << ivopt::to_string(rep.verdict) << ": " << ivopt::describe(fn) << " " << what << " ("
              << rep.samples_used << " samples, grid " << opt.grid << ", seed " << opt.seed << ")\n";
    if (rep.counterexample) {
      const auto& w = *rep.counterexample;
      std::cout << "  witness: p=" << point_text(w.p) << " q=" << point_text(w.q) << " s=" << w.s;
      if (w.lhs && w.rhs) std::cout << " lhs=" << ivopt::format_cw(*w.lhs) << " rhs=" << ivopt::format_cw(*w.rhs);
      std::cout << "\n  violated: " << w.what << "\n";
    }
  }
  return rep.holds() ? kExitOk : kExitNegative;
}

// ---------------------------------------------------------------------------

struct KktArgs {
  std::string problem;
  std::string point;
  std::string mu;
  bool find_mu = false;
  std::optional<int> directions;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string mode;
  std::string source;
  std::optional<double> deriv_h0;
  std::optional<int> deriv_levels;
  std::optional<double> deriv_tol;
  std::string certificate;
  bool json = false;
};

int run_check_kkt(const KktArgs& a) {
  const auto file = ivopt::io::load_problem(a.problem);
  const auto& prob = file.problem;

  std::optional<ivopt::Point> p0 = file.candidate;
  if (!a.point.empty()) p0 = ivopt::io::parse_point(a.point, prob.manifold());
  if (!p0) throw ivopt::Error(ivopt::ErrorKind::InvalidArgument, "no candidate point: pass --point");

  ivopt::KktOptions opt;
  opt.directions = a.directions.value_or(file.options.directions.value_or(opt.directions));
  opt.seed = a.seed.value_or(file.options.seed.value_or(opt.seed));
  opt.hypothesis.seed = opt.seed;
  if (file.options.pairs) opt.hypothesis.pairs = *file.options.pairs;
  if (file.options.grid) opt.hypothesis.grid = *file.options.grid;
  opt.stationarity_tol = a.tol.value_or(file.options.tol.value_or(opt.stationarity_tol));
  opt.source = file.options.source.value_or(opt.source);
  if (a.source == "domain") opt.source = ivopt::DirectionSource::Domain;
  else if (a.source == "feasible") opt.source = ivopt::DirectionSource::Feasible;
  if (a.deriv_h0) opt.scheme.h0 = *a.deriv_h0;
  if (a.deriv_levels) opt.scheme.levels = *a.deriv_levels;
  if (a.deriv_tol) opt.scheme.tol = *a.deriv_tol;
  opt.scheme.validate();

  std::optional<ivopt::SplitMode> mode = file.options.mode;
  if (a.mode == "center-nonconstant") mode = ivopt::SplitMode::CenterNonConstant;
  else if (a.mode == "center-constant") mode = ivopt::SplitMode::CenterConstant;
  if (mode && prob.label() == ivopt::ProblemLabel::P2) {
    throw ivopt::Error(ivopt::ErrorKind::InvalidArgument, "--mode applies to interval objectives only");
  }

  ivopt::KktCertificate cert = [&] {
    if (!a.mu.empty()) {
      const auto dirs = ivopt::default_directions(prob, *p0, opt);
      return ivopt::verify_kkt(prob, *p0, parse_list(a.mu), dirs, opt, mode);
    }
    return ivopt::solve_kkt(prob, *p0, opt, mode);
  }();

  const json cj = ivopt::io::to_json(cert);
  if (!a.certificate.empty()) {
    std::ofstream out(a.certificate);
    if (!out) throw ivopt::Error(ivopt::ErrorKind::ConfigError, "cannot write " + a.certificate);
    out << cj.dump(2) << "\n";
  }
  if (a.json) {
    std::cout << cj.dump(2) << "\n";
  } else {
    std::cout << ivopt::to_string(cert.verdict) << "\n";
    std::cout << "  problem: " << prob.name << " (" << ivopt::to_string(prob.label()) << "), conditions "
              << cert.condition << "\n";
    std::cout << "  candidate: " << point_text(cert.candidate) << ", value " << ivopt::format_cw(cert.value, 9)
              << "\n";
    std::cout << "  active set: {";
    for (std::size_t k = 0; k < cert.active_set.size(); ++k) std::cout << (k ? "," : "") << cert.active_set[k] + 1;
    std::cout << "}, mu = (";
    for (std::size_t k = 0; k < cert.multipliers.size(); ++k) std::cout << (k ? "," : "") << cert.multipliers[k];
    std::cout << ")\n";
    std::cout << "  directions: " << cert.directions.size() << ", seed " << cert.seed << ", sample basis "
              << cert.sample_basis << "\n";
    for (const auto& h : cert.hypotheses) {
      std::cout << "  [" << (h.ok ? "ok" : (h.required ? "FAIL" : "fallback")) << "] " << h.name << ": " << h.detail
                << "\n";
    }
    for (const auto& r : cert.reasons) std::cout << "  note: " << r << "\n";
  }
  return cert.verdict == ivopt::KktVerdict::Inconclusive ? kExitNegative : kExitOk;
}

// ---------------------------------------------------------------------------

struct ReproArgs {
  std::string example;
  bool all = false;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

int run_repro(const ReproArgs& a) {
  const std::uint64_t seed = a.seed.value_or(ivopt::kDefaultSeed);
  std::vector<std::string> ids;
  if (a.all) ids = ivopt::repro::example_ids();
  else ids.push_back(a.example);

  bool ok = true;
  json reports = json::array();
  for (const auto& id : ids) {
    const auto r = ivopt::repro::run_example(id, seed);
    ok = ok && r.passed();
    if (a.json) {
      reports.push_back(ivopt::repro::to_json(r));
      continue;
    }
    std::cout << "example " << r.id << ": " << r.title << " [" << (r.passed() ? "pass" : "MISMATCH") << "]\n";
    for (const auto& c : r.checks) {
      std::cout << "  " << (c.pass ? "ok  " : "DIFF") << "  " << c.name << ": expected " << c.expected
                << ", computed " << c.computed;
      if (c.tol) std::cout << " (tol " << *c.tol << ")";
      std::cout << "\n";
      if (!c.note.empty()) std::cout << "        " << (c.disputed ? "disputed: " : "") << c.note << "\n";
    }
  }
  if (a.json) {
    std::cout << json{{"seed", seed}, {"status", ok ? "pass" : "mismatch"}, {"examples", reports}}.dump(2) << "\n";
  }
  return ok ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interval-valued optimization on Riemannian manifolds: orders, convexity and KKT checks"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> env_seed;
  if (const char* s = std::getenv("IVOPT_SEED"); s != nullptr && *s != '\0') {
    try {
      env_seed = std::stoull(s);
    } catch (const std::exception&) {
      std::cerr << "error: IVOPT_SEED must be a nonnegative integer\n";
      return kExitError;
    }
  }

  OrderArgs order;
  auto* cmd_order = app.add_subcommand("order", "Compare two intervals, written [lb,ub] or <c,w>");
  cmd_order->add_option("T1", order.t1, "first interval")->required();
  cmd_order->add_option("T2", order.t2, "second interval")->required();
  cmd_order->add_option("--relation", order.relation, "min (center-halfwidth), max, or lu (endpoints)")
      ->check(CLI::IsMember({"min", "max", "lu"}))
      ->capture_default_str();
  cmd_order->add_option("--eps", order.eps, "tie tolerance (default 1e-9 * max(1,|c1|,|c2|); 0 = exact)");

  ConvexityArgs conv;
  auto* cmd_conv = app.add_subcommand("check-convexity", "Sample-based geodesic convexity check");
  cmd_conv->add_option("--problem", conv.problem, "problem file (JSON)")->required();
  cmd_conv->add_option("--at", conv.at, "check convexity at this point only (JSON point)");
  cmd_conv->add_option("--function", conv.function, "objective, or gN for constraint N")->capture_default_str();
  cmd_conv->add_option("--pairs", conv.pairs, "sample pairs or targets (default 64)");
  cmd_conv->add_option("--grid", conv.grid, "points on the s-grid, endpoints included (default 33)");
  cmd_conv->add_option("--seed", conv.seed, "random seed (default IVOPT_SEED or 42)");
  cmd_conv->add_flag("--strict", conv.strict, "require strict inequality (margin 1e-10)");
  cmd_conv->add_flag("--cw", conv.cw, "check center and halfwidth separately");
  cmd_conv->add_flag("--chord", conv.chord, "use Euclidean chords instead of geodesics");
  cmd_conv->add_flag("--json", conv.json, "print a JSON report");

  KktArgs kkt;
  auto* cmd_kkt = app.add_subcommand("check-kkt", "Verify KKT-type sufficient optimality conditions");
  cmd_kkt->add_option("--problem", kkt.problem, "problem file (JSON)")->required();
  cmd_kkt->add_option("--point", kkt.point, "candidate point (JSON); defaults to the file's candidate");
  auto* mu_opt = cmd_kkt->add_option("--mu", kkt.mu, "multipliers a,b,c (one per constraint)");
  auto* find_opt = cmd_kkt->add_flag("--find-mu", kkt.find_mu, "search for multipliers (default)");
  mu_opt->excludes(find_opt);
  cmd_kkt->add_option("--directions", kkt.directions, "sampled tangent directions (default 64)");
  cmd_kkt->add_option("--seed", kkt.seed, "random seed (default IVOPT_SEED or 42)");
  cmd_kkt->add_option("--tol", kkt.tol, "stationarity tolerance (default 1e-9, relative)");
  cmd_kkt->add_option("--mode", kkt.mode, "center-nonconstant or center-constant (interval objectives)")
      ->check(CLI::IsMember({"center-nonconstant", "center-constant"}));
  cmd_kkt->add_option("--source", kkt.source, "draw directions toward feasible points or any domain point")
      ->check(CLI::IsMember({"feasible", "domain"}));
  cmd_kkt->add_option("--deriv-h0", kkt.deriv_h0, "initial derivative step (default 1e-2)");
  cmd_kkt->add_option("--deriv-levels", kkt.deriv_levels, "derivative ladder length (default 6)");
  cmd_kkt->add_option("--deriv-tol", kkt.deriv_tol, "derivative convergence tolerance (default 1e-6)");
  cmd_kkt->add_option("--certificate", kkt.certificate, "also write the JSON certificate to this file");
  cmd_kkt->add_flag("--json", kkt.json, "print the JSON certificate instead of the summary");

  ReproArgs rep;
  auto* cmd_repro = app.add_subcommand("repro", "Reproduce the registered worked examples");
  auto* ex_opt = cmd_repro->add_option("--example", rep.example, "3.1, 3.2, 4.1, Pstar or Pstarstar");
  auto* all_opt = cmd_repro->add_flag("--all", rep.all, "run every example");
  ex_opt->excludes(all_opt);
  cmd_repro->add_option("--seed", rep.seed, "random seed (default IVOPT_SEED or 42)");
  cmd_repro->add_flag("--json", rep.json, "print JSON reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (cmd_order->parsed()) return run_order(order);
    if (cmd_conv->parsed()) {
      if (!conv.seed) conv.seed = env_seed;
      return run_check_convexity(conv);
    }
    if (cmd_kkt->parsed()) {
      if (!kkt.seed) kkt.seed = env_seed;
      return run_check_kkt(kkt);
    }
    if (cmd_repro->parsed()) {
      if (!rep.all && rep.example.empty()) {
        std::cerr << "error: repro needs --example ID or --all\n";
        return kExitError;
      }
      if (!rep.seed) rep.seed = env_seed;
      return run_repro(rep);
    }
  } catch (const ivopt::SyntaxError& e) {
    std::cerr << "error: " << ivopt::to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitError;
  } catch (const ivopt::Error& e) {
    std::cerr << "error: " << ivopt::to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
