#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ivopt/builtins/catalog.hpp"
#include "ivopt/domain.hpp"
#include "ivopt/expr.hpp"
#include "ivopt/function.hpp"

namespace {

using namespace ivopt;
constexpr double kPi = std::numbers::pi;

double eval_const(const std::string& text) { return expr::evaluate_constant(expr::parse(text)); }

double eval_theta(const std::string& text, double theta) {
  return expr::evaluate(expr::parse(text), Manifold::circle(), Point::circle(theta));
}

TEST(Parse, Structure) {
  const auto a = expr::parse("(theta - pi/2)^2");
  const auto* pow = std::get_if<expr::Binary>(&a.root().v);
  ASSERT_NE(pow, nullptr);
  EXPECT_EQ(pow->op, '^');
  const auto* diff = std::get_if<expr::Binary>(&pow->lhs->v);
  ASSERT_NE(diff, nullptr);
  EXPECT_EQ(diff->op, '-');
}

TEST(Parse, UnaryMinusBindsLooserThanPower) {
  const auto a = expr::parse("-theta^2 + 5*pi^2");
  const auto* sum = std::get_if<expr::Binary>(&a.root().v);
  ASSERT_NE(sum, nullptr);
  EXPECT_EQ(sum->op, '+');
  const auto* neg = std::get_if<expr::Negate>(&sum->lhs->v);
  ASSERT_NE(neg, nullptr);
  const auto* sq = std::get_if<expr::Binary>(&neg->operand->v);
  ASSERT_NE(sq, nullptr);
  EXPECT_EQ(sq->op, '^');
  EXPECT_NEAR(eval_theta("-theta^2 + 5*pi^2", 2.0), -4.0 + 5 * kPi * kPi, 1e-12);
}

TEST(Parse, Precedence) {
  EXPECT_DOUBLE_EQ(eval_const("2+3*4"), 14.0);
  EXPECT_DOUBLE_EQ(eval_const("2^3^2"), 512.0);
  EXPECT_DOUBLE_EQ(eval_const("-2^2"), -4.0);
  EXPECT_DOUBLE_EQ(eval_const("(-2)^2"), 4.0);
  EXPECT_DOUBLE_EQ(eval_const("2^-1"), 0.5);
  EXPECT_DOUBLE_EQ(eval_const("8/4/2"), 1.0);
  EXPECT_DOUBLE_EQ(eval_const("1-2-3"), -4.0);
  EXPECT_DOUBLE_EQ(eval_const("--3"), 3.0);
}

TEST(Parse, SyntaxErrorOffsets) {
  struct Case {
    const char* text;
    std::size_t offset;
  };
  for (const Case& c : std::vector<Case>{{"ln(", 3}, {"", 0}, {"1 +", 3}, {"(1", 2}, {"1 2", 2}, {"2*)", 2},
                                         {"ln(1, 2)", 4}, {"3 $ 4", 2}}) {
    try {
      expr::parse(c.text);
      ADD_FAILURE() << "no error for '" << c.text << "'";
    } catch (const SyntaxError& e) {
      EXPECT_EQ(e.offset(), c.offset) << c.text;
      EXPECT_EQ(e.kind(), ErrorKind::SyntaxError);
      EXPECT_FALSE(e.expected().empty());
    }
  }
}

TEST(Parse, UnknownFunction) {
  try {
    expr::parse("tan(theta)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnknownFunction);
  }
}

TEST(Parse, RoundTripCorpus) {
  const std::vector<std::string> corpus = {
      "1", "0.5", "1e-3", "2.5e+10", "pi", "e", "theta", "x1", "logdet", "trace",
      "-theta", "--theta", "theta^2", "-theta^2", "(theta - pi/2)^2", "theta - pi/2",
      "exp(-(theta-pi/2)^2)-1", "-ln(9*pi^2-(theta-pi/2)^2)", "-theta^2 + 5*pi^2", "theta^2",
      "logdet^2", "logdet*logdet", "2^3^2", "2+3*4", "-2^2", "(2+3)*4", "a/b/c", "a-b-c", "a-(b-c)",
      "a^b^c^d", "(a^b)^c", "-a*b", "-(a*b)", "a*-b", "a^-b", "sin(cos(theta))", "sqrt(abs(x1-x2))",
      "exp(ln(2))", "1/(1+exp(-x1))", "x1^2 + x2^2 - 2*x1*x2", "((((x1))))", "abs(-3)",
      "0.1+0.2", "3*pi/4", "e^theta", "theta*theta*theta", "1-(theta-pi/2)^2/pi^2", "  x1  +  x2 ",
      "sqrt(2)/2", "ln(1+trace)"};
  ASSERT_EQ(corpus.size(), 50u);
  for (const auto& text : corpus) {
    const auto a = expr::parse(text);
    const std::string printed = expr::to_string(a);
    const auto b = expr::parse(printed);
    EXPECT_TRUE(expr::structurally_equal(a, b)) << text << " -> " << printed;
    EXPECT_EQ(expr::to_string(b), printed);
  }
}

TEST(Eval, Examples) {
  EXPECT_DOUBLE_EQ(eval_theta("(theta - pi/2)^2", kPi / 2), 0.0);
  EXPECT_DOUBLE_EQ(eval_theta("exp(-(theta-pi/2)^2)-1", kPi / 2), 0.0);
  const Point two = Point::spd(2.0 * Eigen::MatrixXd::Identity(2, 2));
  EXPECT_NEAR(expr::evaluate(expr::parse("logdet"), Manifold::spd(2), two), std::log(4.0), 1e-12);
  EXPECT_NEAR(expr::evaluate(expr::parse("trace"), Manifold::spd(2), two), 4.0, 1e-12);
}

TEST(Eval, Errors) {
  const auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  EXPECT_EQ(kind_of([] { eval_const("ln(0)"); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { eval_const("sqrt(-1)"); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { eval_const("(-8)^(1/3)"); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { eval_const("1/0"); }), ErrorKind::NonFinite);
  EXPECT_EQ(kind_of([] { eval_const("exp(1000)"); }), ErrorKind::NonFinite);
  EXPECT_EQ(kind_of([] { eval_const("theta"); }), ErrorKind::UnknownFeature);
  EXPECT_EQ(kind_of([] { RealFn::parse("logdet", Manifold::circle()); }), ErrorKind::UnknownFeature);
  EXPECT_EQ(kind_of([] { RealFn::parse("x3", Manifold::euclidean(2)); }), ErrorKind::UnknownFeature);
}

TEST(Features, PerManifold) {
  EXPECT_EQ(expr::feature_names(Manifold::circle()), std::vector<std::string>{"theta"});
  EXPECT_EQ(expr::feature_names(Manifold::euclidean(2)), (std::vector<std::string>{"x1", "x2"}));
  EXPECT_EQ(expr::feature_names(Manifold::spd(3)), (std::vector<std::string>{"logdet", "trace"}));
}

TEST(Function, BoundExpressionRejectsOtherManifold) {
  const RealFn f = RealFn::parse("theta", Manifold::circle());
  try {
    f(Point::spd(Eigen::MatrixXd::Identity(2, 2)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BaseMismatch);
  }
}

TEST(Function, IntervalValues) {
  const IvFn f = IvFn::parse("logdet", "logdet^2", Manifold::spd(2));
  const Interval at_mid = f(Point::spd(1.5 * Eigen::MatrixXd::Identity(2, 2)));
  EXPECT_NEAR(at_mid.center(), 0.811, 1e-3);
  EXPECT_NEAR(at_mid.halfwidth(), 0.658, 1e-3);
  const Interval at_i = f(Point::spd(Eigen::MatrixXd::Identity(2, 2)));
  EXPECT_DOUBLE_EQ(at_i.center(), 0.0);
  EXPECT_DOUBLE_EQ(at_i.halfwidth(), 0.0);

  const Interval rays_f = builtins::rays::f()(builtins::rays_candidate());
  EXPECT_DOUBLE_EQ(rays_f.center(), 0.0);
  EXPECT_DOUBLE_EQ(rays_f.halfwidth(), 1.0);
}

TEST(Function, WidthNonnegativity) {
  const IvFn ok = IvFn::parse("theta^2", "-theta^2 + 5*pi^2", Manifold::circle());
  EXPECT_NO_THROW(validate_width(ok, domains::circle_arc().sample(500, 5)));

  const IvFn bad = IvFn::parse("theta", "theta - 1", Manifold::circle());
  try {
    validate_width(bad, domains::circle_arc().sample(500, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativeWidth);
  }

  const IvFn tiny = IvFn::parse("0", "-1e-13", Manifold::circle());
  EXPECT_EQ(tiny(Point::circle(1)).halfwidth(), 0.0);
}

TEST(Function, NonnegativeCombination) {
  const Manifold m = Manifold::circle();
  const IvFn f = IvFn::parse("theta", "1", m);
  const IvFn g = IvFn::parse("theta^2", "theta", m);
  const IvFn h = nonneg_combination(2, f, 3, g);
  const Interval v = h(Point::circle(2));
  EXPECT_DOUBLE_EQ(v.center(), 2 * 2 + 3 * 4);
  EXPECT_DOUBLE_EQ(v.halfwidth(), 2 * 1 + 3 * 2);
  EXPECT_THROW(nonneg_combination(-1, f, 1, g), Error);
}

}  // namespace
