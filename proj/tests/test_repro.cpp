#include <string>

#include <gtest/gtest.h>

#include "ivopt/repro.hpp"

namespace {

using namespace ivopt;

class Example : public ::testing::TestWithParam<std::string> {};

TEST_P(Example, Passes) {
  const auto r = repro::run_example(GetParam());
  EXPECT_EQ(r.id, GetParam());
  EXPECT_FALSE(r.title.empty());
  ASSERT_FALSE(r.checks.empty());
  for (const auto& c : r.checks) {
    EXPECT_TRUE(c.pass) << c.name << ": expected " << c.expected << ", computed " << c.computed;
    if (c.disputed) {
      EXPECT_FALSE(c.note.empty()) << c.name;
    }
  }
  EXPECT_TRUE(r.passed());
}

TEST_P(Example, SameSeedSameReport) {
  auto a = repro::to_json(repro::run_example(GetParam(), 42));
  auto b = repro::to_json(repro::run_example(GetParam(), 42));
  a.erase("wall_time_ms");
  b.erase("wall_time_ms");
  EXPECT_EQ(a, b);
}

INSTANTIATE_TEST_SUITE_P(All, Example, ::testing::ValuesIn(repro::example_ids()),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (char& ch : s) {
                             if (ch == '.') ch = '_';
                           }
                           return "Ex" + s;
                         });

TEST(Repro, UnknownIdThrows) { EXPECT_THROW(repro::run_example("9.9"), Error); }

TEST(Repro, ChordCounterexampleValue) {
  const auto r = repro::run_example("3.1");
  bool seen = false;
  for (const auto& c : r.checks) {
    if (c.name == "f(chord midpoint).center") {
      EXPECT_NEAR(std::stod(c.computed), 0.811, 1e-3);
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

TEST(Repro, JsonShape) {
  const auto j = repro::to_json(repro::run_example("Pstar"));
  EXPECT_EQ(j["status"], "pass");
  for (const auto& c : j["checks"]) {
    for (const char* key : {"name", "expected", "computed", "tol", "pass", "disputed", "note"}) {
      EXPECT_TRUE(c.contains(key)) << key;
    }
  }
}

}  // namespace
