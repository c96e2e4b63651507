// Two-rider scenario matrix: shared / on-route / off-route origins crossed
// with shared / on-route / off-route destinations.

#include <gtest/gtest.h>

#include "dlcss/core.hpp"
#include "fixtures.hpp"
#include "reference_dlcss.hpp"

namespace {

using namespace dlcss::testing;

dlcss::Similarity score(const ScenarioFixture& f) {
  return dlcss::compute_dlcss(f.vehicle, f.request).sm;
}

TEST(Scenarios, NineNamedFixturesExist) {
  const auto fixtures = scenario_fixtures();
  ASSERT_EQ(fixtures.size(), 9u);
  std::vector<std::string> names;
  for (const auto& f : fixtures) names.push_back(f.name);
  EXPECT_EQ(names, (std::vector<std::string>{"[1,1]", "[1,2]", "[1,3]", "[2,1]", "[2,2]",
                                              "[2,3]", "[3,1]", "[3,2]", "[3,3]"}));
}

TEST(Scenarios, SharedRouteScoresTheMinimum) {
  const auto fixtures = scenario_fixtures();
  const auto base = score(fixtures[0]);
  EXPECT_EQ(base, dlcss::Similarity::meters(0.0));
  for (const auto& f : fixtures) EXPECT_LE(base, score(f)) << f.name;
}

TEST(Scenarios, SubRouteIsFiniteAndBelowDisjointControl) {
  const auto fixtures = scenario_fixtures();
  const auto sub = score(fixtures[4]);
  const auto control = score(disjoint_control());
  ASSERT_TRUE(sub.is_finite());
  EXPECT_LT(sub, control);
  EXPECT_GT(control.value(), 50 * dlcss::kDefaultThresholdM);
}

TEST(Scenarios, OffRouteEndpointsAddTheirAccessDistance) {
  // Meeting and separation points contribute one segment each; every
  // on-route request point lies exactly on the corridor.
  for (const auto& f : scenario_fixtures()) {
    const auto res = dlcss::compute_dlcss(f.vehicle, f.request);
    const auto ref = reference_dlcss(f.vehicle, f.request);
    ASSERT_FALSE(ref.no_overlap) << f.name;
    EXPECT_NEAR(res.sm.value(), ref.sm, 1e-9) << f.name;
    const bool off_route = f.name[1] == '3' || f.name[3] == '3';
    if (off_route) {
      EXPECT_GT(res.sum_segments_m, 0.0) << f.name;
    } else {
      EXPECT_EQ(res.sum_segments_m, 0.0) << f.name;
    }
  }
}

}  // namespace
