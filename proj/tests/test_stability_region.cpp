#include "mmsched/stability_region.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace mmsched;

namespace {

std::vector<RatePair> oracle_rates(double eps) {
  std::vector<RatePair> out;
  for (int code = 0; code < kNumPolicies; ++code) {
    const auto r = oracle::rates(eps, code);
    out.push_back({r.r1, r.r2});
  }
  return out;
}

double max_violation(const std::vector<oracle::Inequality>& ineqs, RatePair p) {
  double worst = 0.0;
  for (const auto& h : ineqs) worst = std::max(worst, h.a1 * p.r1 + h.a2 * p.r2 - h.b);
  return worst;
}

}  // namespace

TEST(CriticalEpsilon, Value) { EXPECT_NEAR(critical_epsilon(), 0.2928932188134524756, 1e-15); }

TEST(Corners, PublishedValuesAtQuarter) {
  EXPECT_EQ(corner_rate(0.25, CornerId::b1).r1, 0.140625);
  EXPECT_EQ(corner_rate(0.25, CornerId::b1).r2, 0.4375);
  EXPECT_NEAR(corner_rate(0.25, CornerId::b2).r1, 1.875 / 7, 1e-16);
  EXPECT_NEAR(corner_rate(0.25, CornerId::b2).r2, 2.5 / 7, 1e-16);
  EXPECT_EQ(corner_rate(0.25, CornerId::b0).r2, 0.5);
  EXPECT_EQ(corner_rate(0.25, CornerId::b0).r1, 0.0);
}

TEST(Corners, MirrorAndCount) {
  for (double eps : {0.05, 0.2, 0.29, 0.3, 0.45, 0.5}) {
    const auto pts = corner_points(eps);
    EXPECT_EQ(pts.size(), eps < critical_epsilon() ? 6u : 4u);
    for (const auto& [id, r] : pts) {
      const auto m = corner_rate(eps, mirror(id));
      EXPECT_EQ(r.r1, m.r2);
      EXPECT_EQ(r.r2, m.r1);
    }
  }
  EXPECT_EQ(corner_points(critical_epsilon() - 1e-7).size(), 6u);
  EXPECT_EQ(corner_points(critical_epsilon() + 1e-7).size(), 4u);
  EXPECT_THROW(corner_rate(0.4, CornerId::b1), std::invalid_argument);
}

TEST(Corners, AreAchievedBySomePolicy) {
  for (double eps : {0.1, 0.25, 0.35}) {
    const auto rates = oracle_rates(eps);
    for (const auto& [id, r] : corner_points(eps)) {
      bool found = false;
      for (const auto& q : rates) found = found || (std::abs(q.r1 - r.r1) < 1e-9 && std::abs(q.r2 - r.r2) < 1e-9);
      EXPECT_TRUE(found) << corner_name(id) << " at " << eps;
    }
  }
}

TEST(ClosedForm, EqualsHullOfOracleRates) {
  for (double eps : {0.05, 0.1, 0.2, 0.25, 0.29, 0.3, 0.4, 0.45, 0.5}) {
    const auto ineqs = oracle::closed_form(eps);
    const auto region = closed_form_region(eps);
    for (const auto& v : region.polygon()) EXPECT_LT(max_violation(ineqs, v), 1e-12);
    std::vector<oracle::Point> pts;
    for (const auto& r : oracle_rates(eps)) pts.push_back({r.r1, r.r2});
    const auto hull = oracle::hull(pts, 1e-12);
    for (const auto& p : hull) EXPECT_TRUE(contains(region, {p.x, p.y}, 0.0)) << eps;
    const auto lib_hull = region_from_vertices(oracle_rates(eps));
    EXPECT_LT(hausdorff_distance(lib_hull, region), 1e-9) << eps;
  }
}

TEST(ClosedForm, CornersAreLabelled) {
  const auto r = closed_form_region(0.25);
  ASSERT_EQ(r.corners().size(), 6u);
  const char* expected[] = {"b5", "b4", "b3", "b2", "b1", "b0"};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(r.corners()[i].label, expected[i]);
  EXPECT_EQ(r.halfspaces().size(), 7u);  // five frontier lines and both axes
}

TEST(ClosedForm, ShrinksWithCorrelationLoss) {
  // More channel memory helps: a region at smaller eps contains the one at larger eps.
  const auto big = closed_form_region(0.1);
  for (double eps : {0.2, 0.3, 0.45}) {
    const auto small = closed_form_region(eps);
    for (const auto& v : small.polygon()) EXPECT_TRUE(contains(big, v, 0.0));
  }
}

TEST(Contains, BasicCases) {
  const auto r = closed_form_region(0.25);
  EXPECT_TRUE(contains(r, {0.2, 0.3}));
  EXPECT_TRUE(contains(r, {0.0, 0.0}));
  EXPECT_FALSE(contains(r, {0.4, 0.4}));
  EXPECT_FALSE(contains(r, {-0.01, 0.1}));
  EXPECT_TRUE(contains(r, {0.2, 0.3}, 0.01));
  EXPECT_FALSE(contains(r, {0.3, 0.3}, 0.02));
  EXPECT_TRUE(contains(r, corner_rate(0.25, CornerId::b2), 0.0));
}

TEST(IidRegion, Shape) {
  const auto r = iid_region(0.5, 0.5);
  EXPECT_EQ(r.polygon().size(), 3u);
  EXPECT_TRUE(contains(r, {0.25, 0.25}));
  EXPECT_FALSE(contains(r, {0.26, 0.25}));
  EXPECT_THROW(iid_region(0.0, 0.5), std::invalid_argument);
  EXPECT_THROW(iid_region(0.5, 1.1), std::invalid_argument);
}

TEST(NoSwitchoverRegion, Shape) {
  const auto r = no_switchover_region(0.5, 0.5);
  EXPECT_TRUE(contains(r, {0.5, 0.25}));
  EXPECT_TRUE(contains(r, {0.375, 0.375}));
  EXPECT_FALSE(contains(r, {0.4, 0.4}));
  EXPECT_FALSE(contains(r, {0.51, 0.0}));
}

TEST(Limits, HalfEpsilonIsIid) {
  const auto a = closed_form_region(0.5);
  const auto b = iid_region(0.5, 0.5);
  EXPECT_EQ(hausdorff_distance(a, b), 0.0);
}

TEST(Limits, SmallEpsilonApproachesNoSwitchover) {
  EXPECT_LT(hausdorff_distance(closed_form_region(0.05), no_switchover_region(0.5, 0.5)), 0.03);
  EXPECT_LT(hausdorff_distance(closed_form_region(0.45), iid_region(0.5, 0.5)), 0.03);
}

TEST(Hausdorff, Translation) {
  const std::vector<RatePair> a = {{0, 0}, {1, 0}, {0, 1}};
  const std::vector<RatePair> b = {{0.1, 0}, {1.1, 0}, {0.1, 1}};
  EXPECT_NEAR(hausdorff_distance(RateRegion::from_points(a), RateRegion::from_points(b)), 0.1, 1e-12);
}

TEST(FromPoints, RandomHullPropertiesAgainstOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RatePair> pts;
    std::vector<oracle::Point> opts;
    for (int i = 0; i < 30; ++i) {
      pts.push_back({u(rng), u(rng)});
      opts.push_back({pts.back().r1, pts.back().r2});
    }
    const auto region = RateRegion::from_points(pts);
    const auto ref = oracle::hull(opts);
    EXPECT_EQ(region.polygon().size(), ref.size());
    for (const auto& p : pts) {
      for (const auto& h : region.halfspaces()) EXPECT_GE(h.slack(p), -1e-12);
    }
    for (const auto& h : region.halfspaces()) {
      int tight = 0;
      for (const auto& v : region.polygon()) tight += std::abs(h.slack(v)) < 1e-9;
      EXPECT_GE(tight, 2);
    }
  }
}

TEST(FromPoints, Degenerate) {
  const std::vector<RatePair> seg = {{0, 0}, {0.5, 0}, {0.25, 0}};
  EXPECT_EQ(RateRegion::from_points(seg).polygon().size(), 2u);
  const std::vector<RatePair> one = {{0.2, 0.2}, {0.2, 0.2}};
  EXPECT_EQ(RateRegion::from_points(one).polygon().size(), 1u);
}

TEST(CornerMaps, FbdcThresholdsAgreeWithArgmax) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> eps_dist(0.001, 0.5);
  std::uniform_real_distribution<double> log_ratio(-4.0, 4.0);
  int checked = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    const double eps = eps_dist(rng);
    const double ratio = std::pow(10.0, log_ratio(rng));
    bool near = false;
    for (double t : fbdc_corner_thresholds(eps).thresholds) near = near || std::abs(ratio / t - 1.0) < 1e-9;
    if (near) continue;
    ++checked;
    EXPECT_EQ(fbdc_corner_map(eps, 1.0, ratio), best_corner(eps, 1.0, ratio)) << eps << " " << ratio;
  }
  EXPECT_GT(checked, 19000);
}

TEST(CornerMaps, MyopicThresholdValues) {
  const auto m = myopic_corner_thresholds(0.25);
  ASSERT_EQ(m.thresholds.size(), 5u);
  EXPECT_NEAR(m.thresholds[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.thresholds[1], 3.0 / 7.0, 1e-15);
  EXPECT_NEAR(m.thresholds[2], 1.0, 1e-15);
  EXPECT_NEAR(m.thresholds[3], 7.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.thresholds[4], 3.0, 1e-15);
  const auto m2 = myopic_corner_thresholds(0.4);
  ASSERT_EQ(m2.thresholds.size(), 3u);
  EXPECT_EQ(m2.corners.front(), CornerId::b5);
  EXPECT_EQ(m2.corners.back(), CornerId::b0);
}

TEST(CornerMaps, LookupEdges) {
  const auto m = myopic_corner_thresholds(0.25);
  EXPECT_EQ(m.lookup(1.0, 0.0), CornerId::b5);
  EXPECT_EQ(m.lookup(0.0, 1.0), CornerId::b0);
  EXPECT_EQ(m.lookup(1.0, 1.0), CornerId::b3);  // on a threshold: lower interval
  EXPECT_EQ(m.lookup(1.0, 1.0001), CornerId::b2);
  EXPECT_EQ(m.lookup(3.0, 1.0), CornerId::b5);  // ratio 1/3 sits on the first threshold
  EXPECT_EQ(m.lookup(2.5, 1.0), CornerId::b4);
  EXPECT_THROW(m.lookup(0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(m.lookup(-1.0, 1.0), std::invalid_argument);
}

TEST(CornerMaps, MirrorSymmetry) {
  for (double eps : {0.1, 0.27, 0.4}) {
    for (double ratio : {0.05, 0.3, 0.7, 1.3, 2.9, 40.0}) {
      EXPECT_EQ(myopic_corner_map(eps, 1.0, ratio), mirror(myopic_corner_map(eps, ratio, 1.0)));
      EXPECT_EQ(fbdc_corner_map(eps, 1.0, ratio), mirror(fbdc_corner_map(eps, ratio, 1.0)));
    }
  }
}

TEST(CornerNames, RoundTrip) {
  for (int i = 0; i < 6; ++i) {
    const auto id = static_cast<CornerId>(i);
    EXPECT_EQ(parse_corner(corner_name(id)), id);
    EXPECT_EQ(mirror(mirror(id)), id);
  }
  EXPECT_FALSE(parse_corner("b6").has_value());
}

TEST(RegionCsv, Layout) {
  std::ostringstream out;
  write_region_csv(out, "iid", iid_region(0.5, 0.5));
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("region,iid\ncorner_id,r1,r2\n", 0), 0u);
  EXPECT_NE(s.find("\na1,a2,b\n"), std::string::npos);
  EXPECT_EQ(s.find(';'), std::string::npos);
}
