#include "mmsched/experiments.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace mmsched;

namespace {

GridSpec small_grid(double eps, double step) {
  GridSpec g;
  g.channel = ChannelModel::gilbert_elliott(eps);
  g.step = step;
  g.horizon = 20'000;
  g.warmup = 2'000;
  return g;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Grid, InteriorAndExteriorPoints) {
  const GridSpec g = small_grid(0.25, 0.05);
  const auto grid = build_grid(g);
  const auto region = closed_form_region(0.25);
  int interior = 0;
  int exterior = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = grid[i];
    EXPECT_EQ(p.interior, contains(region, p.lambda, 0.0));
    (p.interior ? interior : exterior)++;
    if (i > 0) {
      const auto& q = grid[i - 1];
      EXPECT_TRUE(q.lambda.r1 < p.lambda.r1 || (q.lambda.r1 == p.lambda.r1 && q.lambda.r2 < p.lambda.r2));
    }
  }
  EXPECT_GT(interior, 20);
  EXPECT_GT(exterior, 5);
  // Every lattice point whose upper neighbour is outside has its exterior probe.
  std::set<std::pair<long, long>> keys;
  for (const auto& p : grid) keys.insert({std::lround(p.lambda.r1 * 1e6), std::lround(p.lambda.r2 * 1e6)});
  for (const auto& p : grid) {
    if (!p.interior) continue;
    const RatePair up{p.lambda.r1, p.lambda.r2 + 0.05};
    if (!contains(region, up, 0.0)) {
      EXPECT_TRUE(keys.count({std::lround((p.lambda.r1 + 0.05) * 1e6), std::lround((p.lambda.r2 + 0.05) * 1e6)}));
    }
  }
}

TEST(Grid, NearBoundaryFlag) {
  const auto grid = build_grid(small_grid(0.25, 0.02));
  for (const auto& p : grid) {
    if (p.interior && !p.near_boundary) {
      EXPECT_TRUE(contains(closed_form_region(0.25), p.lambda, 0.02 / std::sqrt(2.0) - 1e-12));
    }
  }
}

TEST(Sweep, EmptyGridGivesHeaderOnly) {
  std::ostringstream out;
  const GridSpec g = small_grid(0.25, 0.05);
  write_sweep_csv(out, g.channel, sweep(g, {}));
  EXPECT_EQ(out.str(), "epsilon,lambda1,lambda2,policy,T,k,q_avg,rate1,rate2,stable\n");
}

TEST(Sweep, RowsOrderedAndThreadIndependent) {
  GridSpec g = small_grid(0.4, 0.1);
  g.policies = {FbdcConfig{10}, MyopicConfig{1, 10, true}};
  std::ostringstream a;
  std::ostringstream b;
  const auto rows = sweep(g);
  write_sweep_csv(a, g.channel, rows);
  g.threads = 3;
  write_sweep_csv(b, g.channel, sweep(g));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(count_lines(a.str()), 1 + static_cast<int>(rows.size()));
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[0].policy, "fbdc");
  EXPECT_EQ(rows[1].policy, "myopic");
  EXPECT_EQ(rows[0].point.lambda.r1, rows[1].point.lambda.r1);
}

TEST(Sweep, ClassificationAgreement) {
  GridSpec g = small_grid(0.4, 0.05);
  g.policies = {FbdcConfig{10}};
  g.horizon = 60'000;
  g.warmup = 6'000;
  const auto a = classification_agreement(sweep(g));
  EXPECT_GT(a.compared, 10);
  EXPECT_GE(a.fraction(), 0.95);
}

TEST(ExportRegions, SectionsAndCorners) {
  std::ostringstream out;
  export_regions(out, ChannelModel::gilbert_elliott(0.25));
  const std::string s = out.str();
  EXPECT_NE(s.find("region,closed_form\n"), std::string::npos);
  EXPECT_NE(s.find("region,iid\n"), std::string::npos);
  EXPECT_NE(s.find("region,no_switchover\n"), std::string::npos);
  int corners = 0;
  for (const char* b : {"\nb0,", "\nb1,", "\nb2,", "\nb3,", "\nb4,", "\nb5,"}) corners += s.find(b) != std::string::npos;
  EXPECT_EQ(corners, 6);
  std::ostringstream iid;
  export_regions(iid, ChannelModel::iid(0.3, 0.6));
  EXPECT_EQ(iid.str().find("closed_form"), std::string::npos);
}

TEST(Psi, SplitEpsilonIsTheRoot) {
  const double e = psi_split_epsilon();
  EXPECT_NEAR((2 - e) / (1 - e), (1 - e) * (1 - e) / e, 1e-12);
  EXPECT_NEAR(e, 0.245122, 1e-6);
}

TEST(Psi, IdenticalCornersGiveOne) {
  for (int i = 0; i < 6; ++i) {
    const auto id = static_cast<CornerId>(i);
    if (id == CornerId::b1 || id == CornerId::b4) continue;
    EXPECT_DOUBLE_EQ(psi_prime(0.35, 1.7, id, id), 1.0);
  }
}

TEST(Psi, ReportStructure) {
  const auto r = verify_psi(1e-2, 60);
  EXPECT_TRUE(r.tiling_ok);
  EXPECT_EQ(r.agreement_deviation, 0.0);
  ASSERT_EQ(r.regions.size(), 12u);
  for (std::size_t i = 0; i < r.regions.size(); i += 2) {
    EXPECT_EQ(r.regions[i].map_mismatches, 0);
    EXPECT_NEAR(r.regions[i].minimum, r.regions[i + 1].minimum, 1e-9);
    EXPECT_LE(r.regions[i].minimum, 1.0);
    EXPECT_GT(r.regions[i].minimum, 0.85);
  }
}

TEST(Psi, CaseOneOneRegionOneClosedForm) {
  // On that region psi' = 1 - e^2 / 2 at the lower ratio end, so the infimum
  // sits at the largest e of the case.
  const auto r = verify_psi();
  const double et = psi_split_epsilon();
  EXPECT_NEAR(r.regions[0].minimum, 1.0 - et * et / 2.0, 1e-9);
  // The case-2 region bottoms out at sqrt(2) - 1/2, at the critical epsilon.
  EXPECT_NEAR(r.regions[10].minimum, std::sqrt(2.0) - 0.5, 1e-9);
}

TEST(Psi, MinimaAgreeWithBruteForce) {
  const auto r = verify_psi();
  for (const auto& reg : r.regions) {
    // Independent scan through the corner maps only.
    double best = 2.0;
    for (double e = std::max(1e-3, reg.epsilon_lo); e <= reg.epsilon_hi; e += 1e-3) {
      if (e <= reg.epsilon_lo) continue;
      for (double lr = -4.0; lr <= 4.0; lr += 5e-3) {
        const double ratio = std::pow(10.0, lr);
        if (myopic_corner_map(e, 1.0, ratio) != reg.myopic_corner || best_corner(e, 1.0, ratio) != reg.fbdc_corner) {
          continue;
        }
        best = std::min(best, psi_prime(e, ratio, reg.myopic_corner, reg.fbdc_corner));
      }
    }
    EXPECT_LE(reg.minimum, best + 1e-12) << reg.name;
    EXPECT_NEAR(reg.minimum, best, 3e-3) << reg.name;
  }
}

TEST(Gap, MatchesExactExpectation) {
  // Restart law: server uniform, channels stationary; the frame average of the
  // expected reward from that law is the exact expected empirical rate.
  const double eps = 0.25;
  const int code = 0b1100'1011;
  oracle::Vector start{};
  for (int s = 0; s < 8; ++s) start[s] = 1.0 / 8.0;
  const long n = 400'000;
  for (int T : {1, 5, 25}) {
    const auto ref = oracle::expected_rates(eps, code, T, start);
    const auto rows = throughput_gap(eps, {T}, CornerId::b2, n, 9);
    EXPECT_NEAR(rows[0].empirical.r1 + rows[0].empirical.r2, ref.r1 + ref.r2, 0.004) << T;
  }
}

TEST(Gap, DeficitShrinksWithFrameLength) {
  const auto rows = throughput_gap(0.25, {10, 1000, 1'000'000}, CornerId::b2, 1'000'000, 4);
  EXPECT_LT(rows[1].deficit, rows[0].deficit);
  EXPECT_LT(std::abs(rows[2].deficit), 0.003);
  for (const auto& r : throughput_gap(0.5, {2, 5, 25}, CornerId::b2, 1'000'000, 4)) {
    EXPECT_LT(std::abs(r.deficit), 0.003);
  }
}

TEST(IidSuite, GatedVerdicts) {
  const auto rows = iid_suite(0.5, 0.5, {0.8, 1.2}, 100'000, 1);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.lambda.r1 / 0.5 + r.lambda.r2 / 0.5, r.rho, 1e-12);
    EXPECT_EQ(r.metrics.verdict, r.rho < 1 ? Verdict::stable : Verdict::unstable) << r.policy << " " << r.rho;
  }
}

TEST(SaturatedCheck, CsvAndBias) {
  std::vector<DeterministicPolicy> tables = {DeterministicPolicy::from_code(223), DeterministicPolicy::from_code(203)};
  const auto rows = saturated_check(0.1, tables, 100'000, 1);
  // 223 abandons queue 1 after a short transient; only the exact finite-horizon law covers it.
  EXPECT_NEAR(rows[0].analytic.r1, 0.0, 1e-12);
  EXPECT_GT(rows[0].finite.mean.r1, 0.0);
  std::ostringstream out;
  write_saturated_csv(out, 0.1, rows);
  EXPECT_EQ(count_lines(out.str()), 3);
}
