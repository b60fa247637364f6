#pragma once

#include "mmsched/channels.hpp"
#include "mmsched/policies.hpp"
#include "mmsched/simulator.hpp"
#include "mmsched/stability_region.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mmsched {

struct GridSpec {
  ChannelModel channel = ChannelModel::gilbert_elliott(0.25);
  double step = 0.01;
  /// Offset of the exterior probe placed beyond each boundary grid point.
  double boundary_margin = 0.02;
  std::vector<PolicyConfig> policies{FbdcConfig{}};
  ArrivalKind arrival_kind = ArrivalKind::bernoulli;
  long horizon = 100'000;
  long warmup = 10'000;
  std::uint64_t seed = 1;
  /// Worker threads for the sweep; output order does not depend on it.
  int threads = 1;
};

void validate(const GridSpec& spec);

/// Rate region the grid is laid over: closed form for Gilbert-Elliott, the
/// i.i.d. region otherwise.
RateRegion grid_region(const ChannelModel& channel);

struct GridPoint {
  RatePair lambda;
  bool interior = false;
  /// Within one grid step of an outer boundary line of the region.
  bool near_boundary = false;
  /// Per-point seed shared by every policy (common random numbers).
  std::uint64_t seed = 0;
};

/**
 * Lattice points of the region at spacing `step`, plus one exterior point
 * lambda + (d, d), d = max(boundary_margin, step), for every lattice point whose
 * right or upper neighbour falls outside. Sorted by (lambda1, lambda2).
 */
std::vector<GridPoint> build_grid(const GridSpec& spec);

struct SweepRow {
  GridPoint point;
  std::string policy;
  int frame_length = 0;
  int lookahead = 0;
  Metrics metrics;
};

/// One simulation per (grid point, policy), rows ordered by (lambda1, lambda2, policy).
std::vector<SweepRow> sweep(const GridSpec& spec);
std::vector<SweepRow> sweep(const GridSpec& spec, const std::vector<GridPoint>& grid);

/// Header `epsilon,lambda1,lambda2,policy,T,k,q_avg,rate1,rate2,stable`.
void write_sweep_csv(std::ostream& out, const ChannelModel& channel, const std::vector<SweepRow>& rows);

struct SweepAgreement {
  int compared = 0;
  int agreeing = 0;
  int inconclusive = 0;
  double fraction() const { return compared == 0 ? 1.0 : static_cast<double>(agreeing) / compared; }
};

/// Verdict vs region membership over rows that are not near the boundary.
SweepAgreement classification_agreement(const std::vector<SweepRow>& rows);

/// Region sections: closed form, i.i.d. and no-switchover for p = (1/2, 1/2)
/// under Gilbert-Elliott channels; i.i.d. and no-switchover for (p1, p2) otherwise.
void export_regions(std::ostream& out, const ChannelModel& channel);

/// Root of (2 - e)/(1 - e) = (1 - e)^2 / e, where the discrepant regions of the
/// six-corner case change shape.
double psi_split_epsilon();

/// Myopic over FBDC weighted rate at queue lengths (1, ratio).
double psi_prime(double epsilon, double ratio, CornerId myopic_corner, CornerId fbdc_corner);

struct PsiRegionResult {
  std::string name;
  CornerId myopic_corner = CornerId::b0;
  CornerId fbdc_corner = CornerId::b0;
  double epsilon_lo = 0.0;
  double epsilon_hi = 0.0;
  double minimum = 1.0;
  double argmin_epsilon = 0.0;
  double argmin_ratio = 0.0;
  double bound = 0.0;
  /// Grid points where the two corner maps did not produce this region's corners.
  long map_mismatches = 0;
  bool passes() const { return minimum >= bound - 1e-6; }
};

struct PsiReport {
  std::vector<PsiRegionResult> regions;
  double global_minimum = 1.0;
  double global_bound = 0.9002;
  /// Agreement and discrepant intervals partition (0, inf) at every grid epsilon.
  bool tiling_ok = true;
  /// Largest |psi' - 1| seen where both maps chose the same corner.
  double agreement_deviation = 0.0;
  bool passes() const;
};

PsiReport verify_psi(double epsilon_step = 1e-3, int ratio_points = 400);
void write_psi_csv(std::ostream& out, const PsiReport& report);

struct SaturatedRow {
  DeterministicPolicy policy;
  RatePair analytic;
  RatePair empirical;
  /// Exact mean and standard error of the empirical rates at this horizon.
  RateMoments finite;
  /// |empirical - analytic| <= z * standard error + |finite mean - analytic| in
  /// both coordinates; the second term is the O(1/horizon) start-up bias.
  bool within(double z) const;
};

/// Saturated simulation of each table, seeded per (epsilon, policy code), against policy_rates.
std::vector<SaturatedRow> saturated_check(double epsilon, const std::vector<DeterministicPolicy>& tables,
                                          long horizon, std::uint64_t seed, int threads = 1);
void write_saturated_csv(std::ostream& out, double epsilon, const std::vector<SaturatedRow>& rows);

struct GapRow {
  int frame_length = 0;
  RatePair analytic;
  RatePair empirical;
  /// (r1* + r2*) - (e1 + e2).
  double deficit = 0.0;
};

/**
 * Saturated runs of a corner table where, every T slots, the server position is
 * redrawn uniformly; the channels keep evolving. Every T reuses the same seed.
 */
std::vector<GapRow> throughput_gap(double epsilon, const std::vector<int>& frame_lengths, CornerId corner,
                                   long horizon, std::uint64_t seed);
void write_gap_csv(std::ostream& out, double epsilon, CornerId corner, const std::vector<GapRow>& rows);

struct IidRow {
  double rho = 0.0;
  RatePair lambda;
  std::string policy;
  Metrics metrics;
};

/// Gated and exhaustive service at lambda_i = rho * p_i / 2 for each load rho.
std::vector<IidRow> iid_suite(double p1, double p2, const std::vector<double>& rho_points, long horizon,
                              std::uint64_t seed);
void write_iid_csv(std::ostream& out, double p1, double p2, const std::vector<IidRow>& rows);

}  // namespace mmsched
