#pragma once

#include "mmsched/channels.hpp"
#include "mmsched/mdp_core.hpp"
#include "mmsched/policies.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace mmsched {

enum class ArrivalKind { bernoulli, poisson };

enum class Verdict { stable, unstable, inconclusive };

const char* verdict_name(Verdict v);

struct SimConfig {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  ArrivalKind arrival_kind = ArrivalKind::bernoulli;
  ChannelModel channel = ChannelModel::gilbert_elliott(0.25);
  PolicyConfig policy = FbdcConfig{};
  long horizon = 100'000;
  long warmup = 10'000;
  std::uint64_t seed = 1;
  /// Infinite backlog at both queues; only fixed corner/table policies allowed.
  bool saturated = false;
  /// Emit a trace row every this many slots; 0 disables tracing.
  long trace_every = 0;
};

/// Throws std::invalid_argument describing the first bad field.
void validate(const SimConfig& config);

struct Metrics {
  /// Time average of Q1(t) + Q2(t) over post-warmup slots.
  double q_avg = 0.0;
  /// Running average of Q1 + Q2 sampled about 100 times across the measured window.
  std::vector<double> q_avg_series;
  /// Departures over the whole run.
  long d1 = 0;
  long d2 = 0;
  /// Departures per post-warmup slot.
  double rate1 = 0.0;
  double rate2 = 0.0;
  long switch_count = 0;
  long arrivals1 = 0;
  long arrivals2 = 0;
  long final_q1 = 0;
  long final_q2 = 0;
  /// Mean total queue in four equal post-warmup windows.
  std::array<double, 4> window_means{};
  Verdict verdict = Verdict::inconclusive;
  bool unstable_flag = false;
};

/**
 * Runs the slot-by-slot model for config.horizon slots. Within slot t:
 * the policy sees (m, C(t), queues); a stay at an ON channel with a
 * nonempty (or saturated) queue serves one packet; a switch moves the server
 * and serves nothing; arrivals are then added; finally the channels step.
 * If `trace` is non-null and trace_every > 0, CSV rows
 * `slot,m,c1,c2,q1,q2,action,departed1,departed2` are written to it.
 */
Metrics run(const SimConfig& config, std::ostream* trace = nullptr);

/// Empirical saturated departure rates of a fixed table, server starting at queue 1.
RatePair saturated_rate(const DeterministicPolicy& table, double epsilon, long horizon,
                        std::uint64_t seed);

/// Classifies the trend of the four window means.
Verdict classify_windows(const std::array<double, 4>& window_means);

/// run() followed by classify_windows(); the measured window must span at
/// least 4000 slots and the system must not be saturated.
Verdict stability_probe(const SimConfig& config);

/// Bernoulli(lambda) or Poisson(lambda) packet count.
long sample_arrivals(ArrivalKind kind, double lambda, Rng& rng);

/// Independent 64-bit seed derived from a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace mmsched
