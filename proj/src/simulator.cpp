#include "mmsched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace mmsched {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

void validate(const SimConfig& config) {
  if (!(config.lambda1 >= 0.0) || !(config.lambda2 >= 0.0)) {
    throw std::invalid_argument("arrival rates must be >= 0");
  }
  if (config.arrival_kind == ArrivalKind::bernoulli && (config.lambda1 > 1.0 || config.lambda2 > 1.0)) {
    throw std::invalid_argument("Bernoulli arrival rates must be <= 1");
  }
  if (config.warmup < 0 || config.horizon <= config.warmup) {
    throw std::invalid_argument("need horizon > warmup >= 0");
  }
  if (config.trace_every < 0) throw std::invalid_argument("trace_every must be >= 0");
  validate(config.policy);
  if (config.saturated && !std::holds_alternative<FixedTableConfig>(config.policy) &&
      !std::holds_alternative<FixedCornerConfig>(config.policy)) {
    throw std::invalid_argument("saturated runs take a fixed corner or table policy");
  }
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finaliser over a combination of both inputs.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

long sample_arrivals(ArrivalKind kind, double lambda, Rng& rng) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("arrival rate must be >= 0");
  if (kind == ArrivalKind::bernoulli) {
    if (lambda > 1.0) throw std::invalid_argument("Bernoulli arrival rate must be <= 1");
    return coin(rng, lambda) ? 1 : 0;
  }
  if (lambda == 0.0) return 0;
  return std::poisson_distribution<long>(lambda)(rng);
}

Verdict classify_windows(const std::array<double, 4>& w) {
  const bool increasing = w[0] < w[1] && w[1] < w[2] && w[2] < w[3];
  if (increasing && w[3] > 3.0 * w[0] && w[3] > 50.0) return Verdict::unstable;
  // One packet of additive slack keeps empty or near-empty systems classifiable.
  const double peak = *std::max_element(w.begin(), w.end());
  if (w[3] < 2.0 * w[0] + 1.0 && peak <= 10.0 * w[0] + 1.0) return Verdict::stable;
  return Verdict::inconclusive;
}

Metrics run(const SimConfig& config, std::ostream* trace) {
  validate(config);

  Rng channel_rng(derive_seed(config.seed, 0));
  Rng arrival_rng(derive_seed(config.seed, 1));
  Scheduler scheduler(config.policy, config.channel);
  const bool gated = std::holds_alternative<GatedConfig>(config.policy);
  const int frame = scheduler.frame_length();
  const long measured = config.horizon - config.warmup;
  const long series_every = std::max(1L, measured / 100);
  const bool tracing = trace != nullptr && config.trace_every > 0;
  if (tracing) *trace << "slot,m,c1,c2,q1,q2,action,departed1,departed2\n";

  Metrics metrics;
  Observation obs;
  obs.channels = sample_initial(config.channel, channel_rng);
  bool just_arrived = true;
  double queue_sum = 0.0;
  std::array<double, 4> window_sums{};
  std::array<long, 4> window_counts{};
  long measured_d1 = 0;
  long measured_d2 = 0;

  for (long t = 0; t < config.horizon; ++t) {
    obs.slot_in_frame = static_cast<int>(t % frame);
    if (obs.slot_in_frame == 0) {
      obs.q1_frame = obs.q1;
      obs.q2_frame = obs.q2;
      scheduler.on_frame_start(obs.q1, obs.q2);
    }
    if (gated && just_arrived) obs.gate = obs.queue(obs.m);
    just_arrived = false;

    const bool measuring = t >= config.warmup;
    if (measuring) {
      const double total = static_cast<double>(obs.q1 + obs.q2);
      const long k = t - config.warmup;
      queue_sum += total;
      const auto w = static_cast<std::size_t>(std::min<long>(3, k * 4 / measured));
      window_sums[w] += total;
      ++window_counts[w];
      if ((k + 1) % series_every == 0) metrics.q_avg_series.push_back(queue_sum / (k + 1));
    }

    const Action action = scheduler.decide(obs);
    int departed1 = 0;
    int departed2 = 0;
    const int m = obs.m;
    if (action == Action::stay) {
      const bool backlog = config.saturated || obs.queue(m) > 0;
      if (obs.channels[m] == 1 && backlog) {
        if (m == 1) {
          departed1 = 1;
          if (!config.saturated) --obs.q1;
        } else {
          departed2 = 1;
          if (!config.saturated) --obs.q2;
        }
        if (gated && obs.gate > 0) --obs.gate;
      }
    } else {
      obs.m = 3 - obs.m;
      ++metrics.switch_count;
      just_arrived = true;
    }
    metrics.d1 += departed1;
    metrics.d2 += departed2;
    if (measuring) {
      measured_d1 += departed1;
      measured_d2 += departed2;
    }

    if (tracing && t % config.trace_every == 0) {
      *trace << t << ',' << m << ',' << obs.channels.c1 << ',' << obs.channels.c2 << ','
             << obs.q1 + departed1 << ',' << obs.q2 + departed2 << ','
             << (action == Action::stay ? "stay" : "switch") << ',' << departed1 << ','
             << departed2 << '\n';
    }

    if (!config.saturated) {
      const long a1 = sample_arrivals(config.arrival_kind, config.lambda1, arrival_rng);
      const long a2 = sample_arrivals(config.arrival_kind, config.lambda2, arrival_rng);
      obs.q1 += a1;
      obs.q2 += a2;
      metrics.arrivals1 += a1;
      metrics.arrivals2 += a2;
    }
    obs.channels = step(config.channel, obs.channels, channel_rng);
  }

  metrics.q_avg = queue_sum / static_cast<double>(measured);
  metrics.rate1 = static_cast<double>(measured_d1) / static_cast<double>(measured);
  metrics.rate2 = static_cast<double>(measured_d2) / static_cast<double>(measured);
  metrics.final_q1 = obs.q1;
  metrics.final_q2 = obs.q2;
  for (std::size_t w = 0; w < 4; ++w) {
    metrics.window_means[w] = window_counts[w] > 0 ? window_sums[w] / window_counts[w] : 0.0;
  }
  if (!config.saturated && measured >= 4000) metrics.verdict = classify_windows(metrics.window_means);
  metrics.unstable_flag = metrics.verdict == Verdict::unstable;
  return metrics;
}

RatePair saturated_rate(const DeterministicPolicy& table, double epsilon, long horizon,
                        std::uint64_t seed) {
  SimConfig config;
  config.channel = ChannelModel::gilbert_elliott(epsilon);
  config.policy = FixedTableConfig{table};
  config.horizon = horizon;
  config.warmup = 0;
  config.seed = seed;
  config.saturated = true;
  const Metrics m = run(config);
  return {m.rate1, m.rate2};
}

Verdict stability_probe(const SimConfig& config) {
  if (config.saturated) throw std::invalid_argument("stability probe needs an unsaturated system");
  if (config.horizon - config.warmup < 4000) {
    throw std::invalid_argument("stability probe needs at least 4000 measured slots");
  }
  return run(config).verdict;
}

}  // namespace mmsched
