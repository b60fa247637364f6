#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mmsched {

inline constexpr int kNumStates = 8;
inline constexpr int kNumPolicies = 256;

enum class Action : std::uint8_t { switch_queue = 0, stay = 1 };

/**
 * Saturated-system state (m, C1, C2) with the fixed 1..8 numbering:
 * (1,1,1)=1, (1,1,0)=2, (1,0,1)=3, (1,0,0)=4, (2,1,1)=5, (2,1,0)=6,
 * (2,0,1)=7, (2,0,0)=8.
 */
struct SystemState {
  int m = 1;
  int c1 = 0;
  int c2 = 0;

  /// 1-based index in the numbering above.
  int index() const { return (m - 1) * 4 + (1 - c1) * 2 + (1 - c2) + 1; }
  static SystemState from_index(int index);

  /// Same state with the queue labels exchanged.
  SystemState mirrored() const { return {3 - m, c2, c1}; }

  friend bool operator==(const SystemState&, const SystemState&) = default;
};

/**
 * Stationary deterministic policy: one action per saturated state.
 *
 * The 8-bit code puts the state-1 action in the most significant bit with
 * stay = 1, so code 255 stays everywhere and code 0 switches everywhere.
 */
class DeterministicPolicy {
 public:
  DeterministicPolicy() = default;
  explicit DeterministicPolicy(const std::array<Action, kNumStates>& actions)
      : actions_(actions) {}

  static DeterministicPolicy from_code(int code);
  static DeterministicPolicy stay_everywhere() { return from_code(255); }
  static DeterministicPolicy switch_everywhere() { return from_code(0); }

  Action action(int state_index) const { return actions_[state_index - 1]; }
  Action action(const SystemState& s) const { return action(s.index()); }
  void set(int state_index, Action a) { actions_[state_index - 1] = a; }

  int code() const;
  /// Policy obtained by exchanging the roles of the two queues.
  DeterministicPolicy mirrored() const;
  /// Eight characters, '1' for stay, state 1 first.
  std::string to_string() const;

  friend bool operator==(const DeterministicPolicy&, const DeterministicPolicy&) = default;

 private:
  std::array<Action, kNumStates> actions_{};
};

/// Expected departures per slot from each queue.
struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;

  RatePair swapped() const { return {r2, r1}; }
  friend bool operator==(const RatePair&, const RatePair&) = default;
};

/// P(j | s, a) for the saturated system.
class TransitionKernel {
 public:
  double epsilon() const { return epsilon_; }
  /// States are 1-based.
  double operator()(int from, Action a, int to) const {
    return p_[from - 1][static_cast<int>(a)][to - 1];
  }

 private:
  friend TransitionKernel build_kernel(double epsilon);
  double epsilon_ = 0.0;
  std::array<std::array<std::array<double, kNumStates>, 2>, kNumStates> p_{};
};

/// Throws std::invalid_argument unless 0 < epsilon <= 0.5.
TransitionKernel build_kernel(double epsilon);

/// Probability vector over states 1..8 (stored 0-based).
using StateDistribution = std::array<double, kNumStates>;

/**
 * Stationary distribution of the chain induced by `policy`.
 *
 * The chain is restricted to the states reachable from the server sitting
 * at queue 1, which is closed and carries a single recurrent class for every
 * policy. This only matters for stay-everywhere, the one policy with two
 * closed classes; all other policies are unichain and the answer is their
 * unique stationary law. Solved densely on (P^T - I) with the normalisation
 * row substituted. Throws std::runtime_error if the residual exceeds 1e-12.
 */
StateDistribution stationary_distribution(const TransitionKernel& kernel,
                                          const DeterministicPolicy& policy);

/// Departure rates: reward 1 when staying at a queue whose channel is ON.
RatePair policy_rates(const StateDistribution& pi, const DeterministicPolicy& policy);

/// x(s; a) for s in 1..8, a in {switch, stay}.
class StateActionFrequency {
 public:
  double& at(int state_index, Action a) {
    return x_[(state_index - 1) * 2 + static_cast<int>(a)];
  }
  double at(int state_index, Action a) const {
    return x_[(state_index - 1) * 2 + static_cast<int>(a)];
  }
  const std::array<double, 2 * kNumStates>& values() const { return x_; }

  double total() const;
  /// Largest violation of the balance equations over the 8 states.
  double balance_residual(const TransitionKernel& kernel) const;
  RatePair rates() const;

 private:
  std::array<double, 2 * kNumStates> x_{};
};

StateActionFrequency saf_from_policy(const StateDistribution& pi,
                                     const DeterministicPolicy& policy);

/// Probability of `stay` at each state implied by x; empty for transient states.
std::array<std::optional<double>, kNumStates> randomized_policy(
    const StateActionFrequency& x);

/// Asymptotic variances of the per-slot departure indicators, so that the
/// standard error of an n-slot empirical rate is sqrt(variance / n).
RatePair rate_asymptotic_variance(const TransitionKernel& kernel,
                                  const DeterministicPolicy& policy);

/// Exact law of the empirical rates of an n-slot saturated run.
struct RateMoments {
  RatePair mean;
  RatePair standard_error;
};

/**
 * Mean and standard deviation of (departures_i / horizon) over the first
 * `horizon` slots, server starting at queue 1 with stationary channels.
 * Computed by doubling on the joint moments of the departure count and the
 * end state, so the start-up transient is included.
 */
RateMoments finite_horizon_rate_moments(const TransitionKernel& kernel,
                                        const DeterministicPolicy& policy, long horizon);

struct PolicyVertex {
  DeterministicPolicy policy;
  RatePair rates;
  StateActionFrequency frequencies;
};

/// All 256 deterministic policies ordered by code.
std::vector<PolicyVertex> enumerate_vertices(double epsilon);

struct WeightedLpSolution {
  RatePair rates;
  DeterministicPolicy policy;
  double objective = 0.0;
};

/**
 * max alpha1 r1 + alpha2 r2 over the state-action polytope, solved by
 * scanning the deterministic policies (the vertices). Ties within 1e-12 go
 * to the largest policy code. Throws std::invalid_argument for negative
 * weights or alpha1 = alpha2 = 0.
 */
WeightedLpSolution solve_weighted_lp(double epsilon, double alpha1, double alpha2);
WeightedLpSolution solve_weighted_lp(const std::vector<PolicyVertex>& vertices,
                                     double alpha1, double alpha2);

}  // namespace mmsched
