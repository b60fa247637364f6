#pragma once

#include <cstdint>
#include <random>

namespace mmsched {

/// Random source used throughout the simulator. Each run owns its own.
using Rng = std::mt19937_64;

/// ON/OFF state of both connectivity processes in one slot (1 = ON).
struct ChannelPair {
  int c1 = 0;
  int c2 = 0;

  int operator[](int queue) const { return queue == 1 ? c1 : c2; }
  friend bool operator==(const ChannelPair&, const ChannelPair&) = default;
};

enum class ChannelKind { iid, gilbert_elliott };

/**
 * Connectivity model for the two queues.
 *
 * The i.i.d. model turns channel i ON with probability p_i in every slot
 * independently of the past. The Gilbert-Elliott model is the symmetric
 * two-state chain where each channel flips with probability epsilon per slot.
 * Instances are immutable once built.
 */
class ChannelModel {
 public:
  /// Throws std::invalid_argument unless 0 <= p1, p2 <= 1.
  static ChannelModel iid(double p1, double p2);
  /// Throws std::invalid_argument unless 0 < epsilon <= 0.5.
  static ChannelModel gilbert_elliott(double epsilon);

  ChannelKind kind() const { return kind_; }
  bool is_markov() const { return kind_ == ChannelKind::gilbert_elliott; }
  double p1() const { return p1_; }
  double p2() const { return p2_; }
  double epsilon() const { return epsilon_; }

  /// Stationary probability that channel `queue` (1 or 2) is ON.
  double on_probability(int queue) const;

 private:
  ChannelModel(ChannelKind kind, double p1, double p2, double epsilon)
      : kind_(kind), p1_(p1), p2_(p2), epsilon_(epsilon) {}

  ChannelKind kind_;
  double p1_;
  double p2_;
  double epsilon_;
};

/// Draws C(0) from the stationary law of the model.
ChannelPair sample_initial(const ChannelModel& model, Rng& rng);

/// Draws C(t+1) given C(t).
ChannelPair step(const ChannelModel& model, ChannelPair current, Rng& rng);

/**
 * E[C(t+tau) | C(t) = c] for one Gilbert-Elliott channel, using the
 * eigen-decomposition of the 2x2 transition matrix:
 * 1/2 + sign(c) * (1 - 2 epsilon)^tau / 2.
 *
 * Throws std::invalid_argument for an i.i.d. model or tau < 1.
 */
double predict(const ChannelModel& model, int c, int tau);

/// Sum of predict(model, c, tau) for tau = 1..k.
double predict_sum(const ChannelModel& model, int c, int k);

/// Bernoulli(p) draw shared by channels and arrivals.
inline bool coin(Rng& rng, double p) {
  return std::generate_canonical<double, 53>(rng) < p;
}

}  // namespace mmsched
