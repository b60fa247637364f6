#include "mmsched/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmsched {

ChannelModel ChannelModel::iid(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("iid channel probabilities must lie in [0, 1]");
  }
  return ChannelModel(ChannelKind::iid, p1, p2, 0.0);
}

ChannelModel ChannelModel::gilbert_elliott(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw std::invalid_argument("Gilbert-Elliott epsilon must lie in (0, 0.5], got " +
                                std::to_string(epsilon));
  }
  return ChannelModel(ChannelKind::gilbert_elliott, 0.5, 0.5, epsilon);
}

double ChannelModel::on_probability(int queue) const {
  if (kind_ == ChannelKind::gilbert_elliott) return 0.5;
  return queue == 1 ? p1_ : p2_;
}

ChannelPair sample_initial(const ChannelModel& model, Rng& rng) {
  ChannelPair c;
  c.c1 = coin(rng, model.on_probability(1)) ? 1 : 0;
  c.c2 = coin(rng, model.on_probability(2)) ? 1 : 0;
  return c;
}

ChannelPair step(const ChannelModel& model, ChannelPair current, Rng& rng) {
  if (model.kind() == ChannelKind::iid) {
    ChannelPair next;
    next.c1 = coin(rng, model.p1()) ? 1 : 0;
    next.c2 = coin(rng, model.p2()) ? 1 : 0;
    return next;
  }
  const double eps = model.epsilon();
  ChannelPair next = current;
  if (coin(rng, eps)) next.c1 ^= 1;
  if (coin(rng, eps)) next.c2 ^= 1;
  return next;
}

double predict(const ChannelModel& model, int c, int tau) {
  if (!model.is_markov()) {
    throw std::invalid_argument("predict requires a Gilbert-Elliott channel model");
  }
  if (tau < 1) throw std::invalid_argument("prediction horizon must be >= 1");
  const double sign = c != 0 ? 1.0 : -1.0;
  return 0.5 + sign * 0.5 * std::pow(1.0 - 2.0 * model.epsilon(), tau);
}

double predict_sum(const ChannelModel& model, int c, int k) {
  double sum = 0.0;
  for (int tau = 1; tau <= k; ++tau) sum += predict(model, c, tau);
  return sum;
}

}  // namespace mmsched
