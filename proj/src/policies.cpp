#include "mmsched/policies.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace mmsched {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Action codes, state 1 first (see DeterministicPolicy::code).
constexpr int kCornerB0 = 0b0000'1111;
constexpr int kCornerB1 = 0b0100'1011;
constexpr int kCornerB2 = 0b1100'1011;

}  // namespace

void validate(const PolicyConfig& config) {
  std::visit(overloaded{
                 [](const FbdcConfig& c) {
                   if (c.frame_length < 1) throw std::invalid_argument("FBDC frame length must be >= 1");
                 },
                 [](const MyopicConfig& c) {
                   if (c.frame_length < 1) throw std::invalid_argument("myopic frame length must be >= 1");
                   if (c.lookahead < 1) throw std::invalid_argument("myopic lookahead must be >= 1");
                 },
                 [](const auto&) {},
             },
             config);
}

std::string policy_name(const PolicyConfig& config) {
  return std::visit(overloaded{
                        [](const FbdcConfig&) -> std::string { return "fbdc"; },
                        [](const MyopicConfig& c) -> std::string {
                          return c.frame_based ? "myopic" : "myopic_slot";
                        },
                        [](const GatedConfig&) -> std::string { return "gated"; },
                        [](const ExhaustiveConfig&) -> std::string { return "exhaustive"; },
                        [](const FixedCornerConfig& c) -> std::string {
                          return "corner_" + std::string(corner_name(c.corner));
                        },
                        [](const FixedTableConfig& c) -> std::string {
                          return "table_" + std::to_string(c.table.code());
                        },
                    },
                    config);
}

PolicyConfig parse_policy(const std::string& name, int frame_length, int lookahead) {
  PolicyConfig config;
  if (name == "fbdc") {
    config = FbdcConfig{frame_length};
  } else if (name == "myopic") {
    config = MyopicConfig{lookahead, frame_length, true};
  } else if (name == "myopic_slot") {
    config = MyopicConfig{lookahead, frame_length, false};
  } else if (name == "gated") {
    config = GatedConfig{};
  } else if (name == "exhaustive") {
    config = ExhaustiveConfig{};
  } else if (name.rfind("corner_", 0) == 0) {
    const auto id = parse_corner(name.substr(7));
    if (!id) throw std::invalid_argument("unknown corner in policy name: " + name);
    config = FixedCornerConfig{*id};
  } else if (name.rfind("table_", 0) == 0) {
    int code = -1;
    try {
      std::size_t used = 0;
      code = std::stoi(name.substr(6), &used);
      if (used != name.size() - 6) code = -1;
    } catch (const std::exception&) {
      code = -1;
    }
    if (code < 0 || code >= kNumPolicies) throw std::invalid_argument("bad policy table code: " + name);
    config = FixedTableConfig{DeterministicPolicy::from_code(code)};
  } else {
    throw std::invalid_argument("unknown policy: " + name);
  }
  validate(config);
  return config;
}

int frame_length(const PolicyConfig& config) {
  if (const auto* f = std::get_if<FbdcConfig>(&config)) return f->frame_length;
  if (const auto* m = std::get_if<MyopicConfig>(&config)) return m->frame_length;
  return 0;
}

int lookahead(const PolicyConfig& config) {
  if (const auto* m = std::get_if<MyopicConfig>(&config)) return m->lookahead;
  return 0;
}

DeterministicPolicy corner_policy(CornerId id) {
  switch (id) {
    case CornerId::b0: return DeterministicPolicy::from_code(kCornerB0);
    case CornerId::b1: return DeterministicPolicy::from_code(kCornerB1);
    case CornerId::b2: return DeterministicPolicy::from_code(kCornerB2);
    case CornerId::b3: return DeterministicPolicy::from_code(kCornerB2).mirrored();
    case CornerId::b4: return DeterministicPolicy::from_code(kCornerB1).mirrored();
    case CornerId::b5: return DeterministicPolicy::from_code(kCornerB0).mirrored();
  }
  throw std::invalid_argument("unknown corner");
}

DeterministicPolicy fbdc_frame_start(const FbdcConfig& /*config*/, long q1_frame, long q2_frame,
                                     double epsilon) {
  if (q1_frame == 0 && q2_frame == 0) return corner_policy(CornerId::b3);
  return corner_policy(fbdc_corner_map(epsilon, static_cast<double>(q1_frame),
                                       static_cast<double>(q2_frame)));
}

Action fbdc_decide(const DeterministicPolicy& table, const Observation& obs) {
  return table.action(SystemState{obs.m, obs.channels.c1, obs.channels.c2});
}

Action myopic_decide(const MyopicConfig& config, const Observation& obs, const ChannelModel& model) {
  if (!model.is_markov()) {
    throw std::invalid_argument("the myopic policy needs a Gilbert-Elliott channel model");
  }
  const int here = obs.m;
  const int there = 3 - obs.m;
  const auto weight_queue = [&](int i) {
    return static_cast<double>(config.frame_based ? obs.frame_queue(i) : obs.queue(i));
  };
  const double w_here = weight_queue(here) *
                        (obs.channels[here] + predict_sum(model, obs.channels[here], config.lookahead));
  const double w_there = weight_queue(there) * predict_sum(model, obs.channels[there], config.lookahead);
  return w_here >= w_there ? Action::stay : Action::switch_queue;
}

Action gated_decide(const Observation& obs) {
  return obs.gate > 0 ? Action::stay : Action::switch_queue;
}

Action exhaustive_decide(const Observation& obs) {
  return obs.queue(obs.m) > 0 ? Action::stay : Action::switch_queue;
}

Scheduler::Scheduler(PolicyConfig config, ChannelModel model)
    : config_(std::move(config)), model_(model) {
  validate(config_);
  frame_length_ = std::max(1, mmsched::frame_length(config_));
  if (const auto* corner = std::get_if<FixedCornerConfig>(&config_)) {
    table_ = corner_policy(corner->corner);
  } else if (const auto* fixed = std::get_if<FixedTableConfig>(&config_)) {
    table_ = fixed->table;
  }
  const bool needs_markov = std::holds_alternative<FbdcConfig>(config_) ||
                            std::holds_alternative<MyopicConfig>(config_);
  if (needs_markov && !model_.is_markov()) {
    throw std::invalid_argument(policy_name(config_) + " requires a Gilbert-Elliott channel model");
  }
}

void Scheduler::on_frame_start(long q1, long q2) {
  if (const auto* fbdc = std::get_if<FbdcConfig>(&config_)) {
    table_ = fbdc_frame_start(*fbdc, q1, q2, model_.epsilon());
  }
}

Action Scheduler::decide(const Observation& obs) const {
  return std::visit(overloaded{
                        [&](const FbdcConfig&) { return fbdc_decide(table_, obs); },
                        [&](const MyopicConfig& c) { return myopic_decide(c, obs, model_); },
                        [&](const GatedConfig&) { return gated_decide(obs); },
                        [&](const ExhaustiveConfig&) { return exhaustive_decide(obs); },
                        [&](const FixedCornerConfig&) { return fbdc_decide(table_, obs); },
                        [&](const FixedTableConfig&) { return fbdc_decide(table_, obs); },
                    },
                    config_);
}

}  // namespace mmsched
