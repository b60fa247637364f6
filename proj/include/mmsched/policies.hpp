#pragma once

#include "mmsched/channels.hpp"
#include "mmsched/mdp_core.hpp"
#include "mmsched/stability_region.hpp"

#include <string>
#include <variant>

namespace mmsched {

/// Frame-based dynamic control: pick the best corner policy every T slots.
struct FbdcConfig {
  int frame_length = 25;
};

/// k-lookahead myopic weights, using frame-start or current queue lengths.
struct MyopicConfig {
  int lookahead = 1;
  int frame_length = 25;
  bool frame_based = true;
};

struct GatedConfig {};
struct ExhaustiveConfig {};

struct FixedCornerConfig {
  CornerId corner = CornerId::b3;
};

struct FixedTableConfig {
  DeterministicPolicy table;
};

using PolicyConfig = std::variant<FbdcConfig, MyopicConfig, GatedConfig, ExhaustiveConfig,
                                  FixedCornerConfig, FixedTableConfig>;

/// Throws std::invalid_argument if T < 1 or k < 1.
void validate(const PolicyConfig& config);

/// Short name used in CSV output: fbdc, myopic, myopic_slot, gated, exhaustive,
/// corner_b2, table_255 ...
std::string policy_name(const PolicyConfig& config);
/// Inverse of policy_name; frame length and lookahead are supplied separately.
PolicyConfig parse_policy(const std::string& name, int frame_length = 25, int lookahead = 1);
/// Frame length, or 0 for policies without frames.
int frame_length(const PolicyConfig& config);
/// Lookahead, or 0 for non-myopic policies.
int lookahead(const PolicyConfig& config);

/// What the server knows at the start of a slot.
struct Observation {
  int m = 1;
  ChannelPair channels;
  long q1 = 0;
  long q2 = 0;
  long q1_frame = 0;
  long q2_frame = 0;
  int slot_in_frame = 0;
  long gate = 0;

  long queue(int i) const { return i == 1 ? q1 : q2; }
  long frame_queue(int i) const { return i == 1 ? q1_frame : q2_frame; }
};

/**
 * Deterministic action table of each corner of the rate region.
 *
 * b0 stays at queue 2 and switches out of queue 1 everywhere; b1 stays at
 * queue 1 only on (C1,C2) = (1,0) and leaves queue 2 only on (1,0); b2 stays at
 * queue 1 on (1,1) and (1,0) and leaves queue 2 only on (1,0). b3, b4, b5 are
 * the mirror images of b2, b1, b0.
 */
DeterministicPolicy corner_policy(CornerId id);

/// Corner table for the frame, from the frame-start queues. Both queues empty
/// selects the balanced corner b3.
DeterministicPolicy fbdc_frame_start(const FbdcConfig& config, long q1_frame, long q2_frame,
                                     double epsilon);

Action fbdc_decide(const DeterministicPolicy& table, const Observation& obs);

/**
 * Stay iff W_here >= W_there, where
 *   W_here  = Q_m * (C_m(t) + sum_{tau=1..k} E[C_m(t+tau) | C_m(t)])
 *   W_there = Q_o * sum_{tau=1..k} E[C_o(t+tau) | C_o(t)].
 * Q is the frame-start or current queue length depending on the config.
 * Throws std::invalid_argument for i.i.d. channels.
 */
Action myopic_decide(const MyopicConfig& config, const Observation& obs,
                     const ChannelModel& model);

/// Stay while the gate (packets found on arrival, not yet served) is positive.
Action gated_decide(const Observation& obs);

/// Stay while the current queue is nonempty.
Action exhaustive_decide(const Observation& obs);

/**
 * Per-run policy state: holds the frame table for FBDC and dispatches to the
 * decision rule of the configured policy.
 */
class Scheduler {
 public:
  Scheduler(PolicyConfig config, ChannelModel model);

  /// Called by the simulator at every slot with slot_in_frame == 0.
  void on_frame_start(long q1, long q2);
  Action decide(const Observation& obs) const;

  int frame_length() const { return frame_length_; }
  const PolicyConfig& config() const { return config_; }

 private:
  PolicyConfig config_;
  ChannelModel model_;
  DeterministicPolicy table_;
  int frame_length_ = 1;
};

}  // namespace mmsched
