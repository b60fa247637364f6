#include "mmsched/mdp_core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mmsched {

namespace {

int next_queue(int m, Action a) { return a == Action::stay ? m : 3 - m; }

double channel_step(int from, int to, double eps) { return from == to ? 1.0 - eps : eps; }

bool earns_reward(const SystemState& s, Action a, int queue) {
  if (a != Action::stay || s.m != queue) return false;
  return (queue == 1 ? s.c1 : s.c2) == 1;
}

// States reachable from {1..4}; closed under the policy's transitions.
std::vector<int> reachable_from_queue_one(const TransitionKernel& kernel,
                                          const DeterministicPolicy& policy) {
  std::array<bool, kNumStates> seen{};
  std::vector<int> frontier;
  for (int s = 1; s <= 4; ++s) {
    seen[s - 1] = true;
    frontier.push_back(s);
  }
  while (!frontier.empty()) {
    const int s = frontier.back();
    frontier.pop_back();
    for (int j = 1; j <= kNumStates; ++j) {
      if (!seen[j - 1] && kernel(s, policy.action(s), j) > 0.0) {
        seen[j - 1] = true;
        frontier.push_back(j);
      }
    }
  }
  std::vector<int> states;
  for (int s = 1; s <= kNumStates; ++s) {
    if (seen[s - 1]) states.push_back(s);
  }
  return states;
}

Eigen::MatrixXd restricted_matrix(const TransitionKernel& kernel,
                                  const DeterministicPolicy& policy,
                                  const std::vector<int>& states) {
  const auto n = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      p(i, j) = kernel(states[i], policy.action(states[i]), states[j]);
    }
  }
  return p;
}

}  // namespace

SystemState SystemState::from_index(int index) {
  if (index < 1 || index > kNumStates) {
    throw std::out_of_range("state index must be in 1..8");
  }
  const int k = index - 1;
  return {k / 4 + 1, 1 - (k / 2) % 2, 1 - k % 2};
}

DeterministicPolicy DeterministicPolicy::from_code(int code) {
  if (code < 0 || code >= kNumPolicies) throw std::out_of_range("policy code must be in 0..255");
  DeterministicPolicy p;
  for (int s = 1; s <= kNumStates; ++s) {
    const bool stay = (code >> (kNumStates - s)) & 1;
    p.set(s, stay ? Action::stay : Action::switch_queue);
  }
  return p;
}

int DeterministicPolicy::code() const {
  int code = 0;
  for (int s = 1; s <= kNumStates; ++s) {
    code = (code << 1) | (action(s) == Action::stay ? 1 : 0);
  }
  return code;
}

DeterministicPolicy DeterministicPolicy::mirrored() const {
  DeterministicPolicy out;
  for (int s = 1; s <= kNumStates; ++s) {
    out.set(s, action(SystemState::from_index(s).mirrored()));
  }
  return out;
}

std::string DeterministicPolicy::to_string() const {
  std::string out;
  for (int s = 1; s <= kNumStates; ++s) out.push_back(action(s) == Action::stay ? '1' : '0');
  return out;
}

TransitionKernel build_kernel(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw std::invalid_argument("epsilon must lie in (0, 0.5], got " + std::to_string(epsilon));
  }
  TransitionKernel k;
  k.epsilon_ = epsilon;
  for (int s = 1; s <= kNumStates; ++s) {
    const auto from = SystemState::from_index(s);
    for (Action a : {Action::switch_queue, Action::stay}) {
      for (int j = 1; j <= kNumStates; ++j) {
        const auto to = SystemState::from_index(j);
        double p = 0.0;
        if (to.m == next_queue(from.m, a)) {
          p = channel_step(from.c1, to.c1, epsilon) * channel_step(from.c2, to.c2, epsilon);
        }
        k.p_[s - 1][static_cast<int>(a)][j - 1] = p;
      }
    }
  }
  return k;
}

StateDistribution stationary_distribution(const TransitionKernel& kernel,
                                          const DeterministicPolicy& policy) {
  const auto states = reachable_from_queue_one(kernel, policy);
  const auto n = static_cast<Eigen::Index>(states.size());
  const Eigen::MatrixXd p = restricted_matrix(kernel, policy, states);

  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  const Eigen::VectorXd x = a.fullPivLu().solve(rhs);

  const double residual = (x.transpose() * p - x.transpose()).cwiseAbs().maxCoeff();
  if (!(residual < 1e-12) || std::abs(x.sum() - 1.0) > 1e-12) {
    throw std::runtime_error("stationary solve failed for policy " + policy.to_string());
  }

  StateDistribution pi{};
  for (Eigen::Index i = 0; i < n; ++i) pi[states[i] - 1] = std::max(0.0, x(i));
  return pi;
}

RatePair policy_rates(const StateDistribution& pi, const DeterministicPolicy& policy) {
  RatePair r;
  for (int s = 1; s <= kNumStates; ++s) {
    const auto st = SystemState::from_index(s);
    if (earns_reward(st, policy.action(s), 1)) r.r1 += pi[s - 1];
    if (earns_reward(st, policy.action(s), 2)) r.r2 += pi[s - 1];
  }
  return r;
}

double StateActionFrequency::total() const {
  double t = 0.0;
  for (double v : x_) t += v;
  return t;
}

double StateActionFrequency::balance_residual(const TransitionKernel& kernel) const {
  double worst = 0.0;
  for (int s = 1; s <= kNumStates; ++s) {
    double inflow = 0.0;
    for (int from = 1; from <= kNumStates; ++from) {
      for (Action a : {Action::switch_queue, Action::stay}) {
        inflow += kernel(from, a, s) * at(from, a);
      }
    }
    const double outflow = at(s, Action::stay) + at(s, Action::switch_queue);
    worst = std::max(worst, std::abs(outflow - inflow));
  }
  return worst;
}

RatePair StateActionFrequency::rates() const {
  return {at(1, Action::stay) + at(2, Action::stay), at(5, Action::stay) + at(7, Action::stay)};
}

StateActionFrequency saf_from_policy(const StateDistribution& pi,
                                     const DeterministicPolicy& policy) {
  StateActionFrequency x;
  for (int s = 1; s <= kNumStates; ++s) x.at(s, policy.action(s)) = pi[s - 1];
  return x;
}

std::array<std::optional<double>, kNumStates> randomized_policy(const StateActionFrequency& x) {
  std::array<std::optional<double>, kNumStates> out;
  for (int s = 1; s <= kNumStates; ++s) {
    const double mass = x.at(s, Action::stay) + x.at(s, Action::switch_queue);
    if (mass > 0.0) out[s - 1] = x.at(s, Action::stay) / mass;
  }
  return out;
}

RatePair rate_asymptotic_variance(const TransitionKernel& kernel,
                                  const DeterministicPolicy& policy) {
  const auto states = reachable_from_queue_one(kernel, policy);
  const auto n = static_cast<Eigen::Index>(states.size());
  const Eigen::MatrixXd p = restricted_matrix(kernel, policy, states);
  const StateDistribution full_pi = stationary_distribution(kernel, policy);

  Eigen::VectorXd pi(n);
  for (Eigen::Index i = 0; i < n; ++i) pi(i) = full_pi[states[i] - 1];
  // Fundamental matrix (I - P + 1 pi^T)^-1; well defined for periodic chains too.
  const Eigen::MatrixXd fundamental =
      (Eigen::MatrixXd::Identity(n, n) - p + Eigen::VectorXd::Ones(n) * pi.transpose())
          .fullPivLu()
          .inverse();

  auto variance = [&](int queue) {
    Eigen::VectorXd f(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto s = SystemState::from_index(states[i]);
      f(i) = earns_reward(s, policy.action(states[i]), queue) ? 1.0 : 0.0;
    }
    const Eigen::VectorXd centered = f.array() - pi.dot(f);
    const Eigen::VectorXd z = fundamental * centered;
    const double v = 2.0 * pi.dot(centered.cwiseProduct(z)) -
                     pi.dot(centered.cwiseProduct(centered));
    return std::max(0.0, v);
  };
  return {variance(1), variance(2)};
}

namespace {

using Mat8 = Eigen::Matrix<double, kNumStates, kNumStates>;

// Joint moments over a block of slots: p(s,u) = P(X_len = u | X_0 = s) and
// m1, m2 the first and second moments of the count restricted to X_len = u.
struct CountBlock {
  Mat8 p = Mat8::Identity();
  Mat8 m1 = Mat8::Zero();
  Mat8 m2 = Mat8::Zero();
};

CountBlock concat(const CountBlock& a, const CountBlock& b) {
  CountBlock out;
  out.p = a.p * b.p;
  out.m1 = a.m1 * b.p + a.p * b.m1;
  out.m2 = a.m2 * b.p + 2.0 * a.m1 * b.m1 + a.p * b.m2;
  return out;
}

}  // namespace

RateMoments finite_horizon_rate_moments(const TransitionKernel& kernel,
                                        const DeterministicPolicy& policy, long horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  Mat8 p;
  for (int s = 1; s <= kNumStates; ++s) {
    for (int u = 1; u <= kNumStates; ++u) p(s - 1, u - 1) = kernel(s, policy.action(s), u);
  }
  Eigen::Matrix<double, 1, kNumStates> start = Eigen::Matrix<double, 1, kNumStates>::Zero();
  for (int s = 1; s <= 4; ++s) start(s - 1) = 0.25;

  auto moments = [&](int queue, double& mean, double& sd) {
    CountBlock one;
    one.p = p;
    for (int s = 1; s <= kNumStates; ++s) {
      const double f = earns_reward(SystemState::from_index(s), policy.action(s), queue) ? 1.0 : 0.0;
      one.m1.row(s - 1) = f * p.row(s - 1);
      one.m2.row(s - 1) = f * p.row(s - 1);
    }
    CountBlock total;
    CountBlock power = one;
    for (long n = horizon; n > 0; n >>= 1) {
      if (n & 1) total = concat(total, power);
      if (n > 1) power = concat(power, power);
    }
    const double h = static_cast<double>(horizon);
    const double e1 = start * total.m1.rowwise().sum();
    const double e2 = start * total.m2.rowwise().sum();
    mean = e1 / h;
    sd = std::sqrt(std::max(0.0, e2 - e1 * e1)) / h;
  };
  RateMoments out;
  moments(1, out.mean.r1, out.standard_error.r1);
  moments(2, out.mean.r2, out.standard_error.r2);
  return out;
}

std::vector<PolicyVertex> enumerate_vertices(double epsilon) {
  const TransitionKernel kernel = build_kernel(epsilon);
  std::vector<PolicyVertex> out;
  out.reserve(kNumPolicies);
  for (int code = 0; code < kNumPolicies; ++code) {
    const auto policy = DeterministicPolicy::from_code(code);
    const auto pi = stationary_distribution(kernel, policy);
    out.push_back({policy, policy_rates(pi, policy), saf_from_policy(pi, policy)});
  }
  return out;
}

WeightedLpSolution solve_weighted_lp(const std::vector<PolicyVertex>& vertices, double alpha1,
                                     double alpha2) {
  if (alpha1 < 0.0 || alpha2 < 0.0) throw std::invalid_argument("LP weights must be >= 0");
  if (alpha1 == 0.0 && alpha2 == 0.0) throw std::invalid_argument("LP weights are both zero");
  if (vertices.empty()) throw std::invalid_argument("no vertices to optimise over");

  constexpr double kTieTolerance = 1e-12;
  auto objective = [&](const PolicyVertex& v) { return alpha1 * v.rates.r1 + alpha2 * v.rates.r2; };

  double max_value = objective(vertices.front());
  for (const auto& v : vertices) max_value = std::max(max_value, objective(v));

  const PolicyVertex* best = nullptr;
  for (const auto& v : vertices) {
    if (objective(v) < max_value - kTieTolerance) continue;
    if (best == nullptr || v.policy.code() > best->policy.code()) best = &v;
  }
  return {best->rates, best->policy, objective(*best)};
}

WeightedLpSolution solve_weighted_lp(double epsilon, double alpha1, double alpha2) {
  return solve_weighted_lp(enumerate_vertices(epsilon), alpha1, alpha2);
}

}  // namespace mmsched
