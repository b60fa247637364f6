#include "mmsched/experiments.hpp"

#include "mmsched/csv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace mmsched {

namespace {

double point_segment_distance(RatePair p, RatePair a, RatePair b) {
  const double dx = b.r1 - a.r1;
  const double dy = b.r2 - a.r2;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.r1 - (a.r1 + t * dx), p.r2 - (a.r2 + t * dy));
}

// Distance to the part of the boundary that does not lie on an axis.
double distance_to_outer_boundary(const RateRegion& region, RatePair p) {
  const auto& poly = region.polygon();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const RatePair a = poly[i];
    const RatePair b = poly[(i + 1) % poly.size()];
    const bool on_axis = (a.r1 == 0.0 && b.r1 == 0.0) || (a.r2 == 0.0 && b.r2 == 0.0);
    if (poly.size() > 1 && on_axis) continue;
    best = std::min(best, point_segment_distance(p, a, b));
  }
  return best;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string channel_column(const ChannelModel& channel) {
  return channel.is_markov() ? csv::number(channel.epsilon()) : std::string();
}

}  // namespace

void validate(const GridSpec& spec) {
  if (!(spec.step > 0.0)) throw std::invalid_argument("grid step must be > 0");
  if (!(spec.boundary_margin >= 0.0)) throw std::invalid_argument("boundary_margin must be >= 0");
  if (spec.policies.empty()) throw std::invalid_argument("grid needs at least one policy");
  if (spec.threads < 1) throw std::invalid_argument("threads must be >= 1");
  for (const auto& p : spec.policies) {
    SimConfig probe;
    probe.channel = spec.channel;
    probe.policy = p;
    probe.horizon = spec.horizon;
    probe.warmup = spec.warmup;
    probe.arrival_kind = spec.arrival_kind;
    validate(probe);
    Scheduler(p, spec.channel);
  }
}

RateRegion grid_region(const ChannelModel& channel) {
  if (channel.is_markov()) return closed_form_region(channel.epsilon());
  return iid_region(channel.p1(), channel.p2());
}

std::vector<GridPoint> build_grid(const GridSpec& spec) {
  validate(spec);
  const RateRegion region = grid_region(spec.channel);
  const double d = std::max(spec.boundary_margin, spec.step);
  double max1 = 0.0;
  double max2 = 0.0;
  for (const auto& v : region.polygon()) {
    max1 = std::max(max1, v.r1);
    max2 = std::max(max2, v.r2);
  }
  const auto n1 = static_cast<long>(std::floor(max1 / spec.step + 1e-9));
  const auto n2 = static_cast<long>(std::floor(max2 / spec.step + 1e-9));
  const auto at = [&](long i, long j) { return RatePair{i * spec.step, j * spec.step}; };
  const auto inside = [&](long i, long j) { return contains(region, at(i, j), 0.0); };

  std::vector<GridPoint> grid;
  std::map<std::pair<long long, long long>, bool> seen;
  const auto key = [](RatePair p) {
    return std::make_pair(std::llround(p.r1 * 1e9), std::llround(p.r2 * 1e9));
  };
  for (long i = 0; i <= n1; ++i) {
    for (long j = 0; j <= n2; ++j) {
      if (!inside(i, j)) continue;
      GridPoint g;
      g.lambda = at(i, j);
      g.interior = true;
      g.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(i) * 1'000'003ULL + j);
      if (seen.emplace(key(g.lambda), true).second) grid.push_back(g);
      if (!inside(i + 1, j) || !inside(i, j + 1)) {
        GridPoint e;
        e.lambda = {g.lambda.r1 + d, g.lambda.r2 + d};
        e.interior = contains(region, e.lambda, 0.0);
        e.seed = derive_seed(spec.seed, (1ULL << 40) + static_cast<std::uint64_t>(i) * 1'000'003ULL + j);
        const bool bernoulli_ok = spec.arrival_kind != ArrivalKind::bernoulli ||
                                  (e.lambda.r1 <= 1.0 && e.lambda.r2 <= 1.0);
        if (bernoulli_ok && seen.emplace(key(e.lambda), true).second) grid.push_back(e);
      }
    }
  }
  for (auto& g : grid) g.near_boundary = distance_to_outer_boundary(region, g.lambda) < spec.step;
  std::sort(grid.begin(), grid.end(), [](const GridPoint& a, const GridPoint& b) {
    return std::tie(a.lambda.r1, a.lambda.r2) < std::tie(b.lambda.r1, b.lambda.r2);
  });
  return grid;
}

std::vector<SweepRow> sweep(const GridSpec& spec) { return sweep(spec, build_grid(spec)); }

std::vector<SweepRow> sweep(const GridSpec& spec, const std::vector<GridPoint>& grid) {
  validate(spec);
  const std::size_t np = spec.policies.size();
  std::vector<SweepRow> rows(grid.size() * np);
  parallel_for(rows.size(), spec.threads, [&](std::size_t idx) {
    const GridPoint& g = grid[idx / np];
    const PolicyConfig& policy = spec.policies[idx % np];
    SimConfig config;
    config.lambda1 = g.lambda.r1;
    config.lambda2 = g.lambda.r2;
    config.arrival_kind = spec.arrival_kind;
    config.channel = spec.channel;
    config.policy = policy;
    config.horizon = spec.horizon;
    config.warmup = spec.warmup;
    config.seed = g.seed;
    SweepRow& row = rows[idx];
    row.point = g;
    row.policy = policy_name(policy);
    row.frame_length = frame_length(policy);
    row.lookahead = lookahead(policy);
    row.metrics = run(config);
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const ChannelModel& channel, const std::vector<SweepRow>& rows) {
  out << "epsilon,lambda1,lambda2,policy,T,k,q_avg,rate1,rate2,stable\n";
  const std::string eps = channel_column(channel);
  for (const auto& r : rows) {
    out << eps << ',' << csv::number(r.point.lambda.r1) << ',' << csv::number(r.point.lambda.r2) << ','
        << r.policy << ',' << r.frame_length << ',' << r.lookahead << ',' << csv::number(r.metrics.q_avg)
        << ',' << csv::number(r.metrics.rate1) << ',' << csv::number(r.metrics.rate2) << ','
        << verdict_name(r.metrics.verdict) << '\n';
  }
}

SweepAgreement classification_agreement(const std::vector<SweepRow>& rows) {
  SweepAgreement a;
  for (const auto& r : rows) {
    if (r.point.near_boundary) continue;
    ++a.compared;
    const Verdict expected = r.point.interior ? Verdict::stable : Verdict::unstable;
    if (r.metrics.verdict == expected) ++a.agreeing;
    if (r.metrics.verdict == Verdict::inconclusive) ++a.inconclusive;
  }
  return a;
}

void export_regions(std::ostream& out, const ChannelModel& channel) {
  if (channel.is_markov()) {
    write_region_csv(out, "closed_form", closed_form_region(channel.epsilon()));
    write_region_csv(out, "iid", iid_region(0.5, 0.5));
    write_region_csv(out, "no_switchover", no_switchover_region(0.5, 0.5));
  } else {
    write_region_csv(out, "iid", iid_region(channel.p1(), channel.p2()));
    write_region_csv(out, "no_switchover", no_switchover_region(channel.p1(), channel.p2()));
  }
}

double psi_split_epsilon() {
  const auto f = [](double e) { return e * (2.0 - e) - std::pow(1.0 - e, 3); };
  double lo = 0.1;
  double hi = 0.4;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double psi_prime(double epsilon, double ratio, CornerId myopic_corner, CornerId fbdc_corner) {
  const RatePair my = corner_rate(epsilon, myopic_corner);
  const RatePair best = corner_rate(epsilon, fbdc_corner);
  return (my.r1 + ratio * my.r2) / (best.r1 + ratio * best.r2);
}

namespace {

using RatioBound = double (*)(double);

double ratio_a(double e) { return (1.0 + e - e * e) / (1.0 - e); }
double ratio_b(double e) { return (1.0 - e) * (1.0 - e) / e; }
double ratio_c(double e) { return (2.0 - e) / (1.0 - e); }
double ratio_d(double e) { return (1.0 - e) / e; }
double ratio_g(double e) { return (1.0 - e) * (3.0 - 2.0 * e); }

struct PsiRegionSpec {
  std::string name;
  double eps_lo;
  double eps_hi;
  bool lo_closed;
  bool hi_closed;
  RatioBound ratio_lo;
  RatioBound ratio_hi;
  CornerId myopic;
  CornerId fbdc;
  double bound;
  bool mirrored;

  bool active(double e) const {
    return (lo_closed ? e >= eps_lo : e > eps_lo) && (hi_closed ? e <= eps_hi : e < eps_hi);
  }
  double lo(double e) const { return mirrored ? 1.0 / ratio_hi(e) : ratio_lo(e); }
  double hi(double e) const { return mirrored ? 1.0 / ratio_lo(e) : ratio_hi(e); }
  double ratio_at(double e, double u) const {
    const double a = lo(e);
    const double b = hi(e);
    return a * std::pow(b / a, u);
  }
};

std::vector<PsiRegionSpec> psi_regions() {
  const double et = psi_split_epsilon();
  const double ec = critical_epsilon();
  using C = CornerId;
  std::vector<PsiRegionSpec> upper = {
      {"case1.1_R1", 0.0, et, false, true, ratio_b, ratio_d, C::b1, C::b0, 0.97, false},
      {"case1.1_R2", 0.0, et, false, true, ratio_a, ratio_c, C::b2, C::b1, 0.9002, false},
      {"case1.2_R1", et, ec, false, false, ratio_c, ratio_d, C::b1, C::b0, 0.95, false},
      {"case1.2_R2", et, ec, false, false, ratio_b, ratio_c, C::b2, C::b0, 0.9150, false},
      {"case1.2_R3", et, ec, false, false, ratio_a, ratio_b, C::b2, C::b1, 0.9474, false},
      {"case2_R1", ec, 0.5, true, true, ratio_g, ratio_d, C::b2, C::b0, 0.914, false},
  };
  std::vector<PsiRegionSpec> all;
  for (const auto& r : upper) {
    all.push_back(r);
    PsiRegionSpec m = r;
    m.name += "_mirror";
    m.myopic = mirror(r.myopic);
    m.fbdc = mirror(r.fbdc);
    m.mirrored = true;
    all.push_back(m);
  }
  return all;
}

template <class F>
double golden_min(F f, double a, double b, double& x_best) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < 80; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  // The interval ends are part of the closure, so check them too.
  double best = std::min(f1, f2);
  x_best = f1 <= f2 ? x1 : x2;
  for (double x : {a, b}) {
    const double v = f(x);
    if (v < best) {
      best = v;
      x_best = x;
    }
  }
  return best;
}

PsiRegionResult minimize_region(const PsiRegionSpec& r, double epsilon_step, int ratio_points) {
  PsiRegionResult out;
  out.name = r.name;
  out.myopic_corner = r.myopic;
  out.fbdc_corner = r.fbdc;
  out.epsilon_lo = r.eps_lo;
  out.epsilon_hi = r.eps_hi;
  out.bound = r.bound;
  out.minimum = std::numeric_limits<double>::infinity();

  const double e_min = r.lo_closed ? r.eps_lo : r.eps_lo + 1e-9;
  const double e_max = r.hi_closed ? r.eps_hi : r.eps_hi - 1e-9;
  const auto value = [&](double e, double u) { return psi_prime(e, r.ratio_at(e, u), r.myopic, r.fbdc); };

  // Open ends are left to the refinement: right next to them the corner
  // weights tie to within rounding.
  std::vector<double> eps;
  if (r.lo_closed) eps.push_back(e_min);
  for (long i = static_cast<long>(std::floor(r.eps_lo / epsilon_step)) + 1; i * epsilon_step < r.eps_hi; ++i) {
    eps.push_back(i * epsilon_step);
  }
  if (r.hi_closed) eps.push_back(e_max);

  double best_e = e_min;
  double best_u = 0.5;
  for (double e : eps) {
    if (!(r.lo(e) < r.hi(e))) continue;
    for (int j = 0; j < ratio_points; ++j) {
      const double u = (j + 0.5) / ratio_points;
      const double ratio = r.ratio_at(e, u);
      const double v = psi_prime(e, ratio, r.myopic, r.fbdc);
      if (myopic_corner_map(e, 1.0, ratio) != r.myopic || best_corner(e, 1.0, ratio) != r.fbdc) {
        ++out.map_mismatches;
      }
      if (v < out.minimum) {
        out.minimum = v;
        best_e = e;
        best_u = u;
      }
    }
  }
  if (!std::isfinite(out.minimum)) {
    out.minimum = 1.0;
    return out;
  }

  const double grid_e = best_e;
  const double grid_u = best_u;
  double e_a = std::max(e_min, best_e - epsilon_step);
  double e_b = std::min(e_max, best_e + epsilon_step);
  double u_a = std::max(0.0, best_u - 1.0 / ratio_points);
  double u_b = std::min(1.0, best_u + 1.0 / ratio_points);
  for (int round = 0; round < 20; ++round) {
    double x = best_u;
    golden_min([&](double u) { return value(best_e, u); }, u_a, u_b, x);
    best_u = x;
    x = best_e;
    golden_min(
        [&](double e) { return r.lo(e) < r.hi(e) ? value(e, best_u) : std::numeric_limits<double>::infinity(); },
        e_a, e_b, x);
    best_e = x;
    if (round == 0) {
      e_a = e_min;
      e_b = e_max;
      u_a = 0.0;
      u_b = 1.0;
    }
  }
  out.argmin_epsilon = grid_e;
  out.argmin_ratio = r.ratio_at(grid_e, grid_u);
  const double refined = value(best_e, best_u);
  if (refined < out.minimum) {
    out.minimum = refined;
    out.argmin_epsilon = best_e;
    out.argmin_ratio = r.ratio_at(best_e, best_u);
  }
  return out;
}

}  // namespace

bool PsiReport::passes() const {
  if (!tiling_ok || agreement_deviation > 1e-12) return false;
  if (global_minimum < global_bound - 1e-6) return false;
  for (const auto& r : regions) {
    if (!r.passes() || r.map_mismatches != 0) return false;
  }
  return true;
}

PsiReport verify_psi(double epsilon_step, int ratio_points) {
  if (!(epsilon_step > 0.0) || epsilon_step > 0.5) throw std::invalid_argument("epsilon_step must be in (0, 0.5]");
  if (ratio_points < 2) throw std::invalid_argument("ratio_points must be >= 2");
  const auto specs = psi_regions();
  PsiReport report;
  for (const auto& s : specs) {
    report.regions.push_back(minimize_region(s, epsilon_step, ratio_points));
    report.global_minimum = std::min(report.global_minimum, report.regions.back().minimum);
  }

  const auto n = static_cast<long>(std::floor(0.5 / epsilon_step + 1e-9));
  for (long i = 1; i <= n; ++i) {
    const double e = i * epsilon_step;
    std::vector<double> cuts = myopic_corner_thresholds(e).thresholds;
    const auto fb = fbdc_corner_thresholds(e).thresholds;
    cuts.insert(cuts.end(), fb.begin(), fb.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               cuts.end());
    for (std::size_t k = 0; k <= cuts.size(); ++k) {
      double ratio;
      if (k == 0) ratio = cuts.front() / 2.0;
      else if (k == cuts.size()) ratio = cuts.back() * 2.0;
      else ratio = std::sqrt(cuts[k - 1] * cuts[k]);
      const CornerId my = myopic_corner_map(e, 1.0, ratio);
      const CornerId best = best_corner(e, 1.0, ratio);
      int covering = 0;
      bool corners_match = true;
      for (const auto& s : specs) {
        if (!s.active(e) || !(s.lo(e) < ratio && ratio < s.hi(e))) continue;
        ++covering;
        corners_match = corners_match && s.myopic == my && s.fbdc == best;
      }
      if (my == best) {
        report.agreement_deviation = std::max(report.agreement_deviation, std::abs(psi_prime(e, ratio, my, best) - 1.0));
        if (covering != 0) report.tiling_ok = false;
      } else if (covering != 1 || !corners_match) {
        report.tiling_ok = false;
      }
    }
  }
  return report;
}

void write_psi_csv(std::ostream& out, const PsiReport& report) {
  out << "region,myopic_corner,fbdc_corner,epsilon_lo,epsilon_hi,minimum,argmin_epsilon,argmin_ratio,bound,"
         "map_mismatches,passes\n";
  for (const auto& r : report.regions) {
    out << r.name << ',' << corner_name(r.myopic_corner) << ',' << corner_name(r.fbdc_corner) << ','
        << csv::number(r.epsilon_lo) << ',' << csv::number(r.epsilon_hi) << ',' << csv::number(r.minimum) << ','
        << csv::number(r.argmin_epsilon) << ',' << csv::number(r.argmin_ratio) << ',' << csv::number(r.bound)
        << ',' << r.map_mismatches << ',' << (r.passes() ? "yes" : "no") << '\n';
  }
  out << "global,,,0,0.5," << csv::number(report.global_minimum) << ",,," << csv::number(report.global_bound)
      << ",0," << (report.global_minimum >= report.global_bound - 1e-6 ? "yes" : "no") << '\n';
}

bool SaturatedRow::within(double z) const {
  const auto ok = [z](double emp, double an, double mean, double se) {
    return std::abs(emp - an) <= z * se + std::abs(mean - an) + 1e-12;
  };
  return ok(empirical.r1, analytic.r1, finite.mean.r1, finite.standard_error.r1) &&
         ok(empirical.r2, analytic.r2, finite.mean.r2, finite.standard_error.r2);
}

std::vector<SaturatedRow> saturated_check(double epsilon, const std::vector<DeterministicPolicy>& tables,
                                          long horizon, std::uint64_t seed, int threads) {
  const TransitionKernel kernel = build_kernel(epsilon);
  const std::uint64_t base = derive_seed(seed, std::llround(epsilon * 1e9));
  std::vector<SaturatedRow> rows(tables.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    SaturatedRow& row = rows[i];
    row.policy = tables[i];
    row.analytic = policy_rates(stationary_distribution(kernel, row.policy), row.policy);
    row.finite = finite_horizon_rate_moments(kernel, row.policy, horizon);
    row.empirical = saturated_rate(row.policy, epsilon, horizon, derive_seed(base, row.policy.code()));
  });
  return rows;
}

void write_saturated_csv(std::ostream& out, double epsilon, const std::vector<SaturatedRow>& rows) {
  out << "epsilon,policy,analytic_r1,analytic_r2,empirical_r1,empirical_r2,se_r1,se_r2,within_3se\n";
  for (const auto& r : rows) {
    out << csv::number(epsilon) << ",table_" << r.policy.code() << ',' << csv::number(r.analytic.r1) << ','
        << csv::number(r.analytic.r2) << ',' << csv::number(r.empirical.r1) << ','
        << csv::number(r.empirical.r2) << ',' << csv::number(r.finite.standard_error.r1) << ','
        << csv::number(r.finite.standard_error.r2) << ',' << (r.within(3.0) ? "yes" : "no") << '\n';
  }
}

std::vector<GapRow> throughput_gap(double epsilon, const std::vector<int>& frame_lengths, CornerId corner,
                                   long horizon, std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  const ChannelModel model = ChannelModel::gilbert_elliott(epsilon);
  const DeterministicPolicy table = corner_policy(corner);
  const RatePair analytic = corner_rate(epsilon, corner);
  std::vector<GapRow> rows;
  for (int T : frame_lengths) {
    if (T < 1) throw std::invalid_argument("frame lengths must be >= 1");
    Rng channel_rng(derive_seed(seed, 0));
    Rng position_rng(derive_seed(seed, 2));
    ChannelPair c = sample_initial(model, channel_rng);
    int m = 1;
    long d1 = 0;
    long d2 = 0;
    for (long t = 0; t < horizon; ++t) {
      if (t % T == 0) m = coin(position_rng, 0.5) ? 1 : 2;
      if (table.action(SystemState{m, c.c1, c.c2}) == Action::stay) {
        if (c[m] == 1) ++(m == 1 ? d1 : d2);
      } else {
        m = 3 - m;
      }
      c = step(model, c, channel_rng);
    }
    GapRow row;
    row.frame_length = T;
    row.analytic = analytic;
    row.empirical = {static_cast<double>(d1) / horizon, static_cast<double>(d2) / horizon};
    row.deficit = (analytic.r1 + analytic.r2) - (row.empirical.r1 + row.empirical.r2);
    rows.push_back(row);
  }
  return rows;
}

void write_gap_csv(std::ostream& out, double epsilon, CornerId corner, const std::vector<GapRow>& rows) {
  out << "epsilon,corner,T,analytic_r1,analytic_r2,empirical_r1,empirical_r2,deficit\n";
  for (const auto& r : rows) {
    out << csv::number(epsilon) << ',' << corner_name(corner) << ',' << r.frame_length << ','
        << csv::number(r.analytic.r1) << ',' << csv::number(r.analytic.r2) << ',' << csv::number(r.empirical.r1)
        << ',' << csv::number(r.empirical.r2) << ',' << csv::number(r.deficit) << '\n';
  }
}

std::vector<IidRow> iid_suite(double p1, double p2, const std::vector<double>& rho_points, long horizon,
                              std::uint64_t seed) {
  const ChannelModel model = ChannelModel::iid(p1, p2);
  std::vector<IidRow> rows;
  for (std::size_t i = 0; i < rho_points.size(); ++i) {
    const double rho = rho_points[i];
    if (!(rho >= 0.0)) throw std::invalid_argument("loads must be >= 0");
    for (const PolicyConfig& policy : {PolicyConfig{GatedConfig{}}, PolicyConfig{ExhaustiveConfig{}}}) {
      SimConfig config;
      config.lambda1 = rho * p1 / 2.0;
      config.lambda2 = rho * p2 / 2.0;
      config.channel = model;
      config.policy = policy;
      config.horizon = horizon;
      config.warmup = horizon / 10;
      config.seed = derive_seed(seed, i);
      IidRow row;
      row.rho = rho;
      row.lambda = {config.lambda1, config.lambda2};
      row.policy = policy_name(policy);
      row.metrics = run(config);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_iid_csv(std::ostream& out, double p1, double p2, const std::vector<IidRow>& rows) {
  out << "p1,p2,rho,lambda1,lambda2,policy,q_avg,rate1,rate2,stable\n";
  for (const auto& r : rows) {
    out << csv::number(p1) << ',' << csv::number(p2) << ',' << csv::number(r.rho) << ','
        << csv::number(r.lambda.r1) << ',' << csv::number(r.lambda.r2) << ',' << r.policy << ','
        << csv::number(r.metrics.q_avg) << ',' << csv::number(r.metrics.rate1) << ','
        << csv::number(r.metrics.rate2) << ',' << verdict_name(r.metrics.verdict) << '\n';
  }
}

}  // namespace mmsched
