#include "mmsched/config.hpp"
#include "mmsched/experiments.hpp"
#include "mmsched/simulator.hpp"
#include "mmsched/stability_region.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

namespace {

using namespace mmsched;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCheck = 2;

struct OutputTarget {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (path.empty() || path == "-") return;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw ConfigError("cannot open output file " + path);
    stream = file.get();
  }
};

int check_result(bool ok, const std::string& what) {
  std::cerr << (ok ? "check passed: " : "check FAILED: ") << what << '\n';
  return ok ? kExitOk : kExitCheck;
}

int cmd_region(const Config& cfg, std::ostream& out, bool check) {
  const ChannelModel channel = channel_from(cfg);
  export_regions(out, channel);
  if (!check) return kExitOk;
  if (!channel.is_markov()) return check_result(true, "i.i.d. region has no enumeration cross-check");
  std::vector<RatePair> rates;
  for (const auto& v : enumerate_vertices(channel.epsilon())) rates.push_back(v.rates);
  const double d = hausdorff_distance(region_from_vertices(rates), closed_form_region(channel.epsilon()));
  return check_result(d < 1e-9, "hull of enumerated policies vs closed form, distance " + std::to_string(d));
}

int cmd_sweep(const Config& cfg, std::ostream& out, bool check) {
  const GridSpec spec = grid_spec_from(cfg);
  const auto rows = sweep(spec);
  write_sweep_csv(out, spec.channel, rows);
  if (!check) return kExitOk;
  const SweepAgreement a = classification_agreement(rows);
  return check_result(a.fraction() >= 0.95, "verdict agrees with region membership on " +
                                                std::to_string(a.agreeing) + "/" + std::to_string(a.compared) +
                                                " non-boundary rows");
}

int cmd_saturated(const Config& cfg, std::ostream& out, bool check) {
  const double epsilon = cfg.get_double("epsilon", 0.25);
  const long horizon = cfg.get_long("horizon", 1'000'000);
  std::vector<DeterministicPolicy> tables;
  for (const auto& name : cfg.get_strings("policy", {"all"})) {
    if (name == "all") {
      for (int c = 0; c < kNumPolicies; ++c) tables.push_back(DeterministicPolicy::from_code(c));
      continue;
    }
    const PolicyConfig p = parse_policy(name);
    if (const auto* corner = std::get_if<FixedCornerConfig>(&p)) tables.push_back(corner_policy(corner->corner));
    else if (const auto* table = std::get_if<FixedTableConfig>(&p)) tables.push_back(table->table);
    else throw ConfigError("saturated runs take corner_bX, table_N or all");
  }
  const auto rows = saturated_check(epsilon, tables, horizon, cfg.get_seed("seed", 1),
                                    static_cast<int>(cfg.get_long("threads", 1)));
  write_saturated_csv(out, epsilon, rows);
  if (!check) return kExitOk;
  long inside = 0;
  for (const auto& r : rows) inside += r.within(3.0) ? 1 : 0;
  return check_result(inside == static_cast<long>(rows.size()),
                      std::to_string(inside) + "/" + std::to_string(rows.size()) + " tables within 3 standard errors");
}

int cmd_psi(const Config& cfg, std::ostream& out, bool check) {
  const PsiReport report =
      verify_psi(cfg.get_double("epsilon_step", 1e-3), static_cast<int>(cfg.get_long("ratio_points", 400)));
  write_psi_csv(out, report);
  if (!check) return kExitOk;
  return check_result(report.passes(), "psi' minima against their bounds, global minimum " +
                                           std::to_string(report.global_minimum));
}

int cmd_gap(const Config& cfg, std::ostream& out, bool check) {
  const double epsilon = cfg.get_double("epsilon", 0.25);
  const auto corner = parse_corner(cfg.get_string("corner", "b2"));
  if (!corner) throw ConfigError("unknown corner: " + cfg.get_string("corner", ""));
  std::vector<int> frames;
  for (double t : cfg.get_doubles("T_list", {1, 2, 5, 10, 25, 100, 1000})) {
    if (t != std::floor(t) || t < 1) throw ConfigError("T_list entries must be positive integers");
    frames.push_back(static_cast<int>(t));
  }
  const auto rows = throughput_gap(epsilon, frames, *corner, cfg.get_long("horizon", 1'000'000), cfg.get_seed("seed", 1));
  write_gap_csv(out, epsilon, *corner, rows);
  if (!check) return kExitOk;
  bool ok = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].frame_length > rows[i - 1].frame_length && rows[i].deficit > rows[i - 1].deficit + 3e-3) ok = false;
  }
  return check_result(ok, "deficit non-increasing in T up to 3e-3");
}

int cmd_iid(const Config& cfg, std::ostream& out, bool check) {
  const double p1 = cfg.get_double("p1", 0.5);
  const double p2 = cfg.get_double("p2", 0.5);
  const auto rows = iid_suite(p1, p2, cfg.get_doubles("rho_points", {0.6, 0.8, 0.9, 1.1, 1.2}),
                              cfg.get_long("horizon", 100'000), cfg.get_seed("seed", 1));
  write_iid_csv(out, p1, p2, rows);
  if (!check) return kExitOk;
  bool ok = true;
  for (const auto& r : rows) {
    if (r.rho < 1.0 && r.metrics.verdict != Verdict::stable) ok = false;
    if (r.rho > 1.0 && r.metrics.verdict != Verdict::unstable) ok = false;
  }
  return check_result(ok, "loads below 1 stable and above 1 unstable");
}

int cmd_trace(const Config& cfg, std::ostream& out, bool check) {
  Config with_trace = cfg;
  if (!cfg.has("trace_every")) with_trace.set("trace_every", "1");
  const SimConfig sim = sim_config_from(with_trace);
  const Metrics m = run(sim, &out);
  std::cerr << "q_avg=" << m.q_avg << " rate1=" << m.rate1 << " rate2=" << m.rate2
            << " switches=" << m.switch_count << " verdict=" << verdict_name(m.verdict) << '\n';
  if (!check) return kExitOk;
  const bool conserved = sim.saturated || (m.final_q1 == m.arrivals1 - m.d1 && m.final_q2 == m.arrivals2 - m.d2);
  return check_result(conserved, "queue conservation");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-queue scheduling with switchover delay and Markov ON/OFF channels"};
  app.require_subcommand(1);
  app.fallthrough();

  std::map<std::string, std::string> overrides;
  std::string config_path;
  std::string out_path;
  bool check = false;
  app.add_option("--config", config_path, "key=value settings file; flags override it");
  app.add_option("--out", out_path, "output CSV path (default stdout)");
  app.add_flag("--check", check, "verify the result; exit code 2 on failure");

  const std::vector<std::pair<std::string, std::string>> flags = {
      {"--epsilon", "epsilon"},      {"--p1", "p1"},
      {"--p2", "p2"},                {"--policy", "policy"},
      {"--T", "T"},                  {"--k", "k"},
      {"--lambda1", "lambda1"},      {"--lambda2", "lambda2"},
      {"--horizon", "horizon"},      {"--warmup", "warmup"},
      {"--seed", "seed"},            {"--step", "step"},
      {"--margin", "boundary_margin"}, {"--threads", "threads"},
      {"--corner", "corner"},        {"--T-list", "T_list"},
      {"--rho", "rho_points"},       {"--epsilon-step", "epsilon_step"},
      {"--ratio-points", "ratio_points"}, {"--trace-every", "trace_every"},
      {"--arrivals", "arrival_kind"}, {"--saturated", "saturated"},
  };
  for (const auto& [flag, key] : flags) {
    app.add_option_function<std::string>(flag, [&overrides, key = key](const std::string& v) { overrides[key] = v; },
                                         "sets config key " + key);
  }

  using Handler = int (*)(const Config&, std::ostream&, bool);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
      {"region", "export region corners and halfspaces", cmd_region},
      {"sweep", "simulate policies over an arrival-rate grid", cmd_sweep},
      {"saturated", "saturated rates of fixed tables against the analytic rates", cmd_saturated},
      {"psi", "minimise psi' over the regions where myopic and FBDC differ", cmd_psi},
      {"gap", "throughput deficit of a corner table restarted every T slots", cmd_gap},
      {"iid", "gated and exhaustive service on i.i.d. channels", cmd_iid},
      {"trace", "single run with a per-slot trace", cmd_trace},
  };
  for (const auto& [name, help, handler] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    Config cfg = config_path.empty() ? Config{} : Config::load(config_path);
    for (const auto& [key, value] : overrides) cfg.set(key, value);
    cfg.require_known(known_config_keys());
    OutputTarget target(out_path);
    for (const auto& [name, help, handler] : commands) {
      if (app.got_subcommand(name)) {
        const int code = handler(cfg, *target.stream, check);
        target.stream->flush();
        return code;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
