#include "mmsched/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace mmsched {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad number for " + key + ": '" + text + "'");
}

template <class T>
T to_integer(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError("bad integer for " + key + ": '" + text + "'");
  }
  return v;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": empty key");
    config.set(key, trim(line.substr(eq + 1)));
  }
  return config;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse(in, path);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(key, values_.at(key)) : fallback;
}

long Config::get_long(const std::string& key, long fallback) const {
  return has(key) ? to_integer<long>(key, values_.at(key)) : fallback;
}

std::uint64_t Config::get_seed(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? to_integer<std::uint64_t>(key, values_.at(key)) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = values_.at(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean for " + key + ": '" + v + "'");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : split_commas(values_.at(key))) out.push_back(to_double(key, item));
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& key,
                                             const std::vector<std::string>& fallback) const {
  return has(key) ? split_commas(values_.at(key)) : fallback;
}

void Config::require_known(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key: " + key);
    }
  }
}

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "epsilon", "p1",        "p2",       "policy",  "T",        "k",
      "lambda1", "lambda2",   "horizon",  "warmup",  "seed",     "arrival_kind",
      "saturated", "trace_every", "step", "boundary_margin", "threads", "corner",
      "T_list",  "rho_points", "epsilon_step", "ratio_points"};
  return keys;
}

ChannelModel channel_from(const Config& config) {
  try {
    if (config.has("p1") || config.has("p2")) {
      if (config.has("epsilon")) throw ConfigError("give either epsilon or p1/p2, not both");
      return ChannelModel::iid(config.get_double("p1", 0.5), config.get_double("p2", 0.5));
    }
    return ChannelModel::gilbert_elliott(config.get_double("epsilon", 0.25));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<PolicyConfig> policies_from(const Config& config) {
  const long T = config.get_long("T", 25);
  const long k = config.get_long("k", 1);
  std::vector<PolicyConfig> out;
  try {
    for (const auto& name : config.get_strings("policy", {"fbdc"})) {
      out.push_back(parse_policy(name, static_cast<int>(T), static_cast<int>(k)));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (out.empty()) throw ConfigError("policy list is empty");
  return out;
}

namespace {

ArrivalKind arrival_kind_from(const Config& config) {
  const std::string kind = config.get_string("arrival_kind", "bernoulli");
  if (kind == "bernoulli") return ArrivalKind::bernoulli;
  if (kind == "poisson") return ArrivalKind::poisson;
  throw ConfigError("arrival_kind must be bernoulli or poisson");
}

}  // namespace

SimConfig sim_config_from(const Config& config) {
  SimConfig sim;
  sim.lambda1 = config.get_double("lambda1", 0.0);
  sim.lambda2 = config.get_double("lambda2", 0.0);
  sim.arrival_kind = arrival_kind_from(config);
  sim.channel = channel_from(config);
  const auto policies = policies_from(config);
  if (policies.size() != 1) throw ConfigError("a single run takes exactly one policy");
  sim.policy = policies.front();
  sim.horizon = config.get_long("horizon", 100'000);
  sim.warmup = config.get_long("warmup", sim.horizon / 10);
  sim.seed = config.get_seed("seed", 1);
  sim.saturated = config.get_bool("saturated", false);
  sim.trace_every = config.get_long("trace_every", 0);
  try {
    validate(sim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return sim;
}

GridSpec grid_spec_from(const Config& config) {
  GridSpec spec;
  spec.channel = channel_from(config);
  spec.step = config.get_double("step", 0.01);
  spec.boundary_margin = config.get_double("boundary_margin", 0.02);
  spec.policies = policies_from(config);
  spec.arrival_kind = arrival_kind_from(config);
  spec.horizon = config.get_long("horizon", 100'000);
  spec.warmup = config.get_long("warmup", spec.horizon / 10);
  spec.seed = config.get_seed("seed", 1);
  spec.threads = static_cast<int>(config.get_long("threads", 1));
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

}  // namespace mmsched
