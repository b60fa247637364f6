#pragma once

#include "mmsched/channels.hpp"
#include "mmsched/experiments.hpp"
#include "mmsched/policies.hpp"
#include "mmsched/simulator.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmsched {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Flat `key = value` settings. Blank lines and everything after `#` are
 * ignored; later assignments override earlier ones. All accessors throw
 * ConfigError on malformed values.
 */
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_seed(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated numbers.
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;

  /// Throws ConfigError naming the first key not in `known`.
  void require_known(const std::vector<std::string>& known) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Keys accepted by any subcommand.
const std::vector<std::string>& known_config_keys();

/// `p1`/`p2` select i.i.d. channels; otherwise Gilbert-Elliott with `epsilon` (default 0.25).
ChannelModel channel_from(const Config& config);
/// `policy` is a comma-separated list of policy names; `T` and `k` apply to all.
std::vector<PolicyConfig> policies_from(const Config& config);
SimConfig sim_config_from(const Config& config);
GridSpec grid_spec_from(const Config& config);

}  // namespace mmsched
