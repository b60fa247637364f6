#include "mmsched/config.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace mmsched;

namespace {

Config parse(const std::string& text) {
  std::istringstream in(text);
  return Config::parse(in);
}

}  // namespace

TEST(Config, ParsesKeyValuesAndComments) {
  const auto c = parse("# header\nepsilon = 0.3  # inline\n\n  horizon=5000\npolicy = fbdc, myopic\n");
  EXPECT_DOUBLE_EQ(c.get_double("epsilon", 0), 0.3);
  EXPECT_EQ(c.get_long("horizon", 0), 5000);
  EXPECT_EQ(c.get_strings("policy", {}), (std::vector<std::string>{"fbdc", "myopic"}));
  EXPECT_EQ(c.get_long("warmup", 17), 17);
}

TEST(Config, LaterAssignmentsWin) {
  EXPECT_EQ(parse("seed = 1\nseed = 9\n").get_seed("seed", 0), 9u);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse("= 3\n"), ConfigError);
  EXPECT_THROW(parse("horizon = 1e5x\n").get_long("horizon", 0), ConfigError);
  EXPECT_THROW(parse("epsilon = abc\n").get_double("epsilon", 0), ConfigError);
  EXPECT_THROW(parse("saturated = maybe\n").get_bool("saturated", false), ConfigError);
  EXPECT_THROW(parse("colour = red\n").require_known(known_config_keys()), ConfigError);
  EXPECT_THROW(Config::load("/nonexistent/file.cfg"), ConfigError);
}

TEST(Config, ChannelSelection) {
  EXPECT_TRUE(channel_from(parse("epsilon = 0.1\n")).is_markov());
  const auto iid = channel_from(parse("p1 = 0.3\np2 = 0.7\n"));
  EXPECT_FALSE(iid.is_markov());
  EXPECT_DOUBLE_EQ(iid.p2(), 0.7);
  EXPECT_THROW(channel_from(parse("epsilon = 0.1\np1 = 0.5\n")), ConfigError);
  EXPECT_THROW(channel_from(parse("epsilon = 0.7\n")), ConfigError);
}

TEST(Config, SimConfig) {
  const auto s = sim_config_from(parse("lambda1 = 0.1\nlambda2 = 0.2\npolicy = myopic\nT = 10\nk = 2\nhorizon = 8000\n"));
  EXPECT_DOUBLE_EQ(s.lambda2, 0.2);
  EXPECT_EQ(s.warmup, 800);
  EXPECT_EQ(policy_name(s.policy), "myopic");
  EXPECT_EQ(lookahead(s.policy), 2);
  EXPECT_THROW(sim_config_from(parse("policy = fbdc, gated\n")), ConfigError);
  EXPECT_THROW(sim_config_from(parse("lambda1 = 2\n")), ConfigError);
  EXPECT_THROW(sim_config_from(parse("arrival_kind = uniform\n")), ConfigError);
}

TEST(Config, GridSpec) {
  const auto g = grid_spec_from(parse("epsilon = 0.4\nstep = 0.05\npolicy = fbdc,myopic\nT = 10\nthreads = 2\n"));
  EXPECT_EQ(g.policies.size(), 2u);
  EXPECT_EQ(frame_length(g.policies[1]), 10);
  EXPECT_EQ(g.threads, 2);
  EXPECT_THROW(grid_spec_from(parse("step = 0\n")), ConfigError);
  EXPECT_THROW(grid_spec_from(parse("p1 = 0.5\np2 = 0.5\npolicy = fbdc\n")), ConfigError);
}
