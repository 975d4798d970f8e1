#include <doctest.h>

#include <random>
#include <string>

#include "cooprpl/config.hpp"
#include "cooprpl/errors.hpp"

using namespace cooprpl;

namespace {

std::string config_error(const std::string& text) {
  try {
    (void)parse_config(text, "test.ini");
  } catch (const SimError& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("an empty file yields the documented defaults") {
  const RunConfig c = parse_config("");
  CHECK(c == RunConfig{});
  CHECK(c.scenario.trickle_imin_ms == 100.0);
  CHECK(c.scenario.hop.max_retx == 3);
  CHECK(c.scenario.hop.relay_retx == 1);
  CHECK(c.scenario.p_coop == 1.0);
  CHECK(c.scenario.quiescence_slots == 20);
  CHECK(c.scenario.etx_max == 16.0);
  CHECK(c.scenario.etx_alpha == 0.3);
  CHECK(c.scenario.parent_hysteresis == 0.5);
  CHECK(c.scenario.forwarding_set_size == 3);
  CHECK(c.scenario.n_packets == 1000);
  CHECK(c.scenario.region.side_length == 300.0);
  CHECK(c.scenario.channel.tx_range_m == 50.0);
  CHECK(c.sweep.seeds == 20);
}

TEST_CASE("weights that do not sum to one are named") {
  const auto msg = config_error("[routing]\nweights = 0.5, 0.5, 0.5, 0.5\n");
  CHECK(contains(msg, "weights must sum to 1"));
  CHECK(contains(msg, "test.ini:2:"));
}

TEST_CASE("probabilities outside [0,1] are named") {
  const auto msg = config_error("# comment\n\n[channel]\nlsr_value = 1.3\n");
  CHECK(contains(msg, "probability out of range"));
  CHECK(contains(msg, "test.ini:4:"));
}

TEST_CASE("unknown keys, sections and malformed values are rejected with line numbers") {
  CHECK(contains(config_error("[rpl]\nfoo = 1\n"), "test.ini:2: unknown key 'foo' in section [rpl]"));
  CHECK(contains(config_error("[nope]\n"), "unknown section 'nope'"));
  CHECK(contains(config_error("[scenario]\nn_packets = ten\n"), "test.ini:2: malformed integer"));
  CHECK(contains(config_error("[scenario]\nseed\n"), "expected 'key = value'"));
  CHECK(contains(config_error("[routing]\nprotocol = AODV\n"), "unknown protocol"));
  CHECK(contains(config_error("[sweep]\nvalues = 0.7, 0.6\n"), "test.ini"));
  CHECK_FALSE(config_error("[scenario]\nn_packets = 0\n").empty());
}

TEST_CASE("a missing file is an I/O error") {
  try {
    (void)load_config("/nonexistent/cooprpl.ini");
    FAIL("expected an exception");
  } catch (const SimError& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}

TEST_CASE("values are parsed into the right fields") {
  const RunConfig c = parse_config(
      "seed = 42\n"
      "[channel]\nmode = swept_lsr\nlsr_value = 0.55\n"
      "[routing]\nprotocol = OppRPL\nclass = A\nweights = 0.4, 0.3, 0.2, 0.1\n"
      "[forwarding]\ncount_relay_as_retx = false\n"
      "[sweep]\naxis = density\nvalues = 1, 2, 4\nprotocols = RPL, CoopRPL\nclasses = BE\nseeds = 3\n");
  CHECK(c.scenario.seed == 42);
  CHECK(c.scenario.channel.mode == ChannelMode::SweptLsr);
  CHECK(c.scenario.channel.lsr_value == 0.55);
  CHECK(c.scenario.protocol == Protocol::OppRpl);
  CHECK(c.scenario.routing_class == RoutingClass::ClassA);
  REQUIRE(c.scenario.weights);
  CHECK(c.scenario.weights->w_traffic == 0.3);
  CHECK_FALSE(c.scenario.count_relay_as_retx);
  CHECK(c.sweep.axis == SweepAxis::DensityRatio);
  CHECK(c.sweep.values == std::vector<double>{1, 2, 4});
  CHECK(c.sweep.protocols == std::vector<Protocol>{Protocol::Rpl, Protocol::CoopRpl});
  CHECK(c.sweep.classes == std::vector<RoutingClass>{RoutingClass::BestEffort});
  CHECK(c.sweep.seeds == 3);
}

TEST_CASE("echoed config parses back to the same config") {
  CHECK(parse_config(echo_config(RunConfig{})) == RunConfig{});
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    RunConfig c;
    c.scenario.seed = gen();
    c.scenario.channel.lsr_value = u(gen);
    c.scenario.channel.sinr_threshold_db = 50.0 * u(gen);
    c.scenario.density_ratio = 0.1 + 5.0 * u(gen);
    c.scenario.p_coop = u(gen);
    c.scenario.etx_alpha = u(gen);
    c.scenario.slot_ms = 1.0 + 20.0 * u(gen);
    c.scenario.protocol = static_cast<Protocol>(gen() % 3);
    c.scenario.routing_class = static_cast<RoutingClass>(gen() % 4);
    if (trial % 2) {
      const double a = u(gen), b = u(gen) * (1.0 - a), d = u(gen) * (1.0 - a - b);
      c.scenario.weights = RateWeights{a, b, d, 1.0 - a - b - d};
      if (std::abs(a + b + d + (1.0 - a - b - d) - 1.0) > 1e-9) continue;
    }
    c.sweep.axis = trial % 3 ? SweepAxis::Lsr : SweepAxis::DensityRatio;
    c.sweep.values = {0.1 + 0.01 * u(gen), 0.5, 0.75};
    c.sweep.seeds = 1 + static_cast<int>(gen() % 50);
    CHECK(parse_config(echo_config(c)) == c);
  }
}

TEST_CASE("set_config_value accepts qualified and bare keys") {
  RunConfig c;
  set_config_value(c, "rpl.trickle_imin_ms", "200");
  set_config_value(c, "max_retx", "5");
  CHECK(c.scenario.trickle_imin_ms == 200.0);
  CHECK(c.scenario.hop.max_retx == 5);
  CHECK_THROWS_AS(set_config_value(c, "rpl.nope", "1"), SimError);
}

TEST_CASE("every schema key appears in the echo") {
  const auto echo = echo_config(RunConfig{});
  for (const auto& k : config_schema()) {
    CHECK(contains(echo, "[" + k.section + "]"));
    CHECK(contains(echo, "\n" + k.name + " = "));
    CHECK_FALSE(k.help.empty());
  }
}

}  // TEST_SUITE
