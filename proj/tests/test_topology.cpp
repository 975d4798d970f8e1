#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cooprpl/errors.hpp"
#include "cooprpl/topology.hpp"

using namespace cooprpl;

TEST_SUITE("topology") {

TEST_CASE("path loss at the reference distance equals the reference loss") {
  ChannelParams p;
  p.reference_loss_db = 40.0;
  CHECK(path_loss_linear(1.0, p) == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("path loss at 10 m with exponent 2 and no reference loss is 0.01") {
  ChannelParams p;
  p.reference_loss_db = 0.0;
  p.path_loss_exponent = 2.0;
  CHECK(path_loss_linear(10.0, p) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("doubling distance with exponent 3 scales attenuation by 1/8") {
  ChannelParams p;
  p.path_loss_exponent = 3.0;
  for (double d : {1.0, 7.5, 33.0, 120.0}) {
    CHECK(path_loss_linear(2.0 * d, p) / path_loss_linear(d, p) == doctest::Approx(0.125).epsilon(1e-12));
  }
}

TEST_CASE("path loss is strictly decreasing in distance") {
  ChannelParams p;
  double prev = path_loss_linear(0.5, p);
  for (double d = 1.0; d < 400.0; d *= 1.1) {
    const double cur = path_loss_linear(d, p);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("zero distance is a degenerate link") {
  ChannelParams p;
  try {
    (void)path_loss_linear(0.0, p);
    FAIL("expected an exception");
  } catch (const SimError& e) {
    CHECK(e.kind() == ErrorKind::DegenerateLink);
    CHECK(std::string(e.what()).find("degenerate-link") != std::string::npos);
  }
}

TEST_CASE("Rayleigh fading has unit mean and is nonnegative and repeatable") {
  double sum = 0.0;
  bool nonnegative = true;
  constexpr int kDraws = 1'000'000;
  for (int i = 0; i < kDraws; ++i) {
    const double g = fading_gain(3, 7, i, 42);
    nonnegative = nonnegative && g >= 0.0;
    sum += g;
  }
  CHECK(nonnegative);
  CHECK(sum / kDraws == doctest::Approx(1.0).epsilon(0.01));
  CHECK(fading_gain(3, 7, 99, 42) == fading_gain(3, 7, 99, 42));
  CHECK(fading_gain(3, 7, 99, 42) != fading_gain(3, 7, 99, 43));
}

TEST_CASE("fading draws follow the exponential distribution") {
  // Empirical CDF at a few points against 1 - exp(-x).
  constexpr int kDraws = 200'000;
  const std::vector<double> xs{0.1, 0.5, 1.0, 2.0, 4.0};
  std::vector<int> below(xs.size(), 0);
  for (int i = 0; i < kDraws; ++i) {
    const double g = fading_gain(1, 2, i, 5);
    for (std::size_t k = 0; k < xs.size(); ++k) below[k] += g <= xs[k];
  }
  for (std::size_t k = 0; k < xs.size(); ++k) {
    CHECK(static_cast<double>(below[k]) / kDraws == doctest::Approx(1.0 - std::exp(-xs[k])).epsilon(0.01));
  }
}

Topology line_topology(std::vector<double> xs, ChannelParams p = {}) {
  std::vector<NodePlacement> nodes;
  for (std::size_t i = 0; i < xs.size(); ++i) nodes.push_back({static_cast<NodeId>(i), xs[i], 0.0});
  return Topology(std::move(nodes), p, 9);
}

TEST_CASE("SINR without interferers is the SNR") {
  ChannelParams p;
  const auto topo = line_topology({0.0, 20.0}, p);
  const double received = p.tx_power_w * std::pow(10.0, -(p.reference_loss_db + 10.0 * p.path_loss_exponent * std::log10(20.0)) / 10.0);
  const double expected_db = 10.0 * std::log10(received / p.noise_floor_w);
  CHECK(topo.compute_sinr(1, 0, {}, 0, FadingMode::Expected) == doctest::Approx(expected_db).epsilon(1e-12));
  const double g = fading_gain(0, 1, 17, 9);
  CHECK(topo.compute_sinr(1, 0, {}, 17, FadingMode::PerSlot) ==
        doctest::Approx(10.0 * std::log10(received * g / p.noise_floor_w)).epsilon(1e-12));
}

TEST_CASE("an equally strong interferer drives SINR to about 0 dB") {
  ChannelParams p;
  const auto topo = line_topology({0.0, 20.0, 40.0}, p);
  const std::vector<NodeId> interferers{2};
  CHECK(topo.compute_sinr(1, 0, interferers, 0, FadingMode::Expected) == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("each added interferer strictly lowers SINR") {
  ChannelParams p;
  const auto topo = line_topology({0.0, 10.0, 25.0, 40.0, 55.0, 70.0}, p);
  for (auto mode : {FadingMode::Expected, FadingMode::PerSlot}) {
    std::vector<NodeId> interferers;
    double prev = topo.compute_sinr(1, 0, interferers, 3, mode);
    for (NodeId k = 2; k < 6; ++k) {
      interferers.push_back(k);
      const double cur = topo.compute_sinr(1, 0, interferers, 3, mode);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("swept LSR mode gives every link the configured probability") {
  ChannelParams p;
  p.mode = ChannelMode::SweptLsr;
  p.lsr_value = 0.7;
  const auto topo = line_topology({0.0, 5.0, 30.0, 49.0}, p);
  for (NodeId a = 0; a < 4; ++a) {
    for (NodeId b : topo.neighbors(a)) CHECK(topo.success_probability(a, b) == 0.7);
  }
}

TEST_CASE("physical success probability follows the Rayleigh outage form") {
  ChannelParams p;
  LinkModel link;
  link.mean_rx_power = p.noise_floor_w * from_db(p.sinr_threshold_db);
  CHECK(link_success_probability(link, p) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  link.mean_rx_power = 1e6;
  CHECK(link_success_probability(link, p) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("neighbors use a closed ball and are symmetric") {
  ChannelParams p;
  p.tx_range_m = 50.0;
  std::vector<NodePlacement> nodes{{0, 0.0, 0.0}, {1, 30.0, 40.0}, {2, 50.0, 0.0}, {3, 200.0, 200.0}};
  CHECK(neighbors(0, nodes, p) == std::vector<NodeId>{1, 2});
  CHECK(neighbors(3, nodes, p).empty());

  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> pos(0.0, 300.0);
  std::vector<NodePlacement> cloud;
  for (NodeId i = 0; i < 120; ++i) cloud.push_back({i, pos(gen), pos(gen)});
  const Topology topo(cloud, p, 1);
  for (NodeId a = 0; a < cloud.size(); ++a) {
    const auto list = neighbors(a, cloud, p);
    CHECK(std::vector<NodeId>(topo.neighbors(a).begin(), topo.neighbors(a).end()) == list);
    for (NodeId b : list) {
      CHECK(a != b);
      CHECK(topo.link_exists(b, a));
      CHECK(std::hypot(cloud[a].x - cloud[b].x, cloud[a].y - cloud[b].y) <= 50.0);
    }
  }
}

TEST_CASE("placement is deterministic and puts the gateway at the center") {
  Region r{300.0};
  ChannelParams p;
  const auto a = place_nodes(r, 80.0 / (300.0 * 300.0), 11, p);
  const auto b = place_nodes(r, 80.0 / (300.0 * 300.0), 11, p);
  REQUIRE(a.nodes.size() == b.nodes.size());
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    CHECK(a.nodes[i].id == i);
    CHECK(a.nodes[i].x == b.nodes[i].x);
    CHECK(a.nodes[i].y == b.nodes[i].y);
    CHECK(a.nodes[i].x >= 0.0);
    CHECK(a.nodes[i].x <= 300.0);
  }
  CHECK(a.nodes[0].x == 150.0);
  CHECK(a.nodes[0].y == 150.0);
}

TEST_CASE("placement node count follows the Poisson mean") {
  Region r{300.0};
  ChannelParams p;
  p.tx_range_m = 1000.0;
  double sum = 0.0;
  constexpr int kRuns = 2000;
  for (int s = 0; s < kRuns; ++s) sum += static_cast<double>(place_nodes(r, 80.0 / 90000.0, s, p).nodes.size() - 1);
  CHECK(sum / kRuns == doctest::Approx(80.0).epsilon(0.01));
}

TEST_CASE("an empty region is reported as disconnected-root") {
  Region r{300.0};
  ChannelParams p;
  try {
    (void)place_nodes(r, 1e-9, 3, p, 4);
    FAIL("expected an exception");
  } catch (const SimError& e) {
    CHECK(e.kind() == ErrorKind::DisconnectedRoot);
  }
}

}  // TEST_SUITE
