#include "cooprpl/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cooprpl/errors.hpp"
#include "cooprpl/random.hpp"

namespace cooprpl {

void validate(const Region& region) {
  if (!(region.side_length > 0.0)) throw SimError(ErrorKind::InvalidArgument, "region side_length must be positive");
}

void validate(const ChannelParams& p) {
  if (!(p.tx_power_w > 0.0)) throw SimError(ErrorKind::InvalidArgument, "tx_power must be positive");
  if (!(p.path_loss_exponent >= 2.0)) throw SimError(ErrorKind::InvalidArgument, "path_loss_exponent must be >= 2");
  if (!(p.noise_floor_w > 0.0)) throw SimError(ErrorKind::InvalidArgument, "noise_floor must be positive");
  if (!(p.tx_range_m > 0.0)) throw SimError(ErrorKind::InvalidArgument, "tx_range must be positive");
  if (!(p.lsr_value >= 0.0 && p.lsr_value <= 1.0)) throw SimError(ErrorKind::InvalidArgument, "probability out of range");
}

namespace {

bool within_range(const NodePlacement& a, const NodePlacement& b, double range) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy <= range * range;
}

}  // namespace

PlacementResult place_nodes(const Region& region, double intensity, std::uint64_t seed,
                            const ChannelParams& params, int max_attempts) {
  validate(region);
  if (!(intensity > 0.0)) throw SimError(ErrorKind::InvalidArgument, "intensity must be positive");
  const double side = region.side_length;
  for (int attempt = 0; attempt < std::max(1, max_attempts); ++attempt) {
    rng::Stream stream(seed, rng::Tag::Placement, static_cast<std::uint64_t>(attempt));
    const std::uint64_t count = stream.poisson(intensity * side * side);
    PlacementResult result;
    result.attempts = attempt + 1;
    result.nodes.reserve(count + 1);
    result.nodes.push_back({kGateway, side / 2.0, side / 2.0});
    for (std::uint64_t i = 0; i < count; ++i) {
      const double x = stream.uniform() * side;
      const double y = stream.uniform() * side;
      result.nodes.push_back({static_cast<NodeId>(i + 1), x, y});
    }
    const auto& gw = result.nodes.front();
    const bool connected = std::any_of(result.nodes.begin() + 1, result.nodes.end(),
                                       [&](const NodePlacement& n) { return within_range(gw, n, params.tx_range_m); });
    if (connected) return result;
  }
  throw SimError(ErrorKind::DisconnectedRoot, "disconnected-root: gateway has no neighbor within tx_range");
}

double path_loss_linear(double distance, const ChannelParams& params) {
  if (!(distance > 0.0)) throw SimError(ErrorKind::DegenerateLink, "degenerate-link: distance must be positive");
  const double loss_db = params.reference_loss_db + 10.0 * params.path_loss_exponent * std::log10(distance);
  return std::pow(10.0, -loss_db / 10.0);
}

double fading_gain(NodeId src, NodeId dst, std::int64_t slot, std::uint64_t seed) {
  const double u = rng::uniform(seed, rng::Tag::Fading, {src, dst, static_cast<std::uint64_t>(slot)});
  // 1 - u lies in (0, 1], so the log is finite.
  return -std::log1p(-u);
}

double link_success_probability(const LinkModel& link, const ChannelParams& params) {
  if (params.mode == ChannelMode::SweptLsr) return params.lsr_value;
  const double mean_snr = link.mean_rx_power / params.noise_floor_w;
  if (!(mean_snr > 0.0)) return 0.0;
  return std::exp(-from_db(params.sinr_threshold_db) / mean_snr);
}

Topology::Topology(std::vector<NodePlacement> nodes, ChannelParams params, std::uint64_t seed)
    : nodes_(std::move(nodes)), params_(params), seed_(seed), neighbors_(nodes_.size()) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id != i) throw SimError(ErrorKind::InvalidArgument, "node ids must be dense and ordered");
  }
  for (std::size_t a = 0; a < nodes_.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes_.size(); ++b) {
      if (within_range(nodes_[a], nodes_[b], params_.tx_range_m)) {
        neighbors_[a].push_back(static_cast<NodeId>(b));
        neighbors_[b].push_back(static_cast<NodeId>(a));
      }
    }
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
  neighbor_success_.resize(nodes_.size());
  for (NodeId a = 0; a < nodes_.size(); ++a) {
    for (NodeId b : neighbors_[a]) neighbor_success_[a].push_back(link(a, b).success_prob);
  }
}

double Topology::success_probability(NodeId src, NodeId dst) const {
  const auto& list = neighbors_[src];
  const auto it = std::lower_bound(list.begin(), list.end(), dst);
  if (it == list.end() || *it != dst) return 0.0;
  return neighbor_success_[src][static_cast<std::size_t>(it - list.begin())];
}

double Topology::distance(NodeId a, NodeId b) const {
  return std::hypot(nodes_[a].x - nodes_[b].x, nodes_[a].y - nodes_[b].y);
}

bool Topology::link_exists(NodeId a, NodeId b) const {
  if (a == b) return false;
  const auto& list = neighbors_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

double Topology::mean_rx_power(NodeId tx, NodeId rx) const {
  return params_.tx_power_w * path_loss_linear(distance(tx, rx), params_);
}

LinkModel Topology::link(NodeId src, NodeId dst) const {
  LinkModel l;
  l.src = src;
  l.dst = dst;
  l.distance = distance(src, dst);
  l.mean_rx_power = mean_rx_power(src, dst);
  l.success_prob = link_success_probability(l, params_);
  return l;
}

double Topology::compute_sinr(NodeId rx, NodeId tx, std::span<const NodeId> concurrent_transmitters,
                              std::int64_t slot, FadingMode mode) const {
  auto gain = [&](NodeId from) {
    return mode == FadingMode::PerSlot ? fading_gain(from, rx, slot, seed_) : 1.0;
  };
  const double signal = mean_rx_power(tx, rx) * gain(tx);
  double interference = 0.0;
  for (NodeId other : concurrent_transmitters) {
    if (other == tx || other == rx) continue;
    interference += mean_rx_power(other, rx) * gain(other);
  }
  return to_db(signal / (params_.noise_floor_w + interference));
}

std::string Topology::placements_csv() const {
  std::ostringstream out;
  out << "node_id,x,y\n";
  char buf[96];
  for (const auto& n : nodes_) {
    std::snprintf(buf, sizeof buf, "%u,%.6f,%.6f\n", n.id, n.x, n.y);
    out << buf;
  }
  return out.str();
}

std::vector<NodeId> neighbors(NodeId node, std::span<const NodePlacement> placements, const ChannelParams& params) {
  std::vector<NodeId> out;
  const auto& self = placements[node];
  for (const auto& other : placements) {
    if (other.id != node && within_range(self, other, params.tx_range_m)) out.push_back(other.id);
  }
  return out;
}

}  // namespace cooprpl
