#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cooprpl {

using NodeId = std::uint32_t;
inline constexpr NodeId kGateway = 0;

struct Region {
  double side_length = 300.0;  // meters

  friend bool operator==(const Region&, const Region&) = default;
};

struct NodePlacement {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
};

enum class ChannelMode { Physical, SweptLsr };

struct ChannelParams {
  double tx_power_w = 2.0;
  double path_loss_exponent = 3.0;
  double reference_loss_db = 40.0;  // at 1 m
  double noise_floor_w = 1e-13;     // -100 dBm
  double tx_range_m = 50.0;
  ChannelMode mode = ChannelMode::Physical;
  double lsr_value = 0.7;             // SweptLsr only
  double sinr_threshold_db = 36.0;    // outage threshold, Physical only

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

void validate(const Region& region);
void validate(const ChannelParams& params);

struct LinkModel {
  NodeId src = 0;
  NodeId dst = 0;
  double distance = 0.0;
  double mean_rx_power = 0.0;  // watts, fading mean
  double success_prob = 0.0;
};

struct PlacementResult {
  std::vector<NodePlacement> nodes;  // nodes[i].id == i, gateway first
  int attempts = 1;                  // sub-seeds consumed
};

// Poisson point process of meters plus a gateway at the region center.
// Retries with the next sub-seed while the gateway has no neighbor; throws
// SimError(DisconnectedRoot) after `max_attempts`.
PlacementResult place_nodes(const Region& region, double intensity, std::uint64_t seed,
                            const ChannelParams& params, int max_attempts = 32);

// Log-distance attenuation factor (linear, <= 1 past the reference distance).
double path_loss_linear(double distance, const ChannelParams& params);

// Rayleigh power gain: Exp(1), a pure function of (link, slot, seed).
double fading_gain(NodeId src, NodeId dst, std::int64_t slot, std::uint64_t seed);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

// Success probability of a single transmission on `link` in the absence of
// interference: lsr_value in SweptLsr mode, exp(-threshold/mean_snr) otherwise.
double link_success_probability(const LinkModel& link, const ChannelParams& params);

enum class FadingMode { Expected, PerSlot };

// Static geometry plus channel: neighbor lists and link models are computed
// once; SINR and fading are evaluated on demand.
class Topology {
 public:
  Topology(std::vector<NodePlacement> nodes, ChannelParams params, std::uint64_t seed);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<NodePlacement>& nodes() const { return nodes_; }
  const ChannelParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

  double distance(NodeId a, NodeId b) const;
  bool link_exists(NodeId a, NodeId b) const;
  LinkModel link(NodeId src, NodeId dst) const;
  std::span<const NodeId> neighbors(NodeId node) const { return neighbors_[node]; }

  double mean_rx_power(NodeId tx, NodeId rx) const;
  // Cached link_success_probability; 0 when the link does not exist.
  double success_probability(NodeId src, NodeId dst) const;

  // SINR at `rx` for a transmission from `tx`, in dB. Interferers other than
  // `tx` contribute their (faded, when PerSlot) received power at `rx`.
  double compute_sinr(NodeId rx, NodeId tx, std::span<const NodeId> concurrent_transmitters,
                      std::int64_t slot, FadingMode mode = FadingMode::PerSlot) const;

  std::string placements_csv() const;

 private:
  std::vector<NodePlacement> nodes_;
  ChannelParams params_;
  std::uint64_t seed_;
  std::vector<std::vector<NodeId>> neighbors_;
  std::vector<std::vector<double>> neighbor_success_;
};

// Free-function form of Topology::neighbors over a raw placement list.
std::vector<NodeId> neighbors(NodeId node, std::span<const NodePlacement> placements, const ChannelParams& params);

}  // namespace cooprpl
