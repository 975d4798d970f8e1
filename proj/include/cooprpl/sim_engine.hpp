#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string_view>
#include <vector>

#include "cooprpl/coop_relay.hpp"
#include "cooprpl/forwarding.hpp"
#include "cooprpl/rpl.hpp"
#include "cooprpl/topology.hpp"
#include "cooprpl/trace.hpp"

namespace cooprpl {

enum class Protocol { Rpl, CoopRpl, OppRpl };

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view text);

struct ScenarioConfig {
  Region region;
  double baseline_intensity = 80.0 / (300.0 * 300.0);  // meters per m^2
  double density_ratio = 1.0;
  ChannelParams channel;

  Protocol protocol = Protocol::CoopRpl;
  RoutingClass routing_class = RoutingClass::BestEffort;
  std::optional<RateWeights> weights;  // overrides the class preset
  double p_coop = 1.0;
  bool per_slot_sinr = false;
  std::size_t forwarding_set_size = 3;

  HopParams hop{.max_retx = 3, .relay_retx = 1, .retx_backoff_slots = 2, .backoff_jitter_slots = 4};
  bool count_relay_as_retx = true;

  int n_packets = 1000;
  int traffic_window_slots = 0;  // 0: 2 * n_packets
  int warmup_slots = 5000;
  int quiescence_slots = 20;
  int dis_timeout_slots = 50;
  double slot_ms = 10.0;

  double trickle_imin_ms = 100.0;
  int trickle_doublings = 8;
  int trickle_k = 10;
  double etx_max = kDefaultEtxMax;
  double etx_alpha = 0.3;
  int etx_probes = 20;  // probe transmissions behind the initial ETX estimate
  double parent_hysteresis = 0.5;
  int placement_attempts = 32;

  std::uint64_t seed = 1;

  double intensity() const { return baseline_intensity * density_ratio; }
  int traffic_window() const { return traffic_window_slots > 0 ? traffic_window_slots : 2 * n_packets; }
  RateWeights effective_weights() const { return weights ? *weights : preset_weights(routing_class); }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Throws SimError(Config) naming the first violated constraint.
void validate(const ScenarioConfig& config);

struct PacketGen {
  std::int64_t slot = 0;
  NodeId source = 0;
  std::uint64_t packet_id = 0;
};

// n_packets generations with sources uniform over `sources` and slots
// uniform over [start_slot, start_slot + window). Sorted by slot; ids follow
// that order.
std::vector<PacketGen> generate_traffic(int n_packets, std::span<const NodeId> sources, std::int64_t start_slot,
                                        int window_slots, std::uint64_t seed);

struct MetricsRow {
  double pdr = 0.0;
  double mean_retransmissions = 0.0;
  std::optional<double> mean_delay_slots;  // absent when nothing was delivered
  std::optional<double> mean_delay_ms;
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  bool disconnected = false;
};

MetricsRow collect_metrics(std::span<const Packet> packets, double slot_ms, bool count_relay_as_retx = true);

enum class EventKind : int { TrickleFire = 0, DioTx, DisTx, DaoTx, PacketGen, HopAttempt, MetricsSnapshot };

// Processed in (slot, kind, id) order.
struct Event {
  std::int64_t slot = 0;
  EventKind kind = EventKind::MetricsSnapshot;
  std::uint64_t id = 0;
  std::uint64_t target = 0;      // node id or packet index
  std::uint64_t generation = 0;  // trickle timers: stale fires are skipped
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.slot != b.slot) return a.slot > b.slot;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.id > b.id;
  }
};

struct RelayRecord {
  RelaySelection selection;
  std::int64_t slot = -1;
};

// One scenario instance. Phases: placement (constructor), DAG formation,
// traffic. Single-threaded; every random draw is keyed by the seed.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& config, TraceSink* trace = nullptr);
  ~Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Runs until no rank/parent change for quiescence_slots, or warmup_slots.
  void form_dag();
  // Generates and routes all packets to resolution.
  void run_traffic();
  MetricsRow metrics() const;

  const ScenarioConfig& config() const { return config_; }
  const Topology& topology() const { return *topology_; }
  const std::vector<NodeState>& nodes() const { return nodes_; }
  const EtxTable& etx() const { return etx_; }
  const std::vector<Packet>& packets() const { return packets_; }
  const RouteTable& routes(NodeId node) const { return routes_[node]; }
  const RelayRecord& relay_record(NodeId node) const { return relays_[node]; }
  const ForwardingSet& forwarding_set(NodeId node) const { return fsets_[node]; }
  std::int64_t now() const { return now_; }
  std::int64_t formation_end_slot() const { return formation_end_; }
  bool dag_formed() const;
  std::size_t joined_count() const;
  std::uint64_t control_messages() const { return control_messages_; }

  // Stage 1-4 relay selection for `sender` against the current DAG.
  RelaySelection select_relay_for(NodeId sender);

 private:
  void schedule(std::int64_t slot, EventKind kind, std::uint64_t target, std::uint64_t generation = 0);
  void process_slot(std::int64_t slot);
  void on_trickle_fire(NodeId node, std::uint64_t generation);
  void on_dio_tx(NodeId node);
  void on_dis_check(NodeId node);
  void on_traffic_start();
  void reset_trickle(NodeId node);
  void schedule_trickle_fire(NodeId node);
  void send_dao(NodeId node);
  void on_topology_change(NodeId node);
  void refresh_node(NodeId node);
  void refresh_all();
  void start_hop(std::size_t packet_index, std::int64_t slot);
  void resolve_hops(std::int64_t slot, const std::vector<std::size_t>& batch);
  void finish_hop(std::size_t packet_index, std::int64_t slot);
  void resolve_packet(std::size_t packet_index, PacketStatus status, DropReason reason, std::int64_t slot);
  bool receive(NodeId tx, NodeId rx, std::uint64_t packet_id, std::int64_t slot,
               std::span<const NodeId> transmitters) const;
  double trickle_slots(double ms) const;
  void trace_control(std::string_view type, NodeId sender, std::optional<double> rank,
                     std::optional<NodeId> relay);

  ScenarioConfig config_;
  TraceSink* trace_;
  std::unique_ptr<Topology> topology_;
  std::vector<NodeState> nodes_;
  EtxTable etx_;
  std::vector<RouteTable> routes_;
  std::vector<RelayRecord> relays_;
  std::vector<ForwardingSet> fsets_;
  std::vector<std::uint64_t> trickle_generation_;
  std::vector<std::int64_t> trickle_interval_start_;
  std::vector<bool> trickle_inconsistent_;
  std::vector<Packet> packets_;
  std::vector<std::optional<HopProcess>> hops_;
  std::vector<std::int64_t> hop_start_;
  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  std::uint64_t next_event_id_ = 0;
  std::int64_t now_ = 0;
  std::int64_t last_change_ = 0;
  std::int64_t formation_end_ = -1;
  bool dag_dirty_ = true;
  bool formed_ = false;
  std::uint64_t control_messages_ = 0;
  std::uint64_t unresolved_ = 0;
};

// Convenience: placement, formation, traffic, metrics.
MetricsRow run_scenario(const ScenarioConfig& config, TraceSink* trace = nullptr);

}  // namespace cooprpl
