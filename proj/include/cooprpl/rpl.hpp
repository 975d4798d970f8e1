#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cooprpl/messages.hpp"
#include "cooprpl/topology.hpp"

namespace cooprpl {

inline constexpr double kDefaultEtxMax = 16.0;

// attempts/successes; `etx_max` when nothing got through.
double compute_etx(std::uint64_t attempts, std::uint64_t successes, double etx_max = kDefaultEtxMax);

// Additive objective function.
Rank compute_rank(Rank parent_rank, double link_etx);

struct TrickleState {
  double interval_min_ms = 100.0;
  int interval_max_doublings = 8;
  int redundancy_k = 10;
  double current_interval_ms = 100.0;
  int counter = 0;

  double interval_max_ms() const;
};

struct TrickleDecision {
  bool emit_dio = false;
  double next_interval_ms = 0.0;
};

// End-of-interval step. Consistent: emit unless suppressed (counter >= k)
// and double the interval up to the maximum. Inconsistent: reset to the
// minimum interval and emit.
TrickleDecision trickle_fire(const TrickleState& trickle, bool consistent);

struct ParentEntry {
  NodeId id = 0;
  Rank rank;
  double etx = 1.0;
};

struct NodeState {
  NodeId id = 0;
  bool joined = false;
  Rank rank{0.0};
  std::vector<ParentEntry> parent_set;
  std::optional<NodeId> default_parent;
  std::vector<NodeId> children;
  std::uint32_t active_connections = 0;
  std::optional<NodeId> selected_relay;
  TrickleState trickle;
  std::int64_t last_dio_heard_slot = -1;

  bool is_gateway() const { return id == kGateway; }
};

enum class DioDecision { Join, Update, Ignore };

// Minimizes parent rank + link ETX; ties go to the lowest node id.
std::optional<NodeId> select_default_parent(std::span<const ParentEntry> parent_set);

// Applies a received DIO. The sender enters (or refreshes) the parent set
// whenever its rank is below ours. Ranks never increase once joined, which
// keeps default-parent chains strictly rank-decreasing and therefore loop free.
DioDecision process_dio(NodeState& state, const DioMessage& dio, double link_etx, double hysteresis = 0.5);

// True when an unjoined node has gone `timeout_slots` without hearing a DIO.
bool should_emit_dis(const NodeState& state, std::int64_t now_slot, std::int64_t timeout_slots);
DisMessage emit_dis(const NodeState& state);

// Resets the receiver's trickle timer to its minimum interval.
void process_dis(NodeState& state);

using RouteTable = std::map<NodeId, NodeId>;  // target -> next hop

void process_dao(RouteTable& routes, const DaoMessage& dao);

// Rebuilds children lists and active-connection counts from default parents.
// active_connections(n) counts joined sources whose default path crosses n
// as an intermediate hop, i.e. n's proper descendants (gateway excluded).
void update_children_and_connections(std::span<NodeState> nodes);

// Directed-link ETX table, then tracked from data-plane outcomes with an
// EWMA. The initial estimate is attempts/successes over `probe_count`
// probe transmissions drawn from the channel model, or exactly 1/p when
// `probe_count` is 0.
class EtxTable {
 public:
  EtxTable() = default;
  EtxTable(const Topology& topology, double etx_max = kDefaultEtxMax, double alpha = 0.3, int probe_count = 0,
           std::uint64_t seed = 0);

  double get(NodeId src, NodeId dst) const;
  void observe(NodeId src, NodeId dst, std::uint64_t attempts, std::uint64_t successes);
  double etx_max() const { return etx_max_; }

 private:
  std::size_t index(NodeId src, NodeId dst) const { return static_cast<std::size_t>(src) * n_ + dst; }

  std::size_t n_ = 0;
  double etx_max_ = kDefaultEtxMax;
  double alpha_ = 0.3;
  std::vector<double> etx_;
};

// Walks default parents from every joined node; false on a cycle, a chain
// not ending at the gateway, or a non-decreasing rank step.
bool dag_is_consistent(std::span<const NodeState> nodes);

}  // namespace cooprpl
