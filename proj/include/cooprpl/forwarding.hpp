#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cooprpl/rpl.hpp"
#include "cooprpl/topology.hpp"

namespace cooprpl {

enum class PacketStatus { InFlight, Delivered, Dropped };
enum class DropReason { None, NoRoute, Exhausted, Loop };

std::string_view to_string(PacketStatus s);
std::string_view to_string(DropReason r);

struct Packet {
  std::uint64_t packet_id = 0;
  NodeId source = 0;
  std::int64_t created_slot = 0;
  NodeId current_holder = 0;
  std::uint32_t hop_count = 0;
  std::uint64_t total_transmissions = 0;
  std::uint64_t sender_retransmissions = 0;  // sum over hops of (attempts - 1)
  std::uint64_t relay_transmissions = 0;
  std::uint32_t relay_hops = 0;
  PacketStatus status = PacketStatus::InFlight;
  DropReason drop_reason = DropReason::None;
  std::int64_t resolved_slot = -1;
  std::vector<NodeId> path;  // holders visited, source first
  std::vector<double> path_ranks;  // each holder's rank when it took the packet

  std::int64_t delay_slots() const { return resolved_slot - created_slot; }
};

struct HopParams {
  int max_retx = 3;           // sender retries after the first attempt
  int relay_retx = 1;         // relay attempts per overheard failure
  int retx_backoff_slots = 2; // idle slots after a failed sender attempt
  int backoff_jitter_slots = 0;  // extra idle slots drawn uniformly from [0, jitter]

  friend bool operator==(const HopParams&, const HopParams&) = default;
};

struct HopOutcome {
  int attempts = 0;        // sender transmissions
  bool relay_used = false;
  bool via_relay = false;  // delivered by the relay's transmission
  int relay_attempts = 0;
  bool delivered = false;
  int slots_consumed = 0;  // transmission and backoff slots
  std::optional<NodeId> next_holder;
  DropReason failure = DropReason::None;
};

struct ForwardingSet {
  NodeId owner = 0;
  std::vector<NodeId> members;  // priority order, default parent first
};

// Default parent first, then other lower-ranked neighbors by ascending
// rank + ETX from the owner (ties to the lowest id), truncated to `set_size`.
ForwardingSet build_forwarding_set(const NodeState& owner, std::span<const NodeState> nodes,
                                   std::span<const NodeId> owner_neighbors, const EtxTable& etx,
                                   std::size_t set_size);

struct Transmission {
  NodeId transmitter = 0;
  std::vector<NodeId> receivers;  // each reception is evaluated independently
};

// One hop of one packet as a step machine: the caller resolves `pending()`
// in some slot and feeds the per-receiver results back through `advance()`.
// Driving it slot-synchronously lets concurrent packets interfere.
class HopProcess {
 public:
  enum class Mode { Direct, Cooperative, Opportunistic };

  static HopProcess rpl(NodeId sender, std::optional<NodeId> parent, HopParams params);
  static HopProcess coop(NodeId sender, std::optional<NodeId> parent, std::optional<NodeId> relay, HopParams params);
  static HopProcess opportunistic(const ForwardingSet& fset, HopParams params);

  // Key for the backoff jitter draws of this hop.
  void set_jitter_key(std::uint64_t key) { jitter_key_ = key; }

  bool done() const { return done_; }
  const Transmission& pending() const { return pending_; }
  // Idle slots before `pending()` goes on air.
  int wait_slots() const { return wait_; }
  void advance(const std::vector<bool>& received);
  const HopOutcome& outcome() const { return outcome_; }
  Mode mode() const { return mode_; }

 private:
  enum class Phase { Sender, Relay };

  HopProcess(Mode mode, NodeId sender, HopParams params);
  void sender_failed(int relay_slots_used);
  void finish(bool delivered, std::optional<NodeId> next, DropReason reason);

  Mode mode_;
  NodeId sender_;
  std::vector<NodeId> targets_;  // parent, or forwarding-set members
  std::optional<NodeId> relay_;
  HopParams params_;
  Phase phase_ = Phase::Sender;
  int relay_round_attempts_ = 0;
  std::uint64_t jitter_key_ = 0;
  bool relay_holds_copy_ = false;
  int wait_ = 0;
  bool done_ = false;
  Transmission pending_;
  HopOutcome outcome_;
};

// Reception oracle for the synchronous drivers: (transmitter, receiver,
// slot offset within the hop) -> received.
using LinkTrial = std::function<bool(NodeId tx, NodeId rx, int slot_offset)>;

HopOutcome run_hop(HopProcess process, const LinkTrial& trial);

HopOutcome forward_hop_rpl(NodeId node, std::optional<NodeId> parent, const HopParams& params, const LinkTrial& trial);
HopOutcome forward_hop_coop(NodeId sender, std::optional<NodeId> parent, std::optional<NodeId> relay,
                            const HopParams& params, const LinkTrial& trial);
HopOutcome forward_hop_opportunistic(const ForwardingSet& fset, const HopParams& params, const LinkTrial& trial);

// Bernoulli trial on a link.
inline bool transmit(double success_prob, double uniform_draw) { return uniform_draw < success_prob; }

// Keyed form: one draw per (seed, packet, link, slot); a slot identifies
// the attempt since a packet transmits at most once per slot.
bool transmit(const LinkModel& link, std::uint64_t seed, std::uint64_t packet_id, std::int64_t slot);

}  // namespace cooprpl
