#include "cooprpl/forwarding.hpp"

#include <algorithm>

#include "cooprpl/random.hpp"

namespace cooprpl {

std::string_view to_string(PacketStatus s) {
  switch (s) {
    case PacketStatus::InFlight: return "in-flight";
    case PacketStatus::Delivered: return "delivered";
    case PacketStatus::Dropped: break;
  }
  return "dropped";
}

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::None: return "none";
    case DropReason::NoRoute: return "no-route";
    case DropReason::Exhausted: return "exhausted";
    case DropReason::Loop: break;
  }
  return "loop";
}

ForwardingSet build_forwarding_set(const NodeState& owner, std::span<const NodeState> nodes,
                                   std::span<const NodeId> owner_neighbors, const EtxTable& etx,
                                   std::size_t set_size) {
  ForwardingSet fset{owner.id, {}};
  if (!owner.default_parent || set_size == 0) return fset;
  fset.members.push_back(*owner.default_parent);

  struct Ranked {
    double cost;
    NodeId id;
  };
  std::vector<Ranked> others;
  for (NodeId n : owner_neighbors) {
    if (n == *owner.default_parent) continue;
    const NodeState& s = nodes[n];
    if (s.joined && s.rank < owner.rank) others.push_back({s.rank.value + etx.get(owner.id, n), n});
  }
  std::sort(others.begin(), others.end(),
            [](const Ranked& a, const Ranked& b) { return a.cost < b.cost || (a.cost == b.cost && a.id < b.id); });
  for (const auto& r : others) {
    if (fset.members.size() >= set_size) break;
    fset.members.push_back(r.id);
  }
  return fset;
}

HopProcess::HopProcess(Mode mode, NodeId sender, HopParams params) : mode_(mode), sender_(sender), params_(params) {}

HopProcess HopProcess::rpl(NodeId sender, std::optional<NodeId> parent, HopParams params) {
  return coop(sender, parent, std::nullopt, params);
}

HopProcess HopProcess::coop(NodeId sender, std::optional<NodeId> parent, std::optional<NodeId> relay,
                            HopParams params) {
  HopProcess p(relay ? Mode::Cooperative : Mode::Direct, sender, params);
  if (!parent) {
    p.finish(false, std::nullopt, DropReason::NoRoute);
    return p;
  }
  p.targets_ = {*parent};
  if (relay && *relay != *parent && *relay != sender) p.relay_ = relay;
  p.pending_ = {sender, p.relay_ ? std::vector<NodeId>{*parent, *p.relay_} : std::vector<NodeId>{*parent}};
  return p;
}

HopProcess HopProcess::opportunistic(const ForwardingSet& fset, HopParams params) {
  HopProcess p(Mode::Opportunistic, fset.owner, params);
  if (fset.members.empty()) {
    p.finish(false, std::nullopt, DropReason::NoRoute);
    return p;
  }
  p.targets_ = fset.members;
  p.pending_ = {fset.owner, fset.members};
  return p;
}

void HopProcess::finish(bool delivered, std::optional<NodeId> next, DropReason reason) {
  done_ = true;
  wait_ = 0;
  outcome_.delivered = delivered;
  outcome_.next_holder = next;
  outcome_.failure = reason;
  pending_ = {};
}

void HopProcess::sender_failed(int relay_slots_used) {
  if (outcome_.attempts >= params_.max_retx + 1) {
    finish(false, std::nullopt, DropReason::Exhausted);
    return;
  }
  // Relay transmissions overlap the sender's backoff window.
  int backoff = params_.retx_backoff_slots;
  if (params_.backoff_jitter_slots > 0) {
    const auto span = static_cast<std::uint64_t>(params_.backoff_jitter_slots) + 1;
    backoff += static_cast<int>(rng::hash(jitter_key_, rng::Tag::Interference,
                                          {static_cast<std::uint64_t>(outcome_.attempts)}) % span);
  }
  wait_ = std::max(0, backoff - relay_slots_used);
  outcome_.slots_consumed += wait_;
  phase_ = Phase::Sender;
  pending_ = {sender_, relay_ ? std::vector<NodeId>{targets_[0], *relay_} : targets_};
}

void HopProcess::advance(const std::vector<bool>& received) {
  if (done_) return;
  outcome_.slots_consumed += 1;
  wait_ = 0;

  if (phase_ == Phase::Relay) {
    outcome_.relay_attempts += 1;
    relay_round_attempts_ += 1;
    if (!received.empty() && received[0]) {
      outcome_.via_relay = true;
      finish(true, targets_[0], DropReason::None);
      return;
    }
    if (relay_round_attempts_ < params_.relay_retx) return;  // relay tries again next slot
    sender_failed(relay_round_attempts_);
    return;
  }

  outcome_.attempts += 1;
  if (mode_ == Mode::Opportunistic) {
    for (std::size_t i = 0; i < targets_.size() && i < received.size(); ++i) {
      if (received[i]) {
        finish(true, targets_[i], DropReason::None);
        return;
      }
    }
    sender_failed(0);
    return;
  }

  if (!received.empty() && received[0]) {
    finish(true, targets_[0], DropReason::None);
    return;
  }
  if (relay_ && received.size() > 1 && received[1]) relay_holds_copy_ = true;
  if (relay_holds_copy_ && params_.relay_retx > 0) {
    phase_ = Phase::Relay;
    relay_round_attempts_ = 0;
    outcome_.relay_used = true;
    pending_ = {*relay_, {targets_[0]}};
    return;
  }
  sender_failed(0);
}

HopOutcome run_hop(HopProcess process, const LinkTrial& trial) {
  int offset = 0;
  std::vector<bool> received;
  while (!process.done()) {
    offset += process.wait_slots();
    const Transmission& tx = process.pending();
    received.clear();
    for (NodeId rx : tx.receivers) received.push_back(trial(tx.transmitter, rx, offset));
    process.advance(received);
    offset += 1;
  }
  return process.outcome();
}

HopOutcome forward_hop_rpl(NodeId node, std::optional<NodeId> parent, const HopParams& params, const LinkTrial& trial) {
  return run_hop(HopProcess::rpl(node, parent, params), trial);
}

HopOutcome forward_hop_coop(NodeId sender, std::optional<NodeId> parent, std::optional<NodeId> relay,
                            const HopParams& params, const LinkTrial& trial) {
  return run_hop(HopProcess::coop(sender, parent, relay, params), trial);
}

HopOutcome forward_hop_opportunistic(const ForwardingSet& fset, const HopParams& params, const LinkTrial& trial) {
  return run_hop(HopProcess::opportunistic(fset, params), trial);
}

bool transmit(const LinkModel& link, std::uint64_t seed, std::uint64_t packet_id, std::int64_t slot) {
  const double u = rng::uniform(seed, rng::Tag::Success, {packet_id, link.src, link.dst, static_cast<std::uint64_t>(slot)});
  return transmit(link.success_prob, u);
}

}  // namespace cooprpl
