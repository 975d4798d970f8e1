#include "cooprpl/rpl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cooprpl/errors.hpp"
#include "cooprpl/random.hpp"

namespace cooprpl {

double compute_etx(std::uint64_t attempts, std::uint64_t successes, double etx_max) {
  if (attempts < successes) throw SimError(ErrorKind::MalformedStats, "malformed-stats: successes exceed attempts");
  if (successes == 0) return etx_max;
  return static_cast<double>(attempts) / static_cast<double>(successes);
}

Rank compute_rank(Rank parent_rank, double link_etx) {
  if (!(link_etx >= 1.0)) throw SimError(ErrorKind::InvalidArgument, "link ETX must be >= 1");
  return Rank{parent_rank.value + link_etx};
}

double TrickleState::interval_max_ms() const { return interval_min_ms * std::ldexp(1.0, interval_max_doublings); }

TrickleDecision trickle_fire(const TrickleState& trickle, bool consistent) {
  if (!consistent) return {true, trickle.interval_min_ms};
  return {trickle.counter < trickle.redundancy_k,
          std::min(trickle.current_interval_ms * 2.0, trickle.interval_max_ms())};
}

std::optional<NodeId> select_default_parent(std::span<const ParentEntry> parent_set) {
  std::optional<NodeId> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (const auto& p : parent_set) {
    const double cost = p.rank.value + p.etx;
    if (cost < best_cost || (cost == best_cost && best && p.id < *best)) {
      best = p.id;
      best_cost = cost;
    }
  }
  return best;
}

namespace {

double cost_of(const NodeState& state, NodeId parent) {
  for (const auto& p : state.parent_set) {
    if (p.id == parent) return p.rank.value + p.etx;
  }
  return std::numeric_limits<double>::infinity();
}

void prune_parents(NodeState& state) {
  std::erase_if(state.parent_set, [&](const ParentEntry& p) { return !(p.rank < state.rank); });
}

}  // namespace

DioDecision process_dio(NodeState& state, const DioMessage& dio, double link_etx, double hysteresis) {
  if (state.is_gateway() || dio.sender == state.id) return DioDecision::Ignore;
  const Rank candidate = compute_rank(dio.rank, link_etx);

  if (!state.joined) {
    state.parent_set.clear();
    state.parent_set.push_back({dio.sender, dio.rank, link_etx});
    state.joined = true;
    state.rank = candidate;
    state.default_parent = dio.sender;
    return DioDecision::Join;
  }

  auto existing = std::find_if(state.parent_set.begin(), state.parent_set.end(),
                               [&](const ParentEntry& p) { return p.id == dio.sender; });
  if (!(dio.rank < state.rank)) {
    if (existing != state.parent_set.end() && state.default_parent != dio.sender) state.parent_set.erase(existing);
    return DioDecision::Ignore;
  }
  if (existing == state.parent_set.end()) {
    state.parent_set.push_back({dio.sender, dio.rank, link_etx});
  } else {
    existing->rank = dio.rank;
    existing->etx = link_etx;
  }

  const auto best = select_default_parent(state.parent_set);
  const double best_cost = cost_of(state, *best);
  if (best_cost < state.rank.value - hysteresis) {
    state.rank = Rank{best_cost};
    state.default_parent = best;
    prune_parents(state);
    return DioDecision::Update;
  }
  return DioDecision::Ignore;
}

bool should_emit_dis(const NodeState& state, std::int64_t now_slot, std::int64_t timeout_slots) {
  if (state.joined) return false;
  const std::int64_t since = state.last_dio_heard_slot < 0 ? now_slot + 1 : now_slot - state.last_dio_heard_slot;
  return since >= timeout_slots;
}

DisMessage emit_dis(const NodeState& state) { return DisMessage{state.id}; }

void process_dis(NodeState& state) {
  state.trickle.current_interval_ms = state.trickle.interval_min_ms;
  state.trickle.counter = 0;
}

void process_dao(RouteTable& routes, const DaoMessage& dao) { routes[dao.target] = dao.sender; }

void update_children_and_connections(std::span<NodeState> nodes) {
  for (auto& n : nodes) {
    n.children.clear();
    n.active_connections = 0;
  }
  for (const auto& n : nodes) {
    if (n.is_gateway() || !n.joined || !n.default_parent) continue;
    nodes[*n.default_parent].children.push_back(n.id);
  }
  for (const auto& source : nodes) {
    if (source.is_gateway() || !source.joined || !source.default_parent) continue;
    std::optional<NodeId> hop = source.default_parent;
    std::size_t guard = 0;
    while (hop && *hop != kGateway && guard++ < nodes.size()) {
      nodes[*hop].active_connections += 1;
      hop = nodes[*hop].default_parent;
    }
  }
}

EtxTable::EtxTable(const Topology& topology, double etx_max, double alpha, int probe_count, std::uint64_t seed)
    : n_(topology.size()), etx_max_(etx_max), alpha_(alpha), etx_(n_ * n_, etx_max) {
  for (NodeId a = 0; a < n_; ++a) {
    for (NodeId b : topology.neighbors(a)) {
      const double p = topology.success_probability(a, b);
      if (probe_count <= 0) {
        etx_[index(a, b)] = p > 0.0 ? std::clamp(1.0 / p, 1.0, etx_max_) : etx_max_;
        continue;
      }
      std::uint64_t successes = 0;
      for (int k = 0; k < probe_count; ++k) {
        if (rng::uniform(seed, rng::Tag::Control, {a, b, static_cast<std::uint64_t>(k), 0x9e37}) < p) ++successes;
      }
      etx_[index(a, b)] = std::clamp(compute_etx(static_cast<std::uint64_t>(probe_count), successes, etx_max_), 1.0, etx_max_);
    }
  }
}

double EtxTable::get(NodeId src, NodeId dst) const { return etx_[index(src, dst)]; }

void EtxTable::observe(NodeId src, NodeId dst, std::uint64_t attempts, std::uint64_t successes) {
  const double sample = compute_etx(attempts, successes, etx_max_);
  double& e = etx_[index(src, dst)];
  e = std::clamp((1.0 - alpha_) * e + alpha_ * sample, 1.0, etx_max_);
}

bool dag_is_consistent(std::span<const NodeState> nodes) {
  for (const auto& start : nodes) {
    if (start.is_gateway() || !start.joined) continue;
    const NodeState* cur = &start;
    std::size_t steps = 0;
    while (!cur->is_gateway()) {
      if (!cur->default_parent || ++steps > nodes.size()) return false;
      const NodeState& parent = nodes[*cur->default_parent];
      if (!parent.joined || !(parent.rank < cur->rank)) return false;
      cur = &parent;
    }
  }
  return true;
}

}  // namespace cooprpl
