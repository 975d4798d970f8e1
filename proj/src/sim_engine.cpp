#include "cooprpl/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "cooprpl/errors.hpp"
#include "cooprpl/messages.hpp"
#include "cooprpl/random.hpp"

namespace cooprpl {

using nlohmann::json;

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Rpl: return "RPL";
    case Protocol::CoopRpl: return "CoopRPL";
    case Protocol::OppRpl: break;
  }
  return "OppRPL";
}

std::optional<Protocol> parse_protocol(std::string_view text) {
  if (text == "RPL" || text == "rpl") return Protocol::Rpl;
  if (text == "CoopRPL" || text == "cooprpl" || text == "coop") return Protocol::CoopRpl;
  if (text == "OppRPL" || text == "opprpl" || text == "opp") return Protocol::OppRpl;
  return std::nullopt;
}

void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& what) { throw SimError(ErrorKind::Config, what); };
  if (!(c.region.side_length > 0.0)) fail("region side must be positive");
  if (!(c.baseline_intensity > 0.0)) fail("intensity must be positive");
  if (!(c.density_ratio > 0.0)) fail("density ratio must be positive");
  try {
    validate(c.channel);
    if (c.weights) validate(*c.weights);
  } catch (const SimError& e) {
    fail(e.what());
  }
  if (!(c.p_coop >= 0.0 && c.p_coop <= 1.0)) fail("probability out of range: p_coop");
  if (c.forwarding_set_size < 1) fail("forwarding set size must be >= 1");
  if (c.hop.max_retx < 0 || c.hop.relay_retx < 0 || c.hop.retx_backoff_slots < 0 ||
      c.hop.backoff_jitter_slots < 0) fail("retry counts must be >= 0");
  if (c.n_packets <= 0) fail("n_packets must be positive");
  if (c.traffic_window_slots < 0) fail("traffic window must be >= 0");
  if (c.warmup_slots < 0) fail("warmup_slots must be >= 0");
  if (c.quiescence_slots < 1) fail("quiescence window must be >= 1");
  if (c.dis_timeout_slots < 1) fail("DIS timeout must be >= 1");
  if (!(c.slot_ms > 0.0)) fail("slot duration must be positive");
  if (!(c.trickle_imin_ms > 0.0) || c.trickle_doublings < 0 || c.trickle_k < 1) fail("invalid trickle parameters");
  if (!(c.etx_max >= 1.0)) fail("etx_max must be >= 1");
  if (!(c.etx_alpha > 0.0 && c.etx_alpha <= 1.0)) fail("etx alpha must lie in (0,1]");
  if (!(c.parent_hysteresis >= 0.0)) fail("hysteresis must be >= 0");
  if (c.etx_probes < 0) fail("etx_probes must be >= 0");
  if (c.placement_attempts < 1) fail("placement attempts must be >= 1");
}

std::vector<PacketGen> generate_traffic(int n_packets, std::span<const NodeId> sources, std::int64_t start_slot,
                                        int window_slots, std::uint64_t seed) {
  std::vector<PacketGen> out;
  if (sources.empty() || n_packets <= 0) return out;
  rng::Stream stream(seed, rng::Tag::Traffic);
  out.reserve(static_cast<std::size_t>(n_packets));
  const auto window = static_cast<std::uint64_t>(std::max(1, window_slots));
  for (int i = 0; i < n_packets; ++i) {
    PacketGen g;
    g.source = sources[stream.below(sources.size())];
    g.slot = start_slot + static_cast<std::int64_t>(stream.below(window));
    g.packet_id = static_cast<std::uint64_t>(i);
    out.push_back(g);
  }
  std::stable_sort(out.begin(), out.end(), [](const PacketGen& a, const PacketGen& b) { return a.slot < b.slot; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].packet_id = i;
  return out;
}

MetricsRow collect_metrics(std::span<const Packet> packets, double slot_ms, bool count_relay_as_retx) {
  MetricsRow row;
  row.sent = packets.size();
  double retx = 0.0;
  double delay = 0.0;
  for (const auto& p : packets) {
    retx += static_cast<double>(p.sender_retransmissions + (count_relay_as_retx ? p.relay_transmissions : 0));
    if (p.status == PacketStatus::Delivered) {
      ++row.delivered;
      delay += static_cast<double>(p.delay_slots());
    } else {
      ++row.dropped;
    }
  }
  if (row.sent > 0) {
    row.pdr = static_cast<double>(row.delivered) / static_cast<double>(row.sent);
    row.mean_retransmissions = retx / static_cast<double>(row.sent);
  }
  if (row.delivered > 0) {
    row.mean_delay_slots = delay / static_cast<double>(row.delivered);
    row.mean_delay_ms = *row.mean_delay_slots * slot_ms;
  }
  return row;
}

// ---------------------------------------------------------------------------

Simulation::Simulation(const ScenarioConfig& config, TraceSink* trace) : config_(config), trace_(trace) {
  validate(config_);
  auto placement = place_nodes(config_.region, config_.intensity(), config_.seed, config_.channel,
                               config_.placement_attempts);
  topology_ = std::make_unique<Topology>(std::move(placement.nodes), config_.channel, config_.seed);
  const std::size_t n = topology_->size();
  etx_ = EtxTable(*topology_, config_.etx_max, config_.etx_alpha, config_.etx_probes, config_.seed);
  nodes_.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    NodeState& s = nodes_[i];
    s.id = i;
    s.trickle.interval_min_ms = config_.trickle_imin_ms;
    s.trickle.interval_max_doublings = config_.trickle_doublings;
    s.trickle.redundancy_k = config_.trickle_k;
    s.trickle.current_interval_ms = config_.trickle_imin_ms;
  }
  nodes_[kGateway].joined = true;
  nodes_[kGateway].rank = Rank{0.0};
  routes_.resize(n);
  relays_.resize(n);
  fsets_.resize(n);
  trickle_generation_.assign(n, 0);
  trickle_interval_start_.assign(n, 0);
  trickle_inconsistent_.assign(n, false);
}

Simulation::~Simulation() = default;

bool Simulation::dag_formed() const { return formed_; }

std::size_t Simulation::joined_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const NodeState& s) { return s.joined; }));
}

void Simulation::schedule(std::int64_t slot, EventKind kind, std::uint64_t target, std::uint64_t generation) {
  queue_.push(Event{slot, kind, next_event_id_++, target, generation});
}

double Simulation::trickle_slots(double ms) const { return ms / config_.slot_ms; }

void Simulation::trace_control(std::string_view type, NodeId sender, std::optional<double> rank,
                               std::optional<NodeId> relay) {
  ++control_messages_;
  if (!trace_) return;
  json j;
  j["slot"] = now_;
  j["type"] = type;
  j["sender"] = sender;
  j["rank"] = rank ? json(*rank) : json(nullptr);
  j["relay_suboption"] = relay ? json(*relay) : json(nullptr);
  trace_->write(j.dump());
}

// Trickle: one fire per interval at a point drawn from [I/2, I).
void Simulation::schedule_trickle_fire(NodeId node) {
  const double interval = std::max(1.0, trickle_slots(nodes_[node].trickle.current_interval_ms));
  const std::uint64_t gen = trickle_generation_[node];
  const double u = rng::uniform(config_.seed, rng::Tag::Trickle, {node, gen, static_cast<std::uint64_t>(trickle_interval_start_[node])});
  const auto offset = static_cast<std::int64_t>(std::floor(interval / 2.0 + u * interval / 2.0));
  schedule(trickle_interval_start_[node] + std::max<std::int64_t>(offset, 1), EventKind::TrickleFire, node, gen);
}

void Simulation::reset_trickle(NodeId node) {
  NodeState& s = nodes_[node];
  process_dis(s);
  trickle_inconsistent_[node] = true;
  ++trickle_generation_[node];
  trickle_interval_start_[node] = now_;
  schedule_trickle_fire(node);
}

void Simulation::on_trickle_fire(NodeId node, std::uint64_t generation) {
  if (generation != trickle_generation_[node]) return;
  NodeState& s = nodes_[node];
  const TrickleDecision d = trickle_fire(s.trickle, !trickle_inconsistent_[node]);
  if (d.emit_dio) on_dio_tx(node);
  const double interval = std::max(1.0, trickle_slots(s.trickle.current_interval_ms));
  trickle_interval_start_[node] += static_cast<std::int64_t>(std::llround(interval));
  if (trickle_interval_start_[node] <= now_) trickle_interval_start_[node] = now_ + 1;
  s.trickle.current_interval_ms = d.next_interval_ms;
  s.trickle.counter = 0;
  trickle_inconsistent_[node] = false;
  schedule_trickle_fire(node);
}

void Simulation::on_dio_tx(NodeId node) {
  NodeState& s = nodes_[node];
  if (!s.joined) return;
  // Relays and forwarding sets are refreshed on every DIO emission.
  refresh_node(node);
  DioMessage dio{node, s.rank, 1, s.selected_relay};
  const auto frame = codec::encode(dio);
  trace_control("DIO", node, s.rank.value, s.selected_relay);

  for (NodeId rx : topology_->neighbors(node)) {
    const double p = topology_->success_probability(node, rx);
    if (!(rng::uniform(config_.seed, rng::Tag::Control, {node, rx, static_cast<std::uint64_t>(now_)}) < p)) continue;
    const DioMessage heard = codec::decode_dio(frame);
    NodeState& r = nodes_[rx];
    if (r.is_gateway()) continue;
    r.last_dio_heard_slot = now_;
    const auto old_parent = r.default_parent;
    const DioDecision decision = process_dio(r, heard, etx_.get(rx, node), config_.parent_hysteresis);
    if (decision == DioDecision::Join || decision == DioDecision::Update) {
      last_change_ = now_;
      dag_dirty_ = true;
      reset_trickle(rx);
      if (decision == DioDecision::Join || old_parent != r.default_parent) send_dao(rx);
      on_topology_change(rx);
    } else {
      r.trickle.counter += 1;
    }
  }
}

void Simulation::on_dis_check(NodeId node) {
  NodeState& s = nodes_[node];
  if (s.joined) return;
  if (should_emit_dis(s, now_, config_.dis_timeout_slots)) {
    const auto frame = codec::encode(emit_dis(s));
    trace_control("DIS", node, std::nullopt, std::nullopt);
    for (NodeId rx : topology_->neighbors(node)) {
      const double p = topology_->success_probability(node, rx);
      if (!(rng::uniform(config_.seed, rng::Tag::Control, {node, rx, static_cast<std::uint64_t>(now_), 1}) < p)) continue;
      (void)codec::decode_dis(frame);
      if (nodes_[rx].joined) reset_trickle(rx);
    }
    s.last_dio_heard_slot = now_;  // re-arm the solicitation timeout
  }
  schedule(now_ + config_.dis_timeout_slots, EventKind::DisTx, node);
}

// DAOs travel up the default-parent chain within the slot; each hop
// records the reverse route.
void Simulation::send_dao(NodeId node) {
  const NodeId target = node;
  NodeId sender = node;
  std::size_t guard = 0;
  while (sender != kGateway && nodes_[sender].default_parent && guard++ < nodes_.size()) {
    const NodeId parent = *nodes_[sender].default_parent;
    const DaoMessage dao = codec::decode_dao(codec::encode(DaoMessage{sender, target, parent}));
    trace_control("DAO", sender, nodes_[sender].rank.value, std::nullopt);
    process_dao(routes_[parent], dao);
    sender = parent;
  }
}

void Simulation::on_topology_change(NodeId node) {
  if (formed_) refresh_node(node);
}

RelaySelection Simulation::select_relay_for(NodeId sender) {
  RelaySelection out;
  const NodeState& s = nodes_[sender];
  if (!s.joined || s.is_gateway() || !s.default_parent) return out;
  if (dag_dirty_) {
    update_children_and_connections(nodes_);
    dag_dirty_ = false;
  }
  const NodeId parent = *s.default_parent;
  const FadingMode mode = config_.per_slot_sinr ? FadingMode::PerSlot : FadingMode::Expected;
  const double sinr_s_d = topology_->compute_sinr(parent, sender, {}, now_, mode);
  for (NodeId r : filter_candidates_by_rank(s, nodes_, topology_->neighbors(sender))) {
    if (!topology_->link_exists(r, parent)) continue;
    const NodeState& relay = nodes_[r];
    CandidateMetrics m;
    m.relay = r;
    m.sinr_s_r = topology_->compute_sinr(r, sender, {}, now_, mode);
    m.sinr_r_d = topology_->compute_sinr(parent, r, {}, now_, mode);
    m.sinr_s_d = sinr_s_d;
    m.nac_r = relay.active_connections;
    m.nac_s = s.active_connections;
    m.nch_r = static_cast<std::uint32_t>(relay.children.size());
    m.nch_s = static_cast<std::uint32_t>(s.children.size());
    m.etx_s_r = etx_.get(sender, r);
    m.etx_r_d = etx_.get(r, parent);
    m.etx_s_d = etx_.get(sender, parent);
    out.pool.push_back(m);
  }
  const RateNormalization norm = RateNormalization::over(out.pool);
  const RateWeights w = config_.effective_weights();
  for (const auto& m : out.pool) {
    if (eligible(config_.routing_class, m)) out.eligible.push_back({m.relay, compute_rate(m, w, norm)});
  }
  out.selected = select_by_rate(out.eligible);
  return out;
}

void Simulation::refresh_node(NodeId node) {
  if (nodes_[node].is_gateway()) return;
  if (config_.protocol == Protocol::CoopRpl) {
    relays_[node].selection = select_relay_for(node);
    relays_[node].slot = now_;
    nodes_[node].selected_relay = relays_[node].selection.selected;
  } else if (config_.protocol == Protocol::OppRpl) {
    fsets_[node] = build_forwarding_set(nodes_[node], nodes_, topology_->neighbors(node), etx_, config_.forwarding_set_size);
  }
}

void Simulation::refresh_all() {
  update_children_and_connections(nodes_);
  dag_dirty_ = false;
  for (NodeId i = 0; i < nodes_.size(); ++i) refresh_node(i);
}

void Simulation::process_slot(std::int64_t slot) {
  now_ = slot;
  std::vector<std::size_t> batch;
  while (!queue_.empty() && queue_.top().slot == slot) {
    const Event e = queue_.top();
    queue_.pop();
    switch (e.kind) {
      case EventKind::TrickleFire: on_trickle_fire(static_cast<NodeId>(e.target), e.generation); break;
      case EventKind::DioTx: on_dio_tx(static_cast<NodeId>(e.target)); break;
      case EventKind::DisTx: on_dis_check(static_cast<NodeId>(e.target)); break;
      case EventKind::DaoTx: send_dao(static_cast<NodeId>(e.target)); break;
      case EventKind::PacketGen: start_hop(e.target, slot); break;
      case EventKind::HopAttempt: batch.push_back(e.target); break;
      case EventKind::MetricsSnapshot: refresh_all(); break;
    }
  }
  if (!batch.empty()) resolve_hops(slot, batch);
}

void Simulation::form_dag() {
  if (formed_) return;
  now_ = 0;
  last_change_ = 0;
  trickle_interval_start_[kGateway] = 0;
  schedule_trickle_fire(kGateway);
  for (NodeId i = 1; i < nodes_.size(); ++i) schedule(config_.dis_timeout_slots, EventKind::DisTx, i);

  std::int64_t end = config_.warmup_slots;
  while (!queue_.empty()) {
    const std::int64_t next = queue_.top().slot;
    const std::int64_t quiet_until = last_change_ + config_.quiescence_slots;
    if (joined_count() > 1 && next >= quiet_until) {
      end = std::min<std::int64_t>(quiet_until, config_.warmup_slots);
      break;
    }
    if (next > config_.warmup_slots) break;
    process_slot(next);
  }
  now_ = end;
  formation_end_ = end;
  formed_ = true;
}

void Simulation::run_traffic() {
  if (!formed_) form_dag();
  on_traffic_start();
  const std::int64_t horizon =
      formation_end_ + config_.traffic_window() +
      static_cast<std::int64_t>(nodes_.size() + 1) *
          (config_.hop.max_retx + 1) * (config_.hop.retx_backoff_slots + config_.hop.backoff_jitter_slots + config_.hop.relay_retx + 1) + 16;
  while (unresolved_ > 0 && !queue_.empty()) {
    const std::int64_t next = queue_.top().slot;
    if (next > horizon) break;
    process_slot(next);
  }
  // Anything left is past any reachable horizon; count it as dropped.
  for (std::size_t i = 0; i < packets_.size(); ++i) {
    if (packets_[i].status == PacketStatus::InFlight) resolve_packet(i, PacketStatus::Dropped, DropReason::Exhausted, horizon);
  }
}

void Simulation::on_traffic_start() {
  now_ = formation_end_;
  refresh_all();
  std::vector<NodeId> sources;
  for (const auto& s : nodes_) {
    if (!s.is_gateway() && s.joined) sources.push_back(s.id);
  }
  const auto gens = generate_traffic(config_.n_packets, sources, formation_end_, config_.traffic_window(), config_.seed);
  packets_.resize(gens.size());
  hops_.resize(gens.size());
  hop_start_.assign(gens.size(), 0);
  for (const auto& g : gens) {
    Packet& p = packets_[g.packet_id];
    p.packet_id = g.packet_id;
    p.source = g.source;
    p.created_slot = g.slot;
    p.current_holder = g.source;
    p.path.push_back(g.source);
    schedule(g.slot, EventKind::PacketGen, g.packet_id);
  }
  unresolved_ = packets_.size();
}

void Simulation::resolve_packet(std::size_t index, PacketStatus status, DropReason reason, std::int64_t slot) {
  Packet& p = packets_[index];
  if (p.status != PacketStatus::InFlight) return;
  p.status = status;
  p.drop_reason = reason;
  p.resolved_slot = slot;
  hops_[index].reset();
  --unresolved_;
  if (!trace_) return;
  json j;
  j["packet_id"] = p.packet_id;
  j["source"] = p.source;
  j["status"] = to_string(status);
  j["hops"] = p.hop_count;
  j["transmissions"] = p.total_transmissions;
  j["relay_hops"] = p.relay_hops;
  j["delay_slots"] = status == PacketStatus::Delivered ? json(p.delay_slots()) : json(nullptr);
  trace_->write(j.dump());
}

void Simulation::start_hop(std::size_t index, std::int64_t slot) {
  Packet& p = packets_[index];
  const NodeId holder = p.current_holder;
  const NodeState& s = nodes_[holder];
  if (p.path_ranks.empty()) p.path_ranks.push_back(s.rank.value);
  if (!s.joined || !s.default_parent) {
    resolve_packet(index, PacketStatus::Dropped, DropReason::NoRoute, slot);
    return;
  }
  const NodeId parent = *s.default_parent;
  switch (config_.protocol) {
    case Protocol::Rpl: hops_[index] = HopProcess::rpl(holder, parent, config_.hop); break;
    case Protocol::CoopRpl: {
      std::optional<NodeId> relay = s.selected_relay;
      if (relay && (*relay == parent || !(nodes_[*relay].rank < s.rank) || !topology_->link_exists(*relay, parent))) {
        relay.reset();
      }
      const double u = rng::uniform(config_.seed, rng::Tag::Cooperation, {p.packet_id, p.hop_count});
      const bool used = decide_use_relay(relay, config_.p_coop, u);
      hops_[index] = HopProcess::coop(holder, parent, used ? relay : std::nullopt, config_.hop);
      if (trace_) {
        json cands = json::array();
        for (const auto& c : relays_[holder].selection.eligible) cands.push_back({{"id", c.relay}, {"rate", c.rate}});
        json j;
        j["slot"] = slot;
        j["sender"] = holder;
        j["class"] = to_string(config_.routing_class);
        j["candidates"] = std::move(cands);
        j["selected"] = relay ? json(*relay) : json(nullptr);
        j["used"] = used;
        trace_->write(j.dump());
      }
      break;
    }
    case Protocol::OppRpl: {
      ForwardingSet fset = fsets_[holder];
      if (fset.members.empty() || fset.members.front() != parent) {
        fset = build_forwarding_set(s, nodes_, topology_->neighbors(holder), etx_, config_.forwarding_set_size);
      }
      hops_[index] = HopProcess::opportunistic(fset, config_.hop);
      break;
    }
  }
  hops_[index]->set_jitter_key(rng::hash(config_.seed, rng::Tag::Interference, {p.packet_id, p.hop_count}));
  hop_start_[index] = slot;
  schedule(slot + hops_[index]->wait_slots(), EventKind::HopAttempt, index);
}

bool Simulation::receive(NodeId tx, NodeId rx, std::uint64_t packet_id, std::int64_t slot,
                         std::span<const NodeId> transmitters) const {
  if (!topology_->link_exists(tx, rx)) return false;
  if (config_.channel.mode == ChannelMode::SweptLsr) {
    const double u = rng::uniform(config_.seed, rng::Tag::Success, {packet_id, tx, rx, static_cast<std::uint64_t>(slot)});
    return transmit(config_.channel.lsr_value, u);
  }
  if (rx != kGateway && std::find(transmitters.begin(), transmitters.end(), rx) != transmitters.end()) return false;
  return topology_->compute_sinr(rx, tx, transmitters, slot, FadingMode::PerSlot) >= config_.channel.sinr_threshold_db;
}

void Simulation::resolve_hops(std::int64_t slot, const std::vector<std::size_t>& batch) {
  std::vector<NodeId> transmitters;
  for (std::size_t idx : batch) {
    if (hops_[idx]) transmitters.push_back(hops_[idx]->pending().transmitter);
  }
  std::sort(transmitters.begin(), transmitters.end());
  transmitters.erase(std::unique(transmitters.begin(), transmitters.end()), transmitters.end());

  std::vector<bool> received;
  for (std::size_t idx : batch) {
    auto& hop = hops_[idx];
    if (!hop) continue;
    const Transmission& tx = hop->pending();
    received.clear();
    for (NodeId rx : tx.receivers) received.push_back(receive(tx.transmitter, rx, packets_[idx].packet_id, slot, transmitters));
    hop->advance(received);
    if (hop->done()) {
      finish_hop(idx, slot);
    } else {
      schedule(slot + 1 + hop->wait_slots(), EventKind::HopAttempt, idx);
    }
  }
}

void Simulation::finish_hop(std::size_t index, std::int64_t slot) {
  Packet& p = packets_[index];
  const HopProcess& hop = *hops_[index];
  const HopOutcome& o = hop.outcome();
  const NodeId holder = p.current_holder;
  p.total_transmissions += static_cast<std::uint64_t>(o.attempts + o.relay_attempts);
  p.sender_retransmissions += static_cast<std::uint64_t>(std::max(0, o.attempts - 1));
  p.relay_transmissions += static_cast<std::uint64_t>(o.relay_attempts);
  if (o.relay_used) ++p.relay_hops;

  // Data-plane ETX feedback.
  const auto parent = nodes_[holder].default_parent;
  if (hop.mode() == HopProcess::Mode::Opportunistic) {
    if (o.delivered) {
      etx_.observe(holder, *o.next_holder, o.attempts, 1);
    } else if (parent) {
      etx_.observe(holder, *parent, o.attempts, 0);
    }
  } else if (parent) {
    const bool via_relay = o.delivered && o.via_relay;
    etx_.observe(holder, *parent, o.attempts, o.delivered && !via_relay ? 1 : 0);
    if (o.relay_used && o.relay_attempts > 0 && nodes_[holder].selected_relay) {
      etx_.observe(*nodes_[holder].selected_relay, *parent, o.relay_attempts, via_relay ? 1 : 0);
    }
  }

  if (!o.delivered) {
    resolve_packet(index, PacketStatus::Dropped, o.failure == DropReason::None ? DropReason::Exhausted : o.failure, slot + 1);
    return;
  }
  const NodeId next = *o.next_holder;
  p.hop_count += 1;
  if (next == kGateway) {
    p.path.push_back(kGateway);
    p.path_ranks.push_back(nodes_[kGateway].rank.value);
    resolve_packet(index, PacketStatus::Delivered, DropReason::None, slot + 1);
    return;
  }
  if (std::find(p.path.begin(), p.path.end(), next) != p.path.end() || p.hop_count > nodes_.size()) {
    resolve_packet(index, PacketStatus::Dropped, DropReason::Loop, slot + 1);
    return;
  }
  p.current_holder = next;
  p.path.push_back(next);
  p.path_ranks.push_back(nodes_[next].rank.value);
  start_hop(index, slot + 1);
}

MetricsRow Simulation::metrics() const {
  MetricsRow row = collect_metrics(packets_, config_.slot_ms, config_.count_relay_as_retx);
  row.disconnected = joined_count() < nodes_.size();
  return row;
}

MetricsRow run_scenario(const ScenarioConfig& config, TraceSink* trace) {
  Simulation sim(config, trace);
  sim.form_dag();
  sim.run_traffic();
  return sim.metrics();
}

}  // namespace cooprpl
