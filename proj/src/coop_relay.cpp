#include "cooprpl/coop_relay.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cooprpl/errors.hpp"

namespace cooprpl {

void validate(const RateWeights& w) {
  for (double v : {w.w_sinr, w.w_traffic, w.w_nch, w.w_etx}) {
    if (!(v >= 0.0 && v <= 1.0)) throw SimError(ErrorKind::InvalidArgument, "weights must lie in [0,1]");
  }
  const double sum = w.w_sinr + w.w_traffic + w.w_nch + w.w_etx;
  if (std::abs(sum - 1.0) > 1e-9) throw SimError(ErrorKind::InvalidArgument, "weights must sum to 1");
}

RateWeights preset_weights(RoutingClass cls) {
  switch (cls) {
    case RoutingClass::ClassA: return {0.85, 0.05, 0.05, 0.05};
    case RoutingClass::ClassB: return {0.05, 0.45, 0.45, 0.05};
    case RoutingClass::ClassC: return {0.05, 0.05, 0.05, 0.85};
    case RoutingClass::BestEffort: break;
  }
  return {0.25, 0.25, 0.25, 0.25};
}

std::string_view to_string(RoutingClass cls) {
  switch (cls) {
    case RoutingClass::ClassA: return "A";
    case RoutingClass::ClassB: return "B";
    case RoutingClass::ClassC: return "C";
    case RoutingClass::BestEffort: break;
  }
  return "BE";
}

std::optional<RoutingClass> parse_routing_class(std::string_view text) {
  if (text == "A" || text == "a" || text == "ClassA") return RoutingClass::ClassA;
  if (text == "B" || text == "b" || text == "ClassB") return RoutingClass::ClassB;
  if (text == "C" || text == "c" || text == "ClassC") return RoutingClass::ClassC;
  if (text == "BE" || text == "be" || text == "BestEffort" || text == "best-effort") return RoutingClass::BestEffort;
  return std::nullopt;
}

std::vector<NodeId> filter_candidates_by_rank(const NodeState& sender, std::span<const NodeState> nodes,
                                              std::span<const NodeId> sender_neighbors) {
  std::vector<NodeId> out;
  for (NodeId n : sender_neighbors) {
    if (n == sender.id || (sender.default_parent && n == *sender.default_parent)) continue;
    const NodeState& candidate = nodes[n];
    if (candidate.joined && candidate.rank < sender.rank) out.push_back(n);
  }
  return out;
}

bool eligible_class_a(const CandidateMetrics& m) { return m.sinr_s_r > m.sinr_s_d && m.sinr_r_d > m.sinr_s_d; }

bool eligible_class_b(const CandidateMetrics& m) { return m.nac_r < m.nac_s && m.nch_r < m.nch_s; }

bool eligible_class_c(const CandidateMetrics& m) { return m.etx_s_d > m.etx_s_r + m.etx_r_d; }

bool eligible(RoutingClass cls, const CandidateMetrics& m) {
  switch (cls) {
    case RoutingClass::ClassA: return eligible_class_a(m);
    case RoutingClass::ClassB: return eligible_class_b(m);
    case RoutingClass::ClassC: return eligible_class_c(m);
    case RoutingClass::BestEffort: break;
  }
  return eligible_class_a(m) || eligible_class_b(m) || eligible_class_c(m);
}

namespace {

double sinr_term(const CandidateMetrics& m) { return std::min(m.sinr_s_r, m.sinr_r_d); }
double etx_term(const CandidateMetrics& m) { return m.etx_s_r + m.etx_r_d; }

double normalize(double v, double lo, double hi) {
  if (!(hi > lo)) return 0.5;
  return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
}

}  // namespace

RateNormalization RateNormalization::over(std::span<const CandidateMetrics> pool) {
  RateNormalization n;
  if (pool.empty()) return n;
  n.sinr_min = n.sinr_max = sinr_term(pool[0]);
  n.traffic_min = n.traffic_max = pool[0].nac_r;
  n.nch_min = n.nch_max = pool[0].nch_r;
  n.etx_min = n.etx_max = etx_term(pool[0]);
  for (const auto& m : pool) {
    n.sinr_min = std::min(n.sinr_min, sinr_term(m));
    n.sinr_max = std::max(n.sinr_max, sinr_term(m));
    n.traffic_min = std::min<double>(n.traffic_min, m.nac_r);
    n.traffic_max = std::max<double>(n.traffic_max, m.nac_r);
    n.nch_min = std::min<double>(n.nch_min, m.nch_r);
    n.nch_max = std::max<double>(n.nch_max, m.nch_r);
    n.etx_min = std::min(n.etx_min, etx_term(m));
    n.etx_max = std::max(n.etx_max, etx_term(m));
  }
  return n;
}

double compute_rate(const CandidateMetrics& m, const RateWeights& w, const RateNormalization& norm) {
  return w.w_sinr * normalize(sinr_term(m), norm.sinr_min, norm.sinr_max) -
         w.w_traffic * normalize(m.nac_r, norm.traffic_min, norm.traffic_max) -
         w.w_nch * normalize(m.nch_r, norm.nch_min, norm.nch_max) -
         w.w_etx * normalize(etx_term(m), norm.etx_min, norm.etx_max);
}

std::optional<NodeId> select_by_rate(std::span<const RatedCandidate> rated) {
  std::optional<NodeId> best;
  double best_rate = 0.0;
  for (const auto& c : rated) {
    if (!best || c.rate > best_rate || (c.rate == best_rate && c.relay < *best)) {
      best = c.relay;
      best_rate = c.rate;
    }
  }
  return best;
}

std::optional<NodeId> select_relay(std::span<const CandidateMetrics> candidates, const RateWeights& w,
                                   const RateNormalization& norm) {
  std::vector<RatedCandidate> rated;
  rated.reserve(candidates.size());
  for (const auto& m : candidates) rated.push_back({m.relay, compute_rate(m, w, norm)});
  return select_by_rate(rated);
}

std::optional<NodeId> select_relay(std::span<const CandidateMetrics> candidates, const RateWeights& w) {
  return select_relay(candidates, w, RateNormalization::over(candidates));
}

bool decide_use_relay(std::optional<NodeId> selected, double p_coop, double uniform_draw) {
  if (!selected) return false;
  return uniform_draw < p_coop;
}

}  // namespace cooprpl
