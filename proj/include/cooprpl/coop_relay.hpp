#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cooprpl/rpl.hpp"
#include "cooprpl/topology.hpp"

namespace cooprpl {

struct RateWeights {
  double w_sinr = 0.25;
  double w_traffic = 0.25;
  double w_nch = 0.25;
  double w_etx = 0.25;

  friend bool operator==(const RateWeights&, const RateWeights&) = default;
};

// Throws SimError(InvalidArgument) unless every weight is in [0,1] and the
// four sum to 1 within 1e-9.
void validate(const RateWeights& w);

enum class RoutingClass { ClassA, ClassB, ClassC, BestEffort };

RateWeights preset_weights(RoutingClass cls);
std::string_view to_string(RoutingClass cls);
std::optional<RoutingClass> parse_routing_class(std::string_view text);

struct CandidateMetrics {
  NodeId relay = 0;
  double sinr_s_r = 0.0;  // dB
  double sinr_r_d = 0.0;
  double sinr_s_d = 0.0;
  std::uint32_t nac_r = 0;
  std::uint32_t nac_s = 0;
  std::uint32_t nch_r = 0;
  std::uint32_t nch_s = 0;
  double etx_s_r = 1.0;
  double etx_r_d = 1.0;
  double etx_s_d = 1.0;
};

// Stage 1: neighbors ranked strictly below the sender, minus its default
// parent (the destination of the hop).
std::vector<NodeId> filter_candidates_by_rank(const NodeState& sender, std::span<const NodeState> nodes,
                                              std::span<const NodeId> sender_neighbors);

// Stage 2 eligibility tests, all strict.
bool eligible_class_a(const CandidateMetrics& m);
bool eligible_class_b(const CandidateMetrics& m);
bool eligible_class_c(const CandidateMetrics& m);

// A single class tests its own condition; BestEffort accepts a candidate
// passing any of the three.
bool eligible(RoutingClass cls, const CandidateMetrics& m);

// Per-term min/max used to bring dB, counts and ETX onto [0,1].
struct RateNormalization {
  double sinr_min = 0.0, sinr_max = 0.0;
  double traffic_min = 0.0, traffic_max = 0.0;
  double nch_min = 0.0, nch_max = 0.0;
  double etx_min = 0.0, etx_max = 0.0;

  static RateNormalization over(std::span<const CandidateMetrics> pool);
};

// Stage 3: weighted score. Degenerate terms (min == max) normalize to 0.5.
double compute_rate(const CandidateMetrics& m, const RateWeights& w, const RateNormalization& norm);

struct RatedCandidate {
  NodeId relay = 0;
  double rate = 0.0;
};

// Argmax over rates; ties go to the lowest node id.
std::optional<NodeId> select_by_rate(std::span<const RatedCandidate> rated);

// Stage 4: candidates are scored against `norm` (normally taken over the
// whole rank-filtered pool) and the best one is returned. Empty -> none.
std::optional<NodeId> select_relay(std::span<const CandidateMetrics> candidates, const RateWeights& w,
                                   const RateNormalization& norm);
// Normalizes over `candidates` themselves.
std::optional<NodeId> select_relay(std::span<const CandidateMetrics> candidates, const RateWeights& w);

// Bernoulli(p_coop) on a caller-supplied uniform draw; never true without a
// selected relay.
bool decide_use_relay(std::optional<NodeId> selected, double p_coop, double uniform_draw);

// Full selection for one sender, keeping the intermediate sets for tracing.
struct RelaySelection {
  std::vector<CandidateMetrics> pool;      // rank-filtered, with metrics
  std::vector<RatedCandidate> eligible;    // class-eligible, rated
  std::optional<NodeId> selected;
};

}  // namespace cooprpl
