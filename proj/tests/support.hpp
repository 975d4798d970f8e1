#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cooprpl/rpl.hpp"
#include "cooprpl/sim_engine.hpp"

namespace testing {

// Follows default parents with a visited set; rejects cycles, dead ends and
// any step where the rank does not drop.
inline bool default_paths_reach_gateway(std::span<const cooprpl::NodeState> nodes) {
  for (const auto& start : nodes) {
    if (start.is_gateway() || !start.joined) continue;
    std::vector<bool> seen(nodes.size(), false);
    const cooprpl::NodeState* cur = &start;
    while (!cur->is_gateway()) {
      if (seen[cur->id]) return false;
      seen[cur->id] = true;
      if (!cur->default_parent) return false;
      const auto& next = nodes[*cur->default_parent];
      if (!(next.rank.value < cur->rank.value)) return false;
      cur = &next;
    }
  }
  return true;
}

// Small scenario that forms and routes in milliseconds.
inline cooprpl::ScenarioConfig small_scenario(std::uint64_t seed) {
  cooprpl::ScenarioConfig c;
  c.seed = seed;
  c.region.side_length = 200.0;
  c.baseline_intensity = 40.0 / (200.0 * 200.0);
  c.n_packets = 200;
  return c;
}

}  // namespace testing
