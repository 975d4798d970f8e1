#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cooprpl/sim_engine.hpp"
#include "cooprpl/sweep.hpp"

namespace cooprpl {

struct RunConfig {
  ScenarioConfig scenario;
  SweepSpec sweep;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ConfigKey {
  std::string section;
  std::string name;
  std::string help;
};

// Every accepted key, in echo order.
const std::vector<ConfigKey>& config_schema();

// INI-style text: "[section]" headers, "key = value" lines, '#' or ';'
// comments. Keys before the first header are looked up by name alone.
// Unknown keys, malformed values and out-of-range values throw
// SimError(Config) with a "<origin>:<line>: " prefix; cross-field checks
// run last.
RunConfig parse_config(std::string_view text, std::string_view origin = "<config>");
RunConfig load_config(const std::string& path);

// Sets one key, addressed as "section.key" or plain "key".
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

// Fully resolved config in the same format; parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& config);

}  // namespace cooprpl
