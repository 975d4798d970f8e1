#include "cooprpl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "cooprpl/errors.hpp"

namespace cooprpl {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& what) { throw SimError(ErrorKind::Config, what); }

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    bad("malformed number '" + std::string(s) + "'");
  }
  return v;
}

long long to_int(std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad("malformed integer '" + std::string(s) + "'");
  return v;
}

int to_int32(std::string_view s) {
  const long long v = to_int(s);
  if (v < INT32_MIN || v > INT32_MAX) bad("integer out of range '" + std::string(trim(s)) + "'");
  return static_cast<int>(v);
}

std::uint64_t to_u64(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) bad("malformed unsigned integer '" + std::string(s) + "'");
  return v;
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  bad("malformed boolean '" + std::string(s) + "'");
}

double to_probability(std::string_view s, std::string_view what) {
  const double v = to_double(s);
  if (!(v >= 0.0 && v <= 1.0)) bad("probability out of range: " + std::string(what) + " = " + std::string(trim(s)));
  return v;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(',', start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string boolean(bool v) { return v ? "true" : "false"; }

template <class T, class F>
std::string join(const std::vector<T>& items, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += f(items[i]);
  }
  return out;
}

struct Entry {
  ConfigKey key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    std::vector<Entry> t;
    auto add = [&](std::string section, std::string name, std::string help, auto set, auto get) {
      t.push_back(Entry{{std::move(section), std::move(name), std::move(help)}, set, get});
    };

    add("scenario", "seed", "base seed; sweep seeds count up from here",
        [](RunConfig& c, std::string_view v) { c.scenario.seed = to_u64(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.seed); });
    add("scenario", "n_packets", "packets generated per run",
        [](RunConfig& c, std::string_view v) { c.scenario.n_packets = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.n_packets); });
    add("scenario", "traffic_window_slots", "generation window in slots; 0 means 2 x n_packets",
        [](RunConfig& c, std::string_view v) { c.scenario.traffic_window_slots = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.traffic_window_slots); });
    add("scenario", "warmup_slots", "upper bound on DAG formation",
        [](RunConfig& c, std::string_view v) { c.scenario.warmup_slots = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.warmup_slots); });
    add("scenario", "quiescence_slots", "formation ends after this many slots without a rank or parent change",
        [](RunConfig& c, std::string_view v) { c.scenario.quiescence_slots = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.quiescence_slots); });
    add("scenario", "slot_ms", "slot duration in milliseconds",
        [](RunConfig& c, std::string_view v) { c.scenario.slot_ms = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.slot_ms); });
    add("scenario", "placement_attempts", "sub-seeds tried before reporting disconnected-root",
        [](RunConfig& c, std::string_view v) { c.scenario.placement_attempts = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.placement_attempts); });

    add("region", "side_length", "square side in meters",
        [](RunConfig& c, std::string_view v) { c.scenario.region.side_length = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.region.side_length); });
    add("region", "baseline_intensity", "meters per square meter at density ratio 1",
        [](RunConfig& c, std::string_view v) { c.scenario.baseline_intensity = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.baseline_intensity); });
    add("region", "density_ratio", "multiplier on the baseline intensity",
        [](RunConfig& c, std::string_view v) { c.scenario.density_ratio = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.density_ratio); });

    add("channel", "mode", "physical or swept_lsr",
        [](RunConfig& c, std::string_view v) {
          v = trim(v);
          if (v == "physical") c.scenario.channel.mode = ChannelMode::Physical;
          else if (v == "swept_lsr") c.scenario.channel.mode = ChannelMode::SweptLsr;
          else bad("unknown channel mode '" + std::string(v) + "'");
        },
        [](const RunConfig& c) {
          return std::string(c.scenario.channel.mode == ChannelMode::Physical ? "physical" : "swept_lsr");
        });
    add("channel", "lsr_value", "per-link success probability in swept_lsr mode",
        [](RunConfig& c, std::string_view v) { c.scenario.channel.lsr_value = to_probability(v, "lsr_value"); },
        [](const RunConfig& c) { return num(c.scenario.channel.lsr_value); });
    add("channel", "tx_power_w", "transmit power in watts",
        [](RunConfig& c, std::string_view v) { c.scenario.channel.tx_power_w = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.channel.tx_power_w); });
    add("channel", "path_loss_exponent", "log-distance exponent",
        [](RunConfig& c, std::string_view v) { c.scenario.channel.path_loss_exponent = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.channel.path_loss_exponent); });
    add("channel", "reference_loss_db", "path loss at 1 m",
        [](RunConfig& c, std::string_view v) { c.scenario.channel.reference_loss_db = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.channel.reference_loss_db); });
    add("channel", "noise_floor_w", "noise power in watts",
        [](RunConfig& c, std::string_view v) { c.scenario.channel.noise_floor_w = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.channel.noise_floor_w); });
    add("channel", "tx_range_m", "neighbor radius in meters",
        [](RunConfig& c, std::string_view v) { c.scenario.channel.tx_range_m = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.channel.tx_range_m); });
    add("channel", "sinr_threshold_db", "reception threshold in physical mode",
        [](RunConfig& c, std::string_view v) { c.scenario.channel.sinr_threshold_db = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.channel.sinr_threshold_db); });

    add("routing", "protocol", "RPL, OppRPL or CoopRPL (single runs)",
        [](RunConfig& c, std::string_view v) {
          const auto p = parse_protocol(trim(v));
          if (!p) bad("unknown protocol '" + std::string(trim(v)) + "'");
          c.scenario.protocol = *p;
        },
        [](const RunConfig& c) { return std::string(to_string(c.scenario.protocol)); });
    add("routing", "class", "A, B, C or BE (single runs)",
        [](RunConfig& c, std::string_view v) {
          const auto k = parse_routing_class(trim(v));
          if (!k) bad("unknown routing class '" + std::string(trim(v)) + "'");
          c.scenario.routing_class = *k;
        },
        [](const RunConfig& c) { return std::string(to_string(c.scenario.routing_class)); });
    add("routing", "weights", "preset, or w_sinr, w_traffic, w_nch, w_etx",
        [](RunConfig& c, std::string_view v) {
          if (trim(v) == "preset") {
            c.scenario.weights.reset();
            return;
          }
          const auto parts = split_list(v);
          if (parts.size() != 4) bad("weights need four comma-separated values");
          RateWeights w{to_double(parts[0]), to_double(parts[1]), to_double(parts[2]), to_double(parts[3])};
          try {
            validate(w);
          } catch (const SimError& e) {
            bad(e.what());
          }
          c.scenario.weights = w;
        },
        [](const RunConfig& c) {
          if (!c.scenario.weights) return std::string("preset");
          const auto& w = *c.scenario.weights;
          return num(w.w_sinr) + ", " + num(w.w_traffic) + ", " + num(w.w_nch) + ", " + num(w.w_etx);
        });
    add("routing", "p_coop", "probability of using a selected relay",
        [](RunConfig& c, std::string_view v) { c.scenario.p_coop = to_probability(v, "p_coop"); },
        [](const RunConfig& c) { return num(c.scenario.p_coop); });
    add("routing", "per_slot_sinr", "evaluate class A SINR on a faded draw instead of the mean",
        [](RunConfig& c, std::string_view v) { c.scenario.per_slot_sinr = to_bool(v); },
        [](const RunConfig& c) { return boolean(c.scenario.per_slot_sinr); });
    add("routing", "forwarding_set_size", "opportunistic forwarding set size",
        [](RunConfig& c, std::string_view v) {
          const long long n = to_int(v);
          if (n < 1) bad("forwarding set size must be >= 1");
          c.scenario.forwarding_set_size = static_cast<std::size_t>(n);
        },
        [](const RunConfig& c) { return std::to_string(c.scenario.forwarding_set_size); });

    add("forwarding", "max_retx", "sender retries after the first attempt",
        [](RunConfig& c, std::string_view v) { c.scenario.hop.max_retx = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.hop.max_retx); });
    add("forwarding", "relay_retx", "relay attempts per overheard failure",
        [](RunConfig& c, std::string_view v) { c.scenario.hop.relay_retx = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.hop.relay_retx); });
    add("forwarding", "retx_backoff_slots", "idle slots after a failed sender attempt",
        [](RunConfig& c, std::string_view v) { c.scenario.hop.retx_backoff_slots = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.hop.retx_backoff_slots); });
    add("forwarding", "backoff_jitter_slots", "extra backoff slots drawn uniformly from [0, jitter]",
        [](RunConfig& c, std::string_view v) { c.scenario.hop.backoff_jitter_slots = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.hop.backoff_jitter_slots); });
    add("forwarding", "count_relay_as_retx", "add relay transmissions to the retransmission metric",
        [](RunConfig& c, std::string_view v) { c.scenario.count_relay_as_retx = to_bool(v); },
        [](const RunConfig& c) { return boolean(c.scenario.count_relay_as_retx); });

    add("rpl", "trickle_imin_ms", "minimum trickle interval",
        [](RunConfig& c, std::string_view v) { c.scenario.trickle_imin_ms = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.trickle_imin_ms); });
    add("rpl", "trickle_doublings", "interval doublings up to the maximum",
        [](RunConfig& c, std::string_view v) { c.scenario.trickle_doublings = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.trickle_doublings); });
    add("rpl", "trickle_k", "redundancy constant",
        [](RunConfig& c, std::string_view v) { c.scenario.trickle_k = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.trickle_k); });
    add("rpl", "etx_max", "ETX assigned to links with no success",
        [](RunConfig& c, std::string_view v) { c.scenario.etx_max = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.etx_max); });
    add("rpl", "etx_alpha", "EWMA weight of a new ETX sample",
        [](RunConfig& c, std::string_view v) { c.scenario.etx_alpha = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.etx_alpha); });
    add("rpl", "etx_probes", "probe transmissions behind the initial ETX; 0 uses 1/p",
        [](RunConfig& c, std::string_view v) { c.scenario.etx_probes = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.etx_probes); });
    add("rpl", "parent_hysteresis", "rank improvement needed to switch parent",
        [](RunConfig& c, std::string_view v) { c.scenario.parent_hysteresis = to_double(v); },
        [](const RunConfig& c) { return num(c.scenario.parent_hysteresis); });
    add("rpl", "dis_timeout_slots", "slots without a DIO before an unjoined node solicits",
        [](RunConfig& c, std::string_view v) { c.scenario.dis_timeout_slots = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.scenario.dis_timeout_slots); });

    add("sweep", "axis", "lsr or density",
        [](RunConfig& c, std::string_view v) {
          const auto a = parse_sweep_axis(trim(v));
          if (!a) bad("unknown sweep axis '" + std::string(trim(v)) + "'");
          c.sweep.axis = *a;
        },
        [](const RunConfig& c) { return std::string(to_string(c.sweep.axis)); });
    add("sweep", "values", "comma-separated, strictly increasing",
        [](RunConfig& c, std::string_view v) {
          std::vector<double> values;
          for (auto part : split_list(v)) values.push_back(to_double(part));
          c.sweep.values = std::move(values);
        },
        [](const RunConfig& c) { return join(c.sweep.values, num); });
    add("sweep", "protocols", "comma-separated protocol names",
        [](RunConfig& c, std::string_view v) {
          std::vector<Protocol> out;
          for (auto part : split_list(v)) {
            const auto p = parse_protocol(part);
            if (!p) bad("unknown protocol '" + std::string(part) + "'");
            out.push_back(*p);
          }
          c.sweep.protocols = std::move(out);
        },
        [](const RunConfig& c) { return join(c.sweep.protocols, [](Protocol p) { return std::string(to_string(p)); }); });
    add("sweep", "classes", "comma-separated CoopRPL classes",
        [](RunConfig& c, std::string_view v) {
          std::vector<RoutingClass> out;
          for (auto part : split_list(v)) {
            const auto k = parse_routing_class(part);
            if (!k) bad("unknown routing class '" + std::string(part) + "'");
            out.push_back(*k);
          }
          c.sweep.classes = std::move(out);
        },
        [](const RunConfig& c) {
          return join(c.sweep.classes, [](RoutingClass k) { return std::string(to_string(k)); });
        });
    add("sweep", "seeds", "seeds per point",
        [](RunConfig& c, std::string_view v) { c.sweep.seeds = to_int32(v); },
        [](const RunConfig& c) { return std::to_string(c.sweep.seeds); });
    return t;
  }();
  return table;
}

const Entry* find_entry(std::string_view section, std::string_view name) {
  for (const auto& e : entries()) {
    if (e.key.name == name && (section.empty() || e.key.section == section)) return &e;
  }
  return nullptr;
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& e : entries()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

void set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  std::string_view section;
  if (const auto dot = key.find('.'); dot != std::string_view::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  const Entry* e = find_entry(section, key);
  if (!e) {
    bad("unknown key '" + (section.empty() ? std::string() : std::string(section) + ".") + std::string(key) + "'");
  }
  e->set(config, trim(value));
}

RunConfig parse_config(std::string_view text, std::string_view origin) {
  RunConfig config;
  std::string section;
  std::size_t line_no = 0;
  std::size_t start = 0;
  auto where = [&] { return std::string(origin) + ":" + std::to_string(line_no) + ": "; };
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    try {
      if (line.front() == '[') {
        if (line.back() != ']') bad("malformed section header");
        section = std::string(trim(line.substr(1, line.size() - 2)));
        bool known = false;
        for (const auto& k : config_schema()) known = known || k.section == section;
        if (!known) bad("unknown section '" + section + "'");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) bad("expected 'key = value'");
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      const Entry* e = find_entry(section, key);
      if (!e) {
        bad("unknown key '" + std::string(key) + "'" + (section.empty() ? "" : " in section [" + section + "]"));
      }
      e->set(config, value);
    } catch (const SimError& err) {
      throw SimError(ErrorKind::Config, where() + err.what());
    }
    if (end == text.size()) break;
  }
  try {
    validate(config.scenario);
    validate(config.sweep);
  } catch (const SimError& err) {
    throw SimError(ErrorKind::Config, std::string(origin) + ": " + err.what());
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError(ErrorKind::Io, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

std::string echo_config(const RunConfig& config) {
  std::string out;
  std::string section;
  for (const auto& e : entries()) {
    if (e.key.section != section) {
      if (!section.empty()) out += '\n';
      section = e.key.section;
      out += "[" + section + "]\n";
    }
    out += e.key.name + " = " + e.get(config) + "\n";
  }
  return out;
}

}  // namespace cooprpl
