#include "cooprpl/cooprpl.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "cooprpl/config.hpp"
#include "cooprpl/errors.hpp"
#include "cooprpl/sweep.hpp"

struct cooprpl_config {
  cooprpl::RunConfig value;
};

namespace {

thread_local std::string g_last_error;

cooprpl_status status_for(cooprpl::ErrorKind kind) {
  switch (kind) {
    case cooprpl::ErrorKind::Config: return COOPRPL_ERR_CONFIG;
    case cooprpl::ErrorKind::Io: return COOPRPL_ERR_IO;
    case cooprpl::ErrorKind::InvalidArgument: return COOPRPL_ERR_INVALID_ARGUMENT;
    default: return COOPRPL_ERR_SIMULATION;
  }
}

template <class F>
cooprpl_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const cooprpl::SimError& e) {
    g_last_error = e.what();
    return status_for(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return COOPRPL_ERR_SIMULATION;
  } catch (...) {
    g_last_error = "unknown error";
    return COOPRPL_ERR_SIMULATION;
  }
}

cooprpl_status fail(cooprpl_status status, const char* message) {
  g_last_error = message;
  return status;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* cooprpl_last_error(void) { return g_last_error.c_str(); }

const char* cooprpl_version(void) { return "1.0.0"; }

cooprpl_status cooprpl_config_new(cooprpl_config** out) {
  if (!out) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = new cooprpl_config{};
    return COOPRPL_OK;
  });
}

cooprpl_status cooprpl_config_load(const char* path, cooprpl_config** out) {
  if (!path || !out) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new cooprpl_config{cooprpl::load_config(path)};
    return COOPRPL_OK;
  });
}

cooprpl_status cooprpl_config_parse(const char* text, cooprpl_config** out) {
  if (!text || !out) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new cooprpl_config{cooprpl::parse_config(text)};
    return COOPRPL_OK;
  });
}

cooprpl_status cooprpl_config_clone(const cooprpl_config* config, cooprpl_config** out) {
  if (!config || !out) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new cooprpl_config{config->value};
    return COOPRPL_OK;
  });
}

void cooprpl_config_free(cooprpl_config* config) { delete config; }

cooprpl_status cooprpl_config_set(cooprpl_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cooprpl::set_config_value(config->value, key, value);
    return COOPRPL_OK;
  });
}

cooprpl_status cooprpl_config_validate(const cooprpl_config* config) {
  if (!config) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cooprpl::validate(config->value.scenario);
    cooprpl::validate(config->value.sweep);
    return COOPRPL_OK;
  });
}

cooprpl_status cooprpl_config_echo(const cooprpl_config* config, char** out) {
  if (!config || !out) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup_string(cooprpl::echo_config(config->value));
    return COOPRPL_OK;
  });
}

cooprpl_status cooprpl_config_schema(char** out) {
  if (!out) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::string text;
    for (const auto& k : cooprpl::config_schema()) text += k.section + "." + k.name + "\t" + k.help + "\n";
    *out = dup_string(text);
    return COOPRPL_OK;
  });
}

void cooprpl_string_free(char* text) { std::free(text); }

cooprpl_status cooprpl_run_scenario(const cooprpl_config* config, const char* trace_path, cooprpl_metrics* out) {
  if (!config || !out) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ofstream trace_file;
    std::unique_ptr<cooprpl::StreamTrace> trace;
    if (trace_path) {
      trace_file.open(trace_path, std::ios::binary);
      if (!trace_file) throw cooprpl::SimError(cooprpl::ErrorKind::Io, std::string("cannot open trace file '") + trace_path + "'");
      trace = std::make_unique<cooprpl::StreamTrace>(trace_file);
    }
    const auto m = cooprpl::run_scenario(config->value.scenario, trace.get());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    *out = cooprpl_metrics{m.pdr,  m.mean_retransmissions, m.mean_delay_slots.value_or(nan), m.mean_delay_ms.value_or(nan),
                           m.sent, m.delivered,            m.dropped,                        m.disconnected ? 1 : 0};
    return COOPRPL_OK;
  });
}

cooprpl_status cooprpl_run_sweep(const cooprpl_config* config, int workers, const char* csv_path,
                                 const char* trace_path, cooprpl_sweep_summary* out) {
  if (!config || !csv_path) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& cfg = config->value;
    cooprpl::validate(cfg.scenario);
    cooprpl::validate(cfg.sweep);

    std::ofstream csv_file;
    const bool to_stdout = std::strcmp(csv_path, "-") == 0;
    if (!to_stdout) {
      csv_file.open(csv_path, std::ios::binary);
      if (!csv_file) throw cooprpl::SimError(cooprpl::ErrorKind::Io, std::string("cannot open output '") + csv_path + "'");
    }
    std::ofstream trace_file;
    std::unique_ptr<cooprpl::StreamTrace> trace;
    if (trace_path) {
      trace_file.open(trace_path, std::ios::binary);
      if (!trace_file) throw cooprpl::SimError(cooprpl::ErrorKind::Io, std::string("cannot open trace file '") + trace_path + "'");
      trace = std::make_unique<cooprpl::StreamTrace>(trace_file);
    }

    const auto result = cooprpl::run_sweep(cfg.scenario, cfg.sweep, workers, trace.get());
    cooprpl::write_csv(to_stdout ? std::cout : csv_file, cfg.sweep, result);
    if (out) *out = cooprpl_sweep_summary{result.runs.size(), result.failed};
    if (result.failed > 0) {
      for (const auto& r : result.runs) {
        if (!r.metrics) {
          g_last_error = std::to_string(result.failed) + " sweep run(s) failed; first: " + r.error;
          break;
        }
      }
      return COOPRPL_ERR_PARTIAL;
    }
    return COOPRPL_OK;
  });
}

cooprpl_status cooprpl_compare_csv(const char* csv_path, char** out) {
  if (!csv_path || !out) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw cooprpl::SimError(cooprpl::ErrorKind::Io, std::string("cannot open '") + csv_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    *out = dup_string(cooprpl::format_comparison(cooprpl::compare_csv(buf.str())));
    return COOPRPL_OK;
  });
}

cooprpl_status cooprpl_export_placements(const cooprpl_config* config, char** out) {
  if (!config || !out) return fail(COOPRPL_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& s = config->value.scenario;
    cooprpl::validate(s);
    auto placement = cooprpl::place_nodes(s.region, s.intensity(), s.seed, s.channel, s.placement_attempts);
    const cooprpl::Topology topo(std::move(placement.nodes), s.channel, s.seed);
    *out = dup_string(topo.placements_csv());
    return COOPRPL_OK;
  });
}

}  // extern "C"
