#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "cooprpl/cooprpl.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct ConfigDeleter {
  void operator()(cooprpl_config* c) const { cooprpl_config_free(c); }
};
using ConfigPtr = std::unique_ptr<cooprpl_config, ConfigDeleter>;

std::string take(char* text) {
  std::string out = text ? text : "";
  cooprpl_string_free(text);
  return out;
}

int report(cooprpl_status status) {
  std::fprintf(stderr, "error: %s\n", cooprpl_last_error());
  return status == COOPRPL_ERR_PARTIAL ? kExitPartial : kExitConfig;
}

std::string defaults_footer() {
  cooprpl_config* raw = nullptr;
  if (cooprpl_config_new(&raw) != COOPRPL_OK) return {};
  ConfigPtr cfg(raw);
  char* echo = nullptr;
  char* schema = nullptr;
  cooprpl_config_echo(cfg.get(), &echo);
  cooprpl_config_schema(&schema);
  return "\nConfig file keys (section.key, meaning):\n" + take(schema) + "\nDefaults:\n" + take(echo);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coop-RPL smart-meter mesh simulator"};
  app.footer(defaults_footer());

  std::string config_path;
  std::string axis;
  std::string values;
  std::string protocols;
  std::string classes;
  int seeds = 0;
  std::string out_path = "-";
  std::string trace_path;
  int workers = 1;
  std::vector<std::string> overrides;
  bool single = false;
  bool echo_only = false;
  bool no_summary = false;
  std::string compare_path;
  std::string placements_path;

  app.add_option("--config", config_path, "Scenario config file")->check(CLI::ExistingFile);
  app.add_option("--sweep", axis, "Sweep axis")->check(CLI::IsMember({"lsr", "density"}));
  app.add_option("--values", values, "Comma-separated sweep values");
  app.add_option("--protocols", protocols, "Comma-separated protocols (RPL, OppRPL, CoopRPL)");
  app.add_option("--classes", classes, "Comma-separated CoopRPL classes (A, B, C, BE)");
  app.add_option("--seeds", seeds, "Seeds per sweep point")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "CSV output path, '-' for stdout");
  app.add_option("--trace", trace_path, "JSON-lines trace output path");
  app.add_option("--workers", workers, "Parallel sweep workers")->check(CLI::PositiveNumber);
  app.add_option("--set", overrides, "Override a config key: section.key=value")->take_all();
  app.add_flag("--single", single, "Run the scenario section once instead of a sweep");
  app.add_flag("--echo-config", echo_only, "Print the resolved config and exit");
  app.add_flag("--no-summary", no_summary, "Skip the comparison table after a sweep");
  app.add_option("--compare", compare_path, "Print the comparison table for an existing CSV and exit");
  app.add_option("--placements", placements_path, "Write node placements (node_id,x,y) to this path and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (!compare_path.empty()) {
    char* table = nullptr;
    if (const auto st = cooprpl_compare_csv(compare_path.c_str(), &table); st != COOPRPL_OK) return report(st);
    std::cout << take(table);
    return kExitOk;
  }

  cooprpl_config* raw = nullptr;
  const cooprpl_status load =
      config_path.empty() ? cooprpl_config_new(&raw) : cooprpl_config_load(config_path.c_str(), &raw);
  if (load != COOPRPL_OK) return report(load);
  ConfigPtr cfg(raw);

  auto set = [&](const std::string& key, const std::string& value) {
    if (const auto st = cooprpl_config_set(cfg.get(), key.c_str(), value.c_str()); st != COOPRPL_OK) {
      std::fprintf(stderr, "error: %s: %s\n", key.c_str(), cooprpl_last_error());
      return false;
    }
    return true;
  };
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", o.c_str());
      return kExitConfig;
    }
    if (!set(o.substr(0, eq), o.substr(eq + 1))) return kExitConfig;
  }
  if (!axis.empty() && !set("sweep.axis", axis)) return kExitConfig;
  if (!values.empty() && !set("sweep.values", values)) return kExitConfig;
  if (!protocols.empty() && !set("sweep.protocols", protocols)) return kExitConfig;
  if (!classes.empty() && !set("sweep.classes", classes)) return kExitConfig;
  if (seeds > 0 && !set("sweep.seeds", std::to_string(seeds))) return kExitConfig;
  if (const auto st = cooprpl_config_validate(cfg.get()); st != COOPRPL_OK) return report(st);

  char* echo_raw = nullptr;
  if (const auto st = cooprpl_config_echo(cfg.get(), &echo_raw); st != COOPRPL_OK) return report(st);
  const std::string echo = take(echo_raw);
  if (echo_only) {
    std::cout << echo;
    return kExitOk;
  }

  if (!placements_path.empty()) {
    char* csv = nullptr;
    if (const auto st = cooprpl_export_placements(cfg.get(), &csv); st != COOPRPL_OK) return report(st);
    std::FILE* f = std::fopen(placements_path.c_str(), "wb");
    if (!f) {
      std::fprintf(stderr, "error: cannot open '%s'\n", placements_path.c_str());
      cooprpl_string_free(csv);
      return kExitConfig;
    }
    std::fputs(csv, f);
    std::fclose(f);
    cooprpl_string_free(csv);
    return kExitOk;
  }

  // The resolved config goes wherever it cannot corrupt the CSV.
  const bool csv_on_stdout = out_path == "-";
  (csv_on_stdout ? std::cerr : std::cout) << "# resolved configuration\n" << echo << std::flush;

  const char* trace = trace_path.empty() ? nullptr : trace_path.c_str();
  if (single) {
    cooprpl_metrics m{};
    if (const auto st = cooprpl_run_scenario(cfg.get(), trace, &m); st != COOPRPL_OK) return report(st);
    std::printf("pdr=%.6f mean_retx=%.6f mean_delay_slots=", m.pdr, m.mean_retransmissions);
    if (std::isnan(m.mean_delay_slots)) {
      std::printf("NA mean_delay_ms=NA");
    } else {
      std::printf("%.4f mean_delay_ms=%.4f", m.mean_delay_slots, m.mean_delay_ms);
    }
    std::printf(" sent=%llu delivered=%llu dropped=%llu%s\n", static_cast<unsigned long long>(m.sent),
                static_cast<unsigned long long>(m.delivered), static_cast<unsigned long long>(m.dropped),
                m.disconnected ? " disconnected" : "");
    return kExitOk;
  }

  cooprpl_sweep_summary summary{};
  const auto st = cooprpl_run_sweep(cfg.get(), workers, out_path.c_str(), trace, &summary);
  if (st != COOPRPL_OK && st != COOPRPL_ERR_PARTIAL) return report(st);
  if (st == COOPRPL_ERR_PARTIAL) std::fprintf(stderr, "warning: %s\n", cooprpl_last_error());

  if (!csv_on_stdout && !no_summary) {
    char* table = nullptr;
    if (cooprpl_compare_csv(out_path.c_str(), &table) == COOPRPL_OK) {
      std::cout << "\n" << take(table);
    }
  }
  return st == COOPRPL_ERR_PARTIAL ? kExitPartial : kExitOk;
}
