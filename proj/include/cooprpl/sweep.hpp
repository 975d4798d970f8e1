#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cooprpl/sim_engine.hpp"
#include "cooprpl/trace.hpp"

namespace cooprpl {

enum class SweepAxis { Lsr, DensityRatio };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(std::string_view text);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Lsr;
  std::vector<double> values{0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<Protocol> protocols{Protocol::Rpl, Protocol::OppRpl, Protocol::CoopRpl};
  std::vector<RoutingClass> classes{RoutingClass::ClassA, RoutingClass::ClassB, RoutingClass::ClassC,
                                    RoutingClass::BestEffort};
  int seeds = 20;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

// Throws SimError(Config): values nonempty and strictly increasing, LSR
// values in [0,1], density ratios positive, at least one protocol, classes
// present when CoopRPL is swept, seeds >= 1.
void validate(const SweepSpec& spec);

// A protocol, plus the routing class when the protocol is CoopRPL.
struct Variant {
  Protocol protocol = Protocol::Rpl;
  std::optional<RoutingClass> routing_class;
};

std::vector<Variant> expand_variants(const SweepSpec& spec);
std::string variant_class_label(const Variant& v);

// The scenario for one (variant, axis value, seed index). Seeds run
// base.seed, base.seed + 1, ...
ScenarioConfig point_config(const ScenarioConfig& base, const SweepSpec& spec, const Variant& variant,
                            double axis_value, int seed_index);

struct RunResult {
  Variant variant;
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  std::optional<MetricsRow> metrics;  // empty when the run failed
  std::string error;
};

struct SweepResult {
  std::vector<RunResult> runs;  // variant-major, then axis value, then seed
  std::size_t failed = 0;
};

// Runs every point on `workers` threads. Results, CSV and trace output do
// not depend on the worker count. Trace lines of each run are preceded by a
// {"run":{...}} header line.
SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec, int workers = 1, TraceSink* trace = nullptr);

inline constexpr std::string_view kCsvHeader =
    "protocol,class,axis,axis_value,seed,pdr,mean_retx,mean_delay_slots,mean_delay_ms,sent,delivered,dropped";

// Data rows per seed, then a "mean" row and (with two or more successful
// seeds) a "stddev" row for each point.
void write_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result);

struct ComparisonRow {
  std::string coop_class;
  std::optional<double> max_gain_vs_rpl;      // percentage points
  std::optional<double> max_gain_vs_opp;      // percentage points
  std::optional<double> max_delay_reduction;  // percent of RPL delay
  std::optional<double> gain_vs_opp_at_low;   // percentage points at the smallest axis value
};

// Reads the mean rows of a sweep CSV. Throws SimError(MalformedStats) when
// RPL or CoopRPL rows are missing.
std::vector<ComparisonRow> compare_csv(std::string_view csv_text);
std::string format_comparison(const std::vector<ComparisonRow>& rows);

}  // namespace cooprpl
