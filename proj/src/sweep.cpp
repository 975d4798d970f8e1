#include "cooprpl/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cooprpl/errors.hpp"

namespace cooprpl {

std::string_view to_string(SweepAxis axis) { return axis == SweepAxis::Lsr ? "lsr" : "density"; }

std::optional<SweepAxis> parse_sweep_axis(std::string_view text) {
  if (text == "lsr") return SweepAxis::Lsr;
  if (text == "density") return SweepAxis::DensityRatio;
  return std::nullopt;
}

void validate(const SweepSpec& spec) {
  auto fail = [](const std::string& what) { throw SimError(ErrorKind::Config, what); };
  if (spec.values.empty()) fail("sweep values must be nonempty");
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) fail("sweep values must be strictly increasing");
  }
  for (double v : spec.values) {
    if (spec.axis == SweepAxis::Lsr && !(v >= 0.0 && v <= 1.0)) fail("probability out of range: lsr sweep value");
    if (spec.axis == SweepAxis::DensityRatio && !(v > 0.0)) fail("density ratios must be positive");
  }
  if (spec.protocols.empty()) fail("at least one protocol is required");
  const bool coop = std::find(spec.protocols.begin(), spec.protocols.end(), Protocol::CoopRpl) != spec.protocols.end();
  if (coop && spec.classes.empty()) fail("CoopRPL needs at least one routing class");
  if (spec.seeds < 1) fail("seeds must be >= 1");
}

std::vector<Variant> expand_variants(const SweepSpec& spec) {
  std::vector<Variant> out;
  for (Protocol p : spec.protocols) {
    if (p == Protocol::CoopRpl) {
      for (RoutingClass c : spec.classes) out.push_back({p, c});
    } else {
      out.push_back({p, std::nullopt});
    }
  }
  return out;
}

std::string variant_class_label(const Variant& v) {
  return v.routing_class ? std::string(to_string(*v.routing_class)) : std::string("-");
}

ScenarioConfig point_config(const ScenarioConfig& base, const SweepSpec& spec, const Variant& variant,
                            double axis_value, int seed_index) {
  ScenarioConfig c = base;
  c.protocol = variant.protocol;
  if (variant.routing_class) c.routing_class = *variant.routing_class;
  if (spec.axis == SweepAxis::Lsr) {
    c.channel.mode = ChannelMode::SweptLsr;
    c.channel.lsr_value = axis_value;
  } else {
    c.density_ratio = axis_value;
  }
  c.seed = base.seed + static_cast<std::uint64_t>(seed_index);
  return c;
}

namespace {

struct Job {
  Variant variant;
  double axis_value;
  int seed_index;
};

std::string run_header(const RunResult& r, SweepAxis axis) {
  nlohmann::json j;
  j["run"] = {{"protocol", to_string(r.variant.protocol)},
              {"class", variant_class_label(r.variant)},
              {"axis", to_string(axis)},
              {"axis_value", r.axis_value},
              {"seed", r.seed}};
  return j.dump();
}

}  // namespace

SweepResult run_sweep(const ScenarioConfig& base, const SweepSpec& spec, int workers, TraceSink* trace) {
  validate(spec);
  std::vector<Job> jobs;
  for (const auto& v : expand_variants(spec)) {
    for (double x : spec.values) {
      for (int s = 0; s < spec.seeds; ++s) jobs.push_back({v, x, s});
    }
  }

  SweepResult result;
  result.runs.resize(jobs.size());
  std::vector<std::unique_ptr<MemoryTrace>> buffers(jobs.size());
  std::vector<bool> finished(jobs.size(), false);
  std::size_t flushed = 0;
  std::mutex mu;
  std::atomic<std::size_t> next{0};

  // Trace buffers are released in job order so the trace is independent of
  // scheduling.
  auto flush_ready = [&] {
    while (flushed < jobs.size() && finished[flushed]) {
      if (trace) {
        trace->write(run_header(result.runs[flushed], spec.axis));
        for (const auto& line : buffers[flushed]->lines) trace->write(line);
      }
      buffers[flushed].reset();
      ++flushed;
    }
  };

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      RunResult r;
      r.variant = job.variant;
      r.axis_value = job.axis_value;
      const ScenarioConfig cfg = point_config(base, spec, job.variant, job.axis_value, job.seed_index);
      r.seed = cfg.seed;
      auto buffer = trace ? std::make_unique<MemoryTrace>() : nullptr;
      try {
        r.metrics = run_scenario(cfg, buffer.get());
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      std::lock_guard lock(mu);
      result.runs[i] = std::move(r);
      buffers[i] = std::move(buffer);
      finished[i] = true;
      flush_ready();
    }
  };

  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& r : result.runs) {
    if (!r.metrics) ++result.failed;
  }
  return result;
}

namespace {

std::string fmt(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v, int precision) { return v ? fmt(*v, precision) : "NA"; }

struct Moments {
  std::vector<double> values;
  std::optional<double> mean() const {
    if (values.empty()) return std::nullopt;
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  std::optional<double> stddev() const {
    if (values.size() < 2) return std::nullopt;
    const double m = *mean();
    double s = 0.0;
    for (double v : values) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(values.size() - 1));
  }
};

}  // namespace

void write_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result) {
  out << kCsvHeader << '\n';
  const std::string axis(to_string(spec.axis));
  std::size_t i = 0;
  while (i < result.runs.size()) {
    const RunResult& first = result.runs[i];
    const std::string prefix = std::string(to_string(first.variant.protocol)) + ',' +
                               variant_class_label(first.variant) + ',' + axis + ',' + fmt(first.axis_value, 4) + ',';
    Moments pdr, retx, dslots, dms, sent, delivered, dropped;
    std::size_t j = i;
    for (; j < result.runs.size() && j < i + static_cast<std::size_t>(spec.seeds); ++j) {
      const RunResult& r = result.runs[j];
      out << prefix << r.seed << ',';
      if (!r.metrics) {
        out << "failed,NA,NA,NA,NA,NA,NA\n";
        continue;
      }
      const MetricsRow& m = *r.metrics;
      out << fmt(m.pdr, 6) << ',' << fmt(m.mean_retransmissions, 6) << ',' << fmt_opt(m.mean_delay_slots, 4) << ','
          << fmt_opt(m.mean_delay_ms, 4) << ',' << m.sent << ',' << m.delivered << ',' << m.dropped << '\n';
      pdr.values.push_back(m.pdr);
      retx.values.push_back(m.mean_retransmissions);
      if (m.mean_delay_slots) dslots.values.push_back(*m.mean_delay_slots);
      if (m.mean_delay_ms) dms.values.push_back(*m.mean_delay_ms);
      sent.values.push_back(static_cast<double>(m.sent));
      delivered.values.push_back(static_cast<double>(m.delivered));
      dropped.values.push_back(static_cast<double>(m.dropped));
    }
    if (pdr.values.empty()) {
      out << prefix << "mean,failed,NA,NA,NA,NA,NA,NA\n";
    } else {
      out << prefix << "mean," << fmt_opt(pdr.mean(), 6) << ',' << fmt_opt(retx.mean(), 6) << ','
          << fmt_opt(dslots.mean(), 4) << ',' << fmt_opt(dms.mean(), 4) << ',' << fmt_opt(sent.mean(), 2) << ','
          << fmt_opt(delivered.mean(), 2) << ',' << fmt_opt(dropped.mean(), 2) << '\n';
      if (pdr.values.size() >= 2) {
        out << prefix << "stddev," << fmt_opt(pdr.stddev(), 6) << ',' << fmt_opt(retx.stddev(), 6) << ','
            << fmt_opt(dslots.stddev(), 4) << ',' << fmt_opt(dms.stddev(), 4) << ',' << fmt_opt(sent.stddev(), 2)
            << ',' << fmt_opt(delivered.stddev(), 2) << ',' << fmt_opt(dropped.stddev(), 2) << '\n';
      }
    }
    i = j;
  }
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct PointMeans {
  std::optional<double> pdr;
  std::optional<double> delay;
};

}  // namespace

std::vector<ComparisonRow> compare_csv(std::string_view csv_text) {
  // (protocol, class) -> axis value -> means
  std::map<std::pair<std::string, std::string>, std::map<double, PointMeans>> table;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < csv_text.size()) {
    auto end = csv_text.find('\n', start);
    if (end == std::string_view::npos) end = csv_text.size();
    std::string_view line = csv_text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line_no == 1) continue;
    const auto f = split(line, ',');
    if (f.size() != 12) {
      throw SimError(ErrorKind::MalformedStats, "line " + std::to_string(line_no) + ": expected 12 columns");
    }
    if (f[4] != "mean") continue;
    const auto x = parse_number(f[3]);
    if (!x) throw SimError(ErrorKind::MalformedStats, "line " + std::to_string(line_no) + ": bad axis value");
    table[{std::string(f[0]), std::string(f[1])}][*x] = PointMeans{parse_number(f[5]), parse_number(f[7])};
  }

  auto find_baseline = [&](const std::string& protocol) -> const std::map<double, PointMeans>* {
    for (const auto& [key, points] : table) {
      if (key.first == protocol) return &points;
    }
    return nullptr;
  };
  const auto* rpl = find_baseline("RPL");
  const auto* opp = find_baseline("OppRPL");
  if (!rpl) throw SimError(ErrorKind::MalformedStats, "comparison needs RPL mean rows");

  std::vector<ComparisonRow> rows;
  for (const auto& [key, points] : table) {
    if (key.first != "CoopRPL") continue;
    ComparisonRow row;
    row.coop_class = key.second;
    auto bump = [](std::optional<double>& slot, double v) { slot = slot ? std::max(*slot, v) : v; };
    for (const auto& [x, coop] : points) {
      if (!coop.pdr) continue;
      if (auto it = rpl->find(x); it != rpl->end()) {
        if (it->second.pdr) bump(row.max_gain_vs_rpl, 100.0 * (*coop.pdr - *it->second.pdr));
        if (it->second.delay && coop.delay && *it->second.delay > 0.0) {
          bump(row.max_delay_reduction, 100.0 * (*it->second.delay - *coop.delay) / *it->second.delay);
        }
      }
      if (opp) {
        if (auto it = opp->find(x); it != opp->end() && it->second.pdr) {
          const double gain = 100.0 * (*coop.pdr - *it->second.pdr);
          bump(row.max_gain_vs_opp, gain);
          if (!row.gain_vs_opp_at_low && x == opp->begin()->first) row.gain_vs_opp_at_low = gain;
        }
      }
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw SimError(ErrorKind::MalformedStats, "comparison needs CoopRPL mean rows");
  return rows;
}

std::string format_comparison(const std::vector<ComparisonRow>& rows) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %16s %16s %18s %18s\n", "class", "dPDR_vs_RPL_pts", "dPDR_vs_Opp_pts",
                "dPDR_vs_Opp_low_pts", "delay_reduction_%");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-6s %16s %16s %18s %18s\n", r.coop_class.c_str(),
                  fmt_opt(r.max_gain_vs_rpl, 2).c_str(), fmt_opt(r.max_gain_vs_opp, 2).c_str(),
                  fmt_opt(r.gain_vs_opp_at_low, 2).c_str(), fmt_opt(r.max_delay_reduction, 2).c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace cooprpl
