// Acceptance run: one PASS/FAIL line per criterion. The exit status is 0
// when the failing criteria are exactly the ones listed with --expect-red
// (none by default), so a regression and an unexpected recovery both show.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cooprpl/config.hpp"
#include "cooprpl/coop_relay.hpp"
#include "cooprpl/forwarding.hpp"
#include "cooprpl/rpl.hpp"
#include "cooprpl/sim_engine.hpp"
#include "cooprpl/sweep.hpp"

using namespace cooprpl;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct MeanRow {
  double pdr = 0.0;
  double retx = 0.0;
  double delay = NAN;
};

// variant label ("RPL", "CoopRPL/A", ...) -> axis value -> mean row, read
// back from the CSV exactly as a user of the tool would see it.
using MeanTable = std::map<std::string, std::map<double, MeanRow>>;

MeanTable mean_rows(const std::string& csv) {
  MeanTable table;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 12 || f[4] != "mean" || f[5] == "failed") continue;
    const std::string label = f[1] == "-" ? f[0] : f[0] + "/" + f[1];
    MeanRow r;
    r.pdr = std::stod(f[5]);
    r.retx = std::stod(f[6]);
    r.delay = f[7] == "NA" ? NAN : std::stod(f[7]);
    table[label][std::stod(f[3])] = r;
  }
  return table;
}

struct SweepRun {
  SweepResult result;
  std::string csv;
  MeanTable means;
  double seconds = 0.0;
};

SweepRun run(const RunConfig& cfg, int workers) {
  SweepRun out;
  const auto t0 = std::chrono::steady_clock::now();
  out.result = run_sweep(cfg.scenario, cfg.sweep, workers);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream csv;
  write_csv(csv, cfg.sweep, out.result);
  out.csv = csv.str();
  out.means = mean_rows(out.csv);
  return out;
}

void report(int id, const std::string& name, const Verdict& v) {
  std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str());
  std::fflush(stdout);
}

Verdict fig3_trend(const SweepRun& lsr) {
  Verdict v;
  for (const auto& [label, points] : lsr.means) {
    double prev = -1.0;
    for (const auto& [x, row] : points) {
      if (!(row.pdr > prev)) v.fail(label + " PDR not rising at LSR " + num(x, 1));
      prev = row.pdr;
    }
  }
  const auto& be = lsr.means.at("CoopRPL/BE");
  const auto& rpl = lsr.means.at("RPL");
  for (const auto& [x, row] : be) {
    if (row.pdr < rpl.at(x).pdr) v.fail("BE below RPL at LSR " + num(x, 1));
  }
  if (lsr.seconds >= 120.0) v.fail("sweep took " + num(lsr.seconds, 1) + " s");
  if (v.pass) {
    v.detail = "PDR strictly rising for " + std::to_string(lsr.means.size()) + " variants, BE >= RPL at every point, sweep " +
               num(lsr.seconds, 1) + " s";
  }
  return v;
}

const ComparisonRow& best_effort_row(const std::vector<ComparisonRow>& rows) {
  for (const auto& r : rows) {
    if (r.coop_class == "BE") return r;
  }
  throw std::runtime_error("no BE row in the comparison");
}

Verdict headline_pdr(const SweepRun& lsr) {
  Verdict v;
  const auto& be = best_effort_row(compare_csv(lsr.csv));
  const double vs_rpl = be.max_gain_vs_rpl.value_or(NAN);
  const double vs_opp = be.gain_vs_opp_at_low.value_or(NAN);
  const std::string numbers =
      "max dPDR(BE-RPL) = " + num(vs_rpl, 2) + " pts [10, 30], dPDR(BE-OppRPL) at LSR 0.5 = " + num(vs_opp, 2) + " pts [3, 20]";
  if (!(vs_rpl >= 10.0 && vs_rpl <= 30.0)) v.fail(numbers);
  if (!(vs_opp >= 3.0 && vs_opp <= 20.0) && v.pass) v.fail(numbers);
  if (v.pass) v.detail = numbers;
  return v;
}

Verdict headline_delay(const SweepRun& lsr) {
  Verdict v;
  const auto& be = best_effort_row(compare_csv(lsr.csv));
  const double reduction = be.max_delay_reduction.value_or(NAN);
  v.detail = "max delay reduction BE vs RPL = " + num(reduction, 2) + " % [5, 30]";
  if (!(reduction >= 5.0 && reduction <= 30.0)) v.pass = false;
  return v;
}

Verdict fig5_trend(const SweepRun& lsr) {
  Verdict v;
  for (const auto& [label, points] : lsr.means) {
    double prev = INFINITY;
    for (const auto& [x, row] : points) {
      if (!(row.retx < prev)) v.fail(label + " retransmissions not falling at LSR " + num(x, 1));
      prev = row.retx;
    }
  }
  for (const auto& [x, a] : lsr.means.at("CoopRPL/A")) {
    for (const char* other : {"CoopRPL/B", "CoopRPL/C"}) {
      const double r = lsr.means.at(other).at(x).retx;
      if (!(a.retx <= r)) v.fail("class A " + num(a.retx) + " above " + std::string(other + 8) + " " + num(r) + " at LSR " + num(x, 1));
    }
  }
  if (v.pass) v.detail = "retransmissions strictly falling for every variant, class A lowest among A/B/C at every point";
  return v;
}

Verdict fig4_trend(const SweepRun& density) {
  Verdict v;
  for (const auto& [label, points] : density.means) {
    double prev = -1.0;
    for (const auto& [x, row] : points) {
      if (row.pdr < prev) v.fail(label + " PDR drops at density " + num(x, 1) + " (" + num(prev) + " -> " + num(row.pdr) + ")");
      prev = row.pdr;
    }
  }
  if (density.result.failed) v.fail(std::to_string(density.result.failed) + " failed runs");
  if (v.pass) {
    v.detail = "PDR non-decreasing over " + std::to_string(density.means.begin()->second.size()) + " density points for " +
               std::to_string(density.means.size()) + " variants";
  }
  return v;
}

// Exhaustive walk of one hop's outcome tree at link probability p.
double delivery_probability(const std::function<HopOutcome(const LinkTrial&)>& hop, double p) {
  struct More {};
  double delivered = 0.0;
  std::function<void(std::vector<bool>&)> walk = [&](std::vector<bool>& prefix) {
    std::size_t used = 0;
    HopOutcome o;
    try {
      o = hop([&](NodeId, NodeId, int) {
        if (used == prefix.size()) throw More{};
        return static_cast<bool>(prefix[used++]);
      });
    } catch (const More&) {
      for (bool b : {true, false}) {
        prefix.push_back(b);
        walk(prefix);
        prefix.pop_back();
      }
      return;
    }
    if (!o.delivered) return;
    double w = 1.0;
    for (bool b : prefix) w *= b ? p : 1.0 - p;
    delivered += w;
  };
  std::vector<bool> prefix;
  walk(prefix);
  return delivered;
}

bool paths_loop_free(const std::vector<NodeState>& nodes) {
  for (const auto& s : nodes) {
    if (s.is_gateway() || !s.joined) continue;
    std::vector<bool> seen(nodes.size(), false);
    const NodeState* cur = &s;
    while (!cur->is_gateway()) {
      if (seen[cur->id] || !cur->default_parent) return false;
      seen[cur->id] = true;
      const NodeState& next = nodes[*cur->default_parent];
      if (!(next.rank.value < cur->rank.value)) return false;
      cur = &next;
    }
  }
  return true;
}

double snr_db(const Topology& t, NodeId tx, NodeId rx) {
  const auto& p = t.params();
  const double d = std::hypot(t.nodes()[tx].x - t.nodes()[rx].x, t.nodes()[tx].y - t.nodes()[rx].y);
  return 10.0 * std::log10(p.tx_power_w / p.noise_floor_w) - p.reference_loss_db - 10.0 * p.path_loss_exponent * std::log10(d);
}

Verdict property_suite(const std::vector<const SweepRun*>& sweeps, const std::vector<const RunConfig*>& configs,
                       const std::string& golden_dir, int workers) {
  Verdict v;
  std::vector<std::string> done;

  {
    std::mt19937_64 gen(20240601);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t s = 1 + gen() % 100000;
      const std::uint64_t a = s + gen() % 100000;
      bad += compute_etx(a, s) != static_cast<double>(a) / static_cast<double>(s);
    }
    if (bad) v.fail(std::to_string(bad) + " ETX mismatches");
    done.push_back("ETX 1000/1000");
  }

  {
    int checked = 0, bad = 0;
    const RoutingClass classes[] = {RoutingClass::ClassA, RoutingClass::ClassB, RoutingClass::ClassC, RoutingClass::BestEffort};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      for (RoutingClass cls : classes) {
        ScenarioConfig c = configs[0]->scenario;
        c.seed = seed;
        c.protocol = Protocol::CoopRpl;
        c.routing_class = cls;
        c.channel.mode = ChannelMode::SweptLsr;
        c.channel.lsr_value = 0.5 + 0.1 * static_cast<double>(seed % 5);
        Simulation sim(c);
        sim.form_dag();
        const auto& nodes = sim.nodes();
        std::vector<std::uint32_t> nac(nodes.size(), 0), nch(nodes.size(), 0);
        for (const auto& s : nodes) {
          if (s.is_gateway() || !s.joined) continue;
          ++nch[*s.default_parent];
          for (NodeId h = *s.default_parent; h != kGateway; h = *nodes[h].default_parent) ++nac[h];
        }
        for (const auto& s : nodes) {
          if (s.is_gateway() || !s.joined) continue;
          const auto sel = sim.select_relay_for(s.id);
          if (!sel.selected) continue;
          const NodeId r = *sel.selected, d = *s.default_parent;
          const auto& etx = sim.etx();
          const bool a = snr_db(sim.topology(), s.id, r) > snr_db(sim.topology(), s.id, d) &&
                         snr_db(sim.topology(), r, d) > snr_db(sim.topology(), s.id, d);
          const bool b = nac[r] < nac[s.id] && nch[r] < nch[s.id];
          const bool cc = etx.get(s.id, d) > etx.get(s.id, r) + etx.get(r, d);
          bool ok = nodes[r].rank < s.rank && r != d;
          switch (cls) {
            case RoutingClass::ClassA: ok = ok && a; break;
            case RoutingClass::ClassB: ok = ok && b; break;
            case RoutingClass::ClassC: ok = ok && cc; break;
            case RoutingClass::BestEffort: ok = ok && (a || b || cc); break;
          }
          bad += !ok;
          ++checked;
        }
      }
    }
    if (bad) v.fail(std::to_string(bad) + " of " + std::to_string(checked) + " selected relays fail eligibility");
    done.push_back("eligibility " + std::to_string(checked) + " relays on 50 topologies");
  }

  {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(0.0, 1.0), db(-5.0, 40.0), e(1.0, 16.0), scale(0.05, 20.0);
    int bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<CandidateMetrics> pool(1 + gen() % 10);
      for (std::size_t i = 0; i < pool.size(); ++i) {
        auto& m = pool[i];
        m.relay = static_cast<NodeId>(i * 3 + gen() % 3);
        m.sinr_s_r = db(gen);
        m.sinr_r_d = db(gen);
        m.nac_r = static_cast<std::uint32_t>(gen() % 20);
        m.nch_r = static_cast<std::uint32_t>(gen() % 6);
        m.etx_s_r = e(gen);
        m.etx_r_d = e(gen);
      }
      RateWeights w{u(gen), u(gen), u(gen), u(gen)};
      const double sum = w.w_sinr + w.w_traffic + w.w_nch + w.w_etx;
      w = {w.w_sinr / sum, w.w_traffic / sum, w.w_nch / sum, w.w_etx / sum};
      const double c = scale(gen);
      const auto norm = RateNormalization::over(pool);
      bad += select_relay(pool, w, norm) != select_relay(pool, RateWeights{c * w.w_sinr, c * w.w_traffic, c * w.w_nch, c * w.w_etx}, norm);
    }
    if (bad) v.fail(std::to_string(bad) + " argmax changes under weight scaling");
    done.push_back("scale invariance 1000/1000");
  }

  {
    std::size_t topologies = 0;
    int bad = 0;
    for (const RunConfig* cfg : configs) {
      for (const auto& variant : expand_variants(cfg->sweep)) {
        for (double x : cfg->sweep.values) {
          for (int k = 0; k < cfg->sweep.seeds; ++k) {
            Simulation sim(point_config(cfg->scenario, cfg->sweep, variant, x, k));
            sim.form_dag();
            bad += !paths_loop_free(sim.nodes());
            ++topologies;
          }
        }
      }
    }
    if (bad) v.fail(std::to_string(bad) + " formed DAGs with a loop or rank inversion");
    done.push_back("DAG checks on " + std::to_string(topologies) + " formations");
  }

  {
    HopParams params;
    params.backoff_jitter_slots = 0;
    for (int tenth = 1; tenth <= 9; ++tenth) {
      const double p = tenth / 10.0;
      const double direct = delivery_probability([&](const LinkTrial& t) { return forward_hop_rpl(1, NodeId{0}, params, t); }, p);
      const double coop =
          delivery_probability([&](const LinkTrial& t) { return forward_hop_coop(1, NodeId{0}, NodeId{2}, params, t); }, p);
      if (!(coop >= direct)) v.fail("cooperative hop below direct at p = " + num(p, 1));
    }
    done.push_back("hop dominance p = 0.1..0.9");
  }

  {
    std::size_t runs = 0;
    int bad = 0;
    for (const SweepRun* s : sweeps) {
      for (const auto& r : s->result.runs) {
        if (!r.metrics) continue;
        ++runs;
        bad += r.metrics->sent != r.metrics->delivered + r.metrics->dropped;
      }
    }
    if (bad) v.fail(std::to_string(bad) + " runs break packet conservation");
    done.push_back("conservation on " + std::to_string(runs) + " runs");
  }

  {
    const RunConfig pinned = load_config(golden_dir + "/pinned.ini");
    std::ostringstream csv;
    write_csv(csv, pinned.sweep, run_sweep(pinned.scenario, pinned.sweep, workers));
    std::ifstream in(golden_dir + "/pinned.csv", std::ios::binary);
    std::ostringstream golden;
    golden << in.rdbuf();
    if (!in || csv.str() != golden.str()) v.fail("pinned sweep differs from the golden CSV");
    done.push_back("golden CSV identical");
  }

  if (v.pass) {
    for (std::size_t i = 0; i < done.size(); ++i) v.detail += (i ? ", " : "") + done[i];
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string root = COOPRPL_SOURCE_DIR;
  int workers = 4;
  std::vector<int> expect_red;
  app.add_option("--root", root, "Source tree holding configs/ and tests/golden/");
  app.add_option("--expect-red", expect_red, "Criteria known to fail")->delimiter(',');
  app.add_option("--workers", workers, "Sweep workers")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig lsr_cfg = load_config(root + "/configs/lsr_sweep.ini");
    const RunConfig density_cfg = load_config(root + "/configs/density_sweep.ini");

    const SweepRun lsr = run(lsr_cfg, workers);
    const SweepRun density = run(density_cfg, workers);

    std::vector<Verdict> verdicts;
    verdicts.push_back(fig3_trend(lsr));
    report(1, "PDR rises with LSR", verdicts.back());
    verdicts.push_back(headline_pdr(lsr));
    report(2, "PDR gain magnitude", verdicts.back());
    verdicts.push_back(headline_delay(lsr));
    report(3, "delay reduction magnitude", verdicts.back());
    verdicts.push_back(fig5_trend(lsr));
    report(4, "retransmissions fall with LSR, class A lowest", verdicts.back());
    verdicts.push_back(fig4_trend(density));
    report(5, "PDR non-decreasing in density", verdicts.back());
    verdicts.push_back(property_suite({&lsr, &density}, {&lsr_cfg, &density_cfg}, root + "/tests/golden", workers));
    report(6, "exact property suite", verdicts.back());

    std::vector<int> red;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      if (!verdicts[i].pass) red.push_back(static_cast<int>(i) + 1);
    }
    std::sort(expect_red.begin(), expect_red.end());
    std::string listed;
    for (int id : red) listed += (listed.empty() ? "" : ",") + std::to_string(id);
    std::printf("failing criteria: %s (expected: ", listed.empty() ? "none" : listed.c_str());
    for (std::size_t i = 0; i < expect_red.size(); ++i) std::printf("%s%d", i ? "," : "", expect_red[i]);
    std::printf("%s)\n", expect_red.empty() ? "none" : "");
    return red == expect_red ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 2;
  }
}
