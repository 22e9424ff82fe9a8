// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Tolerances are pinned here, next to the checks that use them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "capcheck/capcheck.h"
#include "core/adl.hpp"
#include "core/kinematics.hpp"
#include "core/model.hpp"
#include "core/monitor.hpp"
#include "core/traceability.hpp"
#include "support.hpp"

namespace {

constexpr double kEulerTol = 1e-3;    // closed form vs forward Euler, dt = 1e-4
constexpr double kInverseTol = 1e-9;  // stopping_distance(adequate_speed(d)) vs d

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;

void report(int number, const std::string& what, bool ok, double elapsed) {
  std::printf("%s criterion %d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", number,
              what.c_str(), elapsed);
  if (!ok) ++g_failures;
}

capcheck::ArchitectureModel fixture_model() {
  return capcheck::parse_adl(support::slurp(support::fixture_path("crosswalk.adl")),
                             "crosswalk.adl");
}

// 1: serialize-parse identity over 1000 random models, under 10 s.
void criterion_1() {
  auto t0 = Clock::now();
  std::mt19937 rng(101);
  bool ok = true;
  for (int i = 0; i < 1000 && ok; ++i) {
    capcheck::ArchitectureModel m = support::rand_model(rng);
    std::string text = capcheck::serialize_adl(m);
    capcheck::ArchitectureModel back = capcheck::parse_adl(text, "roundtrip.adl");
    ok = back == m && capcheck::serialize_adl(back) == text;
  }
  double dt = seconds_since(t0);
  ok = ok && dt < 10.0;
  report(1, "ADL serialize-parse identity on 1000 random models", ok, dt);
}

// 2: propagation equals the reachable-set minimum on 500 DAGs, under 5 s.
void criterion_2() {
  auto t0 = Clock::now();
  std::mt19937 rng(202);
  bool ok = true;
  for (int i = 0; i < 500 && ok; ++i) {
    support::RandomDag d = support::rand_dag(rng);
    auto agg = capcheck::propagate(d.graph, d.own);
    for (const auto& s : d.graph.skills) {
      if (agg.at(s.id) != support::brute_force_aggregated(d.graph, d.own, s.id)) {
        ok = false;
        break;
      }
    }
  }
  double dt = seconds_since(t0);
  ok = ok && dt < 5.0;
  report(2, "aggregation equals brute-force oracle on 500 random DAGs", ok, dt);
}

// 3: monotonicity. Raising a leaf never lowers any aggregated value, adding
// a correspondence pair never shrinks an impact set, and the boundary is
// monotone in d, mu and -t_react. 200 cases per suite.
bool monotone_leaf_raise() {
  std::mt19937 rng(303);
  for (int i = 0; i < 200; ++i) {
    support::RandomDag d = support::rand_dag(rng);
    std::vector<std::string> leaves;
    for (const auto& s : d.graph.skills) {
      if (s.requires_ids.empty()) leaves.push_back(s.id);
    }
    const std::string& leaf =
        leaves[std::uniform_int_distribution<size_t>(0, leaves.size() - 1)(rng)];
    double lo = support::rand_real(rng, 0.0, 1.0);
    double hi = lo + (1.0 - lo) * support::rand_real(rng, 0.0, 1.0);
    d.own[leaf] = lo;
    auto before = capcheck::propagate(d.graph, d.own);
    d.own[leaf] = hi;
    auto after = capcheck::propagate(d.graph, d.own);
    for (const auto& [id, value] : before) {
      if (after.at(id) < value) return false;
    }
  }
  return true;
}

bool monotone_pair_addition() {
  std::mt19937 rng(313);
  int done = 0;
  for (int attempt = 0; attempt < 5000 && done < 200; ++attempt) {
    capcheck::ArchitectureModel m = support::rand_model(rng);
    if (m.correspondences.empty()) continue;
    auto& corr = m.correspondences[std::uniform_int_distribution<size_t>(
        0, m.correspondences.size() - 1)(rng)];
    const capcheck::Viewpoint* from = m.find_viewpoint(corr.from_viewpoint);
    const capcheck::Viewpoint* to = m.find_viewpoint(corr.to_viewpoint);
    if (!from || !to) continue;
    auto from_els = from->element_ids();
    auto to_els = to->element_ids();
    if (from_els.empty() || to_els.empty()) continue;

    // origin: any element of the from viewpoint
    capcheck::ElementRef origin{
        from->id, from_els[std::uniform_int_distribution<size_t>(
                      0, from_els.size() - 1)(rng)]};
    auto keys_of = [](const capcheck::ImpactSet& set) {
      std::vector<std::pair<std::string, std::string>> keys;
      for (const auto& ref : set.affected) keys.push_back({ref.viewpoint, ref.element});
      return keys;
    };
    auto before = keys_of(capcheck::impact(m, origin));

    corr.pairs.push_back(
        {from_els[std::uniform_int_distribution<size_t>(0, from_els.size() - 1)(rng)],
         to_els[std::uniform_int_distribution<size_t>(0, to_els.size() - 1)(rng)]});
    auto after = keys_of(capcheck::impact(m, origin));

    if (!std::includes(after.begin(), after.end(), before.begin(), before.end())) {
      return false;
    }
    ++done;
  }
  return done == 200;
}

bool monotone_boundary() {
  std::mt19937 rng(323);
  for (int i = 0; i < 200; ++i) {
    capcheck::ScenarioProfile p;
    p.id = "mono";
    p.v_init_v = 10.0;
    p.d_crossing_v = 100.0;
    p.a_max_v = 20.0;  // large enough that friction always binds
    p.mu_v = support::rand_real(rng, 0.1, 1.2);
    p.t_react_v = support::rand_real(rng, 0.0, 2.0);
    p.d_detect_v = std::uniform_int_distribution<int>(0, 1)(rng) == 0
                       ? std::numeric_limits<double>::infinity()
                       : support::rand_real(rng, 5.0, 60.0);
    p.van_offset_lat_v = support::rand_real(rng, 0.0, 4.0);
    p.van_length_v = support::rand_real(rng, 0.0, 10.0);
    p.ped_lat_v = support::rand_real(rng, 0.0, 8.0);
    p.g_v = 9.81;

    double d1 = support::rand_real(rng, 0.0, 80.0);
    double d2 = support::rand_real(rng, 0.0, 80.0);
    if (d1 > d2) std::swap(d1, d2);
    if (capcheck::boundary_speed(p, d1) > capcheck::boundary_speed(p, d2)) {
      return false;
    }

    double d = support::rand_real(rng, 0.0, 80.0);
    capcheck::ScenarioProfile q = p;
    q.mu_v = p.mu() + support::rand_real(rng, 0.0, 1.2 - p.mu());
    if (capcheck::boundary_speed(q, d) < capcheck::boundary_speed(p, d)) {
      return false;
    }

    q = p;
    q.t_react_v = p.t_react() + support::rand_real(rng, 0.0, 1.0);
    if (capcheck::boundary_speed(q, d) > capcheck::boundary_speed(p, d)) {
      return false;
    }
  }
  return true;
}

void criterion_3() {
  auto t0 = Clock::now();
  bool ok = monotone_leaf_raise() && monotone_pair_addition() && monotone_boundary();
  report(3, "monotonicity: leaf raises, pair additions, boundary in d/mu/-t_react",
         ok, seconds_since(t0));
}

// 4: closed-form stopping distance vs forward Euler at dt = 1e-4 on a
// 2000-point grid, and the exact inverse property of adequate_speed.
void criterion_4() {
  auto t0 = Clock::now();
  std::mt19937 rng(404);
  bool ok = true;
  for (int i = 0; i < 2000 && ok; ++i) {
    double v = support::rand_real(rng, 0.0, 18.0);
    double a = support::rand_real(rng, 1.0, 12.0);
    double tr = std::uniform_int_distribution<int>(0, 30000)(rng) * 1e-4;
    double closed = capcheck::stopping_distance(v, a, tr);
    double euler = support::euler_stopping_distance(v, a, tr);
    if (std::fabs(closed - euler) >= kEulerTol) ok = false;
  }
  for (int i = 0; i < 2000 && ok; ++i) {
    double d = support::rand_real(rng, 0.0, 100.0);
    double a = support::rand_real(rng, 1.0, 12.0);
    double tr = support::rand_real(rng, 0.0, 3.0);
    double dd = std::uniform_int_distribution<int>(0, 1)(rng) == 0
                    ? std::numeric_limits<double>::infinity()
                    : support::rand_real(rng, 0.0, 100.0);
    double de = std::min(d, dd);
    double v = capcheck::adequate_speed(d, a, tr, dd);
    if (de > 0.0 && std::fabs(capcheck::stopping_distance(v, a, tr) - de) >= kInverseTol) {
      ok = false;
    }
  }
  report(4, "stopping distance matches Euler within 1e-3 and inverts within 1e-9",
         ok, seconds_since(t0));
}

// 5: boundary shape plus a 100x100 (d, v) soundness grid against the
// simulated conservative stop, zero misclassifications, under 30 s.
void criterion_5() {
  auto t0 = Clock::now();
  capcheck::ArchitectureModel model = fixture_model();
  const capcheck::ScenarioProfile* demo = model.find_scenario("crosswalk_demo");
  bool ok = demo != nullptr;

  if (ok) {
    double flat_from = std::min(demo->d_detect(), capcheck::emergence_cap(*demo));
    double flat_value = capcheck::boundary_speed(*demo, flat_from);
    double prev = -1.0;
    for (int i = 0; i <= 300 && ok; ++i) {
      double d = 0.1 * i;
      double v = capcheck::boundary_speed(*demo, d);
      if (v < prev) ok = false;
      if (d == 0.0 && v != 0.0) ok = false;
      if (d >= flat_from && v != flat_value) ok = false;
      prev = v;
    }
  }

  int misclassified = 0;
  if (ok) {
    for (int i = 0; i < 100; ++i) {
      double d = 0.3 + (29.4 * i) / 99.0;
      for (int j = 0; j < 100; ++j) {
        double v = 0.1 + (16.4 * j) / 99.0;
        bool predicted_safe = v <= capcheck::boundary_speed(*demo, d);
        capcheck::ScenarioProfile cell = *demo;
        cell.v_init_v = v;
        cell.d_crossing_v = d;
        capcheck::BehaviorTrace trace =
            capcheck::simulate(cell, capcheck::Policy::kConservativeStop);
        bool simulated_safe = trace.samples.back().v == 0.0;
        if (predicted_safe != simulated_safe) ++misclassified;
      }
    }
    ok = misclassified == 0;
  }
  double dt = seconds_since(t0);
  ok = ok && dt < 30.0;
  report(5, "boundary shape and 100x100 soundness grid with zero misclassifications",
         ok, dt);
}

// 6: the conservative policy stops the demo scenario short of the line, and
// the constant-speed trace is flagged for H2 and H3.
void criterion_6() {
  auto t0 = Clock::now();
  capcheck::ArchitectureModel model = fixture_model();
  const capcheck::ScenarioProfile* demo = model.find_scenario("crosswalk_demo");
  bool ok = demo != nullptr;

  if (ok) {
    capcheck::BehaviorTrace trace =
        capcheck::simulate(*demo, capcheck::Policy::kConservativeStop);
    const capcheck::TraceSample& last = trace.samples.back();
    double margin = demo->d_crossing() - last.x;
    ok = last.v == 0.0 && margin >= 0.0;
  }
  if (ok) {
    capcheck::BehaviorTrace constant = capcheck::read_trace_csv(
        support::slurp(support::fixture_path("trace_constant.csv")),
        "trace_constant.csv");
    auto findings = capcheck::check_hazards(constant, *demo);
    std::vector<std::string> ids;
    for (const auto& f : findings) ids.push_back(f.id);
    ok = ids == std::vector<std::string>{"H1", "H2", "H3"};
  }
  report(6, "conservative stop keeps a margin; constant trace raises H2 and H3",
         ok, seconds_since(t0));
}

// 7: replay of the demo stream through the C API. The camera heartbeat
// ceases at t = 2 with timeout 0.5 and step 0.5; the first RMS decision must
// land at t = 3.0 and the exported log must match the fixture byte for byte.
void criterion_7() {
  auto t0 = Clock::now();
  bool ok = false;
  capcheck_model_t* model = nullptr;
  std::string adl = support::slurp(support::fixture_path("crosswalk.adl"));
  if (capcheck_model_parse(adl.c_str(), "crosswalk.adl", &model) == CAPCHECK_OK) {
    std::string metrics = support::slurp(support::fixture_path("metrics_demo.csv"));
    capcheck_decisions_t* decisions = nullptr;
    if (capcheck_replay(model, "ApproachCrosswalk", metrics.c_str(),
                        "metrics_demo.csv", 0.5, -1.0, &decisions) == CAPCHECK_OK) {
      double first_rms = -1.0;
      for (size_t i = 0; i < capcheck_decisions_count(decisions); ++i) {
        if (std::string(capcheck_decision_state(decisions, i)) == "RMS") {
          first_rms = capcheck_decision_timestamp(decisions, i);
          break;
        }
      }
      char* csv = nullptr;
      if (capcheck_decisions_csv(decisions, &csv) == CAPCHECK_OK) {
        ok = first_rms == 3.0 &&
             std::string(csv) ==
                 support::slurp(support::fixture_path("golden/decisions_demo.csv"));
        capcheck_string_free(csv);
      }
      capcheck_decisions_free(decisions);
    }
    capcheck_model_free(model);
  }
  report(7, "lost heartbeat replays to a first RMS decision at t=3.0, log byte-exact",
         ok, seconds_since(t0));
}

// 8: impact closure equals a naive fixpoint oracle on 200 random models.
void criterion_8() {
  auto t0 = Clock::now();
  using Key = std::pair<std::string, std::string>;

  auto closure_oracle = [](const capcheck::ArchitectureModel& m,
                           const capcheck::ElementRef& origin) {
    std::set<Key> seen{{origin.viewpoint, origin.element}};
    bool grew = true;
    while (grew) {
      grew = false;
      auto grow = [&](const Key& k) {
        if (seen.insert(k).second) grew = true;
      };
      for (const auto& c : m.correspondences) {
        for (const auto& p : c.pairs) {
          if (seen.count({c.from_viewpoint, p.from})) grow({c.to_viewpoint, p.to});
          if (seen.count({c.to_viewpoint, p.to})) grow({c.from_viewpoint, p.from});
        }
      }
      for (const auto& v : m.viewpoints) {
        for (const auto& s : v.skills) {
          for (const auto& r : s.requires_ids) {
            if (seen.count({v.id, r})) grow({v.id, s.id});
          }
        }
      }
    }
    return seen;
  };

  std::mt19937 rng(808);
  bool ok = true;
  int done = 0;
  while (done < 200 && ok) {
    capcheck::ArchitectureModel m = support::rand_model(rng);
    size_t elements = 0;
    for (const auto& v : m.viewpoints) elements += v.element_ids().size();
    if (elements == 0 || elements > 20) continue;
    for (const auto& v : m.viewpoints) {
      for (const auto& el : v.element_ids()) {
        auto set = capcheck::impact(m, {v.id, el});
        std::set<Key> got;
        for (const auto& ref : set.affected) got.insert({ref.viewpoint, ref.element});
        if (got != closure_oracle(m, {v.id, el})) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    ++done;
  }
  report(8, "impact closure equals the naive fixpoint oracle on 200 models", ok,
         seconds_since(t0));
}

// 9: the CLI reproduces the golden outputs and exercises every exit code.
void criterion_9() {
  auto t0 = Clock::now();
  std::string model = support::fixture_path("crosswalk.adl");
  auto golden = [](const std::string& name) {
    return support::slurp(support::fixture_path("golden/" + name));
  };
  auto run = [](std::vector<std::string> args) {
    return support::run_process(CLI_PATH, args);
  };

  bool ok = true;
  std::set<int> codes;
  auto expect = [&](const support::RunResult& r, int code, const std::string& out) {
    codes.insert(r.exit_code);
    if (r.exit_code != code || (!out.empty() && r.out != out)) ok = false;
  };

  expect(run({"validate", model}), 0, golden("validate_crosswalk.txt"));
  expect(run({"validate", support::fixture_path("bad_cycle.adl")}), 1,
         golden("validate_bad_cycle.txt"));
  expect(run({"validate", support::fixture_path("bad_syntax.adl")}), 2, "");
  expect(run({"validate", "/nonexistent/model.adl"}), 3, "");
  expect(run({"coverage", model}), 1, golden("coverage_crosswalk.txt"));
  expect(run({"trace", model, "--from", "capability:PerceivePedestrians"}), 0,
         golden("trace_impact.txt"));
  expect(run({"trace", model, "--from", "capability:PerceivePedestrians", "--csv"}),
         0, golden("trace_impact.csv"));
  expect(run({"requirement", model, "--id", "SG1"}), 0,
         golden("requirement_sg1.txt"));
  expect(run({"monitor", model, "--root", "ApproachCrosswalk", "--metrics",
              support::fixture_path("metrics_demo.csv"), "--step", "0.5"}),
         1, golden("monitor_demo.txt"));
  expect(run({"boundary", model, "--scenario", "crosswalk_demo", "--grid", "5"}),
         0, golden("boundary_demo.txt"));
  expect(run({"boundary", model, "--scenario", "crosswalk_demo", "--grid", "1"}),
         4, "");
  expect(run({"simulate", model, "--scenario", "crosswalk_demo", "--policy",
              "conservative_stop"}),
         0, golden("simulate_demo.txt"));
  expect(run({"hazards", model, "--scenario", "crosswalk_demo", "--trace",
              support::fixture_path("trace_constant.csv")}),
         1, golden("hazards_constant.txt"));

  ok = ok && codes == std::set<int>{0, 1, 2, 3, 4};
  report(9, "CLI golden outputs with exit codes 0 through 4 exercised", ok,
         seconds_since(t0));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures != 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
