#pragma once

// Shared helpers for the test binaries: fixture paths, process spawning,
// and the random generators + brute-force oracles the property tests use.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace support {

inline std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

// Runs an executable with args, capturing stdout/stderr separately.
inline RunResult run_process(const std::string& exe,
                             const std::vector<std::string>& args) {
  static int counter = 0;
  std::string errfile = "/tmp/capcheck_test_stderr_" + std::to_string(getpid()) +
                        "_" + std::to_string(counter++);
  std::string cmd = shell_quote(exe);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>" + shell_quote(errfile);

  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed: " + cmd);
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), n);
  }
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(errfile);
  std::remove(errfile.c_str());
  return r;
}

// ---- random model generation (for parser round-trips) ----

inline std::string rand_ident(std::mt19937& rng, const std::string& prefix,
                              bool allow_dots = false) {
  static const char body[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<int> pick(0, sizeof(body) - 2);
  std::string s = prefix;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    if (allow_dots && i > 0 && i + 1 < n && std::uniform_int_distribution<int>(0, 9)(rng) == 0) {
      s += (std::uniform_int_distribution<int>(0, 1)(rng) == 0) ? '.' : '-';
    } else {
      s += body[pick(rng)];
    }
  }
  return s;
}

inline double rand_real(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::string rand_text(std::mt19937& rng) {
  static const char body[] =
      "abcdefghijklmnopqrstuvwxyz ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .,;:!?()\"\\";
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> pick(0, sizeof(body) - 2);
  std::string s;
  int n = len(rng);
  for (int i = 0; i < n; ++i) s += body[pick(rng)];
  return s;
}

// Builds a random model already in canonical form. Bounded by ~50 elements.
inline capcheck::ArchitectureModel rand_model(std::mt19937& rng) {
  using namespace capcheck;
  ArchitectureModel m;

  std::uniform_int_distribution<int> vp_count(1, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  static const ViewpointKind kinds[] = {
      ViewpointKind::kFunctional, ViewpointKind::kCapability,
      ViewpointKind::kSoftware, ViewpointKind::kHardware};

  int nvp = vp_count(rng);
  std::set<std::string> used_ids;
  for (int i = 0; i < nvp; ++i) {
    Viewpoint vp;
    vp.kind = kinds[std::uniform_int_distribution<int>(0, 3)(rng)];
    // occasionally use the kind name itself as the id (the serializer then
    // omits it)
    if (coin(rng) == 0 && !used_ids.count(to_string(vp.kind))) {
      vp.id = to_string(vp.kind);
    } else {
      do {
        vp.id = rand_ident(rng, "v");
      } while (used_ids.count(vp.id));
    }
    used_ids.insert(vp.id);

    int nnodes = std::uniform_int_distribution<int>(0, 5)(rng);
    std::set<std::string> nodes;
    for (int k = 0; k < nnodes; ++k) nodes.insert(rand_ident(rng, "n", true));
    vp.nodes.assign(nodes.begin(), nodes.end());

    if (!vp.nodes.empty()) {
      int nedges = std::uniform_int_distribution<int>(0, 4)(rng);
      std::uniform_int_distribution<size_t> pick_node(0, vp.nodes.size() - 1);
      for (int k = 0; k < nedges; ++k) {
        Edge e;
        e.source = vp.nodes[pick_node(rng)];
        e.target = vp.nodes[pick_node(rng)];
        if (coin(rng) == 0) e.label = rand_ident(rng, "lbl");
        vp.edges.push_back(e);
      }
    }

    bool with_skills = vp.kind == ViewpointKind::kCapability || coin(rng) == 0;
    if (with_skills) {
      int nskills = std::uniform_int_distribution<int>(0, 5)(rng);
      std::set<std::string> skill_ids;
      std::vector<std::string> ordered;
      for (int k = 0; k < nskills; ++k) {
        std::string id;
        do {
          id = rand_ident(rng, "sk");
        } while (skill_ids.count(id));
        skill_ids.insert(id);

        Skill s;
        s.id = id;
        // requires only previously created skills: acyclic by construction
        for (const auto& prev : ordered) {
          if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
            s.requires_ids.push_back(prev);
          }
        }
        double theta_u = rand_real(rng, 0.0, 0.8);
        s.thresholds = {rand_real(rng, theta_u + 0.01, 1.0), theta_u};
        int nbind = std::uniform_int_distribution<int>(0, 2)(rng);
        for (int b = 0; b < nbind; ++b) {
          MetricBinding mb;
          mb.source = rand_ident(rng, "src");
          mb.metric = rand_ident(rng, "m", true);
          mb.kind = static_cast<MetricKind>(
              std::uniform_int_distribution<int>(0, 2)(rng));
          double a = rand_real(rng, 0.0, 1.0), b2 = rand_real(rng, 0.0, 1.0);
          mb.nominal = {std::min(a, b2), std::max(a, b2)};
          double c = rand_real(rng, 2.0, 4.0);
          mb.unavailable = {c, coin(rng) == 0
                                   ? c + rand_real(rng, 0.0, 2.0)
                                   : std::numeric_limits<double>::infinity()};
          if (mb.kind != MetricKind::kScalar && coin(rng) == 0) {
            mb.timeout = rand_real(rng, 0.05, 2.0);
          }
          s.bindings.push_back(mb);
        }
        ordered.push_back(id);
        vp.skills.push_back(std::move(s));
      }
    }
    m.viewpoints.push_back(std::move(vp));
  }

  int ncorr = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < ncorr; ++i) {
    Correspondence c;
    c.id = rand_ident(rng, "map") + std::to_string(i);
    const auto& from = m.viewpoints[std::uniform_int_distribution<size_t>(
        0, m.viewpoints.size() - 1)(rng)];
    const auto& to = m.viewpoints[std::uniform_int_distribution<size_t>(
        0, m.viewpoints.size() - 1)(rng)];
    c.from_viewpoint = from.id;
    c.to_viewpoint = to.id;
    auto from_els = from.element_ids();
    auto to_els = to.element_ids();
    if (!from_els.empty() && !to_els.empty()) {
      int npairs = std::uniform_int_distribution<int>(0, 4)(rng);
      std::set<std::pair<std::string, std::string>> seen;
      for (int k = 0; k < npairs; ++k) {
        CorrespondencePair p;
        p.from = from_els[std::uniform_int_distribution<size_t>(
            0, from_els.size() - 1)(rng)];
        p.to = to_els[std::uniform_int_distribution<size_t>(
            0, to_els.size() - 1)(rng)];
        if (seen.insert({p.from, p.to}).second) c.pairs.push_back(p);
      }
    }
    m.correspondences.push_back(std::move(c));
  }

  int nreq = std::uniform_int_distribution<int>(0, 3)(rng);
  for (int i = 0; i < nreq; ++i) {
    Requirement r;
    r.id = rand_ident(rng, "req") + std::to_string(i);
    r.kind = static_cast<RequirementKind>(
        std::uniform_int_distribution<int>(0, 3)(rng));
    r.text = rand_text(rng);
    const auto& vp = m.viewpoints[std::uniform_int_distribution<size_t>(
        0, m.viewpoints.size() - 1)(rng)];
    auto els = vp.element_ids();
    Anchor a;
    a.viewpoint = vp.id;
    a.element = els.empty() ? rand_ident(rng, "el") : els[0];
    r.anchors.push_back(a);
    m.requirements.push_back(std::move(r));
  }

  int nsc = std::uniform_int_distribution<int>(0, 2)(rng);
  for (int i = 0; i < nsc; ++i) {
    ScenarioProfile s;
    s.id = rand_ident(rng, "sc") + std::to_string(i);
    auto maybe = [&](std::optional<double>& field, double lo, double hi) {
      if (coin(rng) == 0) field = rand_real(rng, lo, hi);
    };
    maybe(s.v_init_v, 0.0, 40.0);
    maybe(s.d_crossing_v, 1.0, 200.0);
    maybe(s.a_max_v, 0.5, 10.0);
    maybe(s.mu_v, 0.1, 1.0);
    maybe(s.t_react_v, 0.0, 3.0);
    if (coin(rng) == 0) {
      s.d_detect_v = coin(rng) == 0
                         ? std::numeric_limits<double>::infinity()
                         : rand_real(rng, 5.0, 100.0);
    }
    maybe(s.van_offset_lat_v, 0.0, 5.0);
    maybe(s.van_length_v, 0.0, 12.0);
    maybe(s.ped_lat_v, 0.0, 8.0);
    maybe(s.g_v, 9.0, 10.0);
    m.scenarios.push_back(std::move(s));
  }

  m.canonicalize();
  return m;
}

// ---- random skill DAGs + brute-force propagation oracle ----

struct RandomDag {
  capcheck::SkillGraph graph;
  std::map<std::string, double> own;
};

inline RandomDag rand_dag(std::mt19937& rng, int max_nodes = 8) {
  using namespace capcheck;
  RandomDag d;
  int n = std::uniform_int_distribution<int>(1, max_nodes)(rng);

  // random ids, then edges only from later to earlier in creation order so
  // the graph stays acyclic while ids carry no ordering hint
  std::set<std::string> ids;
  std::vector<std::string> ordered;
  while (static_cast<int>(ordered.size()) < n) {
    std::string id = rand_ident(rng, "s");
    if (ids.insert(id).second) ordered.push_back(id);
  }
  for (int i = 0; i < n; ++i) {
    Skill s;
    s.id = ordered[i];
    for (int j = 0; j < i; ++j) {
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        s.requires_ids.push_back(ordered[j]);
      }
    }
    d.graph.skills.push_back(std::move(s));
    if (std::uniform_int_distribution<int>(0, 5)(rng) != 0) {
      d.own[ordered[i]] = rand_real(rng, 0.0, 1.0);  // absent -> treated as 1
    }
  }
  std::sort(d.graph.skills.begin(), d.graph.skills.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return d;
}

// reachability closure over requires edges, origin included
inline std::set<std::string> reachable(const capcheck::SkillGraph& g,
                                       const std::string& root) {
  std::set<std::string> seen;
  std::vector<std::string> stack{root};
  while (!stack.empty()) {
    std::string cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    const capcheck::Skill* s = g.find(cur);
    if (!s) continue;
    for (const auto& r : s->requires_ids) {
      if (g.has(r)) stack.push_back(r);
    }
  }
  return seen;
}

inline double brute_force_aggregated(const capcheck::SkillGraph& g,
                                     const std::map<std::string, double>& own,
                                     const std::string& root) {
  double acc = 1.0;
  for (const auto& id : reachable(g, root)) {
    auto it = own.find(id);
    acc = std::min(acc, it == own.end() ? 1.0 : it->second);
  }
  return acc;
}

// ---- numeric oracles ----

// Forward-Euler integration of the same motion the closed form describes.
// t_react should be a multiple of dt so the reaction phase carries no
// rounding debt.
inline double euler_stopping_distance(double v, double a_eff, double t_react,
                                      double dt = 1e-4) {
  double x = 0.0;
  long long react_steps = llround(t_react / dt);
  for (long long i = 0; i < react_steps; ++i) x += v * dt;
  double vv = v;
  while (vv > 0.0) {
    x += vv * dt;
    vv -= a_eff * dt;
  }
  return x;
}

// Sight geometry done the long way: parametrize the ray from the ego origin
// through the van corner and intersect it with the pedestrian's lateral line.
inline double ray_occlusion_oracle(double x_ego, double van_length,
                                   double offset, double ped_lat) {
  double corner_x = x_ego - van_length;
  double corner_y = offset;
  double t = ped_lat / corner_y;  // ray parameter where y reaches ped_lat
  return t * corner_x;
}

}  // namespace support
