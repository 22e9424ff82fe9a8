#include "core/model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace capcheck {

const char* to_string(ViewpointKind kind) {
  switch (kind) {
    case ViewpointKind::kFunctional: return "functional";
    case ViewpointKind::kCapability: return "capability";
    case ViewpointKind::kSoftware: return "software";
    case ViewpointKind::kHardware: return "hardware";
  }
  return "?";
}

const char* to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kHeartbeat: return "heartbeat";
    case MetricKind::kCounter: return "counter";
    case MetricKind::kScalar: return "scalar";
  }
  return "?";
}

const char* to_string(RequirementKind kind) {
  switch (kind) {
    case RequirementKind::kSafetyGoal: return "safety_goal";
    case RequirementKind::kHazard: return "hazard";
    case RequirementKind::kRiskMinimalState: return "rms";
    case RequirementKind::kFunctional: return "functional";
  }
  return "?";
}

const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kCycle: return "E_CYCLE";
    case ViolationCode::kDanglingEdge: return "E_DANGLING_EDGE";
    case ViolationCode::kDanglingPair: return "E_DANGLING_PAIR";
    case ViolationCode::kDupId: return "E_DUP_ID";
    case ViolationCode::kBadThresholds: return "E_BAD_THRESHOLDS";
    case ViolationCode::kBadIntervals: return "E_BAD_INTERVALS";
    case ViolationCode::kBadTimeout: return "E_BAD_TIMEOUT";
    case ViolationCode::kLeafNoMetric: return "E_LEAF_NO_METRIC";
    case ViolationCode::kUnanchoredReq: return "E_UNANCHORED_REQ";
  }
  return "?";
}

double Interval::distance_to(double v) const {
  if (v < lo) return lo - v;
  if (v > hi) return v - hi;
  return 0.0;
}

bool Viewpoint::has_element(const std::string& element_id) const {
  for (const auto& n : nodes)
    if (n == element_id) return true;
  for (const auto& s : skills)
    if (s.id == element_id) return true;
  return false;
}

std::vector<std::string> Viewpoint::element_ids() const {
  std::vector<std::string> ids = nodes;
  for (const auto& s : skills) ids.push_back(s.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

const Skill* SkillGraph::find(const std::string& id) const {
  for (const auto& s : skills)
    if (s.id == id) return &s;
  return nullptr;
}

std::vector<std::string> SkillGraph::skill_ids() const {
  std::vector<std::string> ids;
  ids.reserve(skills.size());
  for (const auto& s : skills) ids.push_back(s.id);
  return ids;
}

std::vector<std::string> SkillGraph::children(const std::string& id) const {
  const Skill* s = find(id);
  if (!s) return {};
  std::vector<std::string> out;
  for (const auto& c : s->requires_ids)
    if (has(c)) out.push_back(c);
  return out;
}

std::vector<std::string> SkillGraph::parents(const std::string& id) const {
  std::vector<std::string> out;
  for (const auto& s : skills)
    for (const auto& c : s.requires_ids)
      if (c == id) {
        out.push_back(s.id);
        break;
      }
  return out;
}

bool SkillGraph::is_leaf(const std::string& id) const {
  const Skill* s = find(id);
  return s != nullptr && s->requires_ids.empty();
}

const Viewpoint* ArchitectureModel::find_viewpoint(const std::string& id) const {
  for (const auto& v : viewpoints)
    if (v.id == id) return &v;
  return nullptr;
}

const Requirement* ArchitectureModel::find_requirement(const std::string& id) const {
  for (const auto& r : requirements)
    if (r.id == id) return &r;
  return nullptr;
}

const ScenarioProfile* ArchitectureModel::find_scenario(const std::string& id) const {
  for (const auto& s : scenarios)
    if (s.id == id) return &s;
  return nullptr;
}

SkillGraph ArchitectureModel::skill_graph() const {
  SkillGraph graph;
  for (const auto& v : viewpoints)
    if (v.kind == ViewpointKind::kCapability)
      graph.skills.insert(graph.skills.end(), v.skills.begin(), v.skills.end());
  std::stable_sort(graph.skills.begin(), graph.skills.end(),
                   [](const Skill& a, const Skill& b) { return a.id < b.id; });
  return graph;
}

void ArchitectureModel::canonicalize() {
  for (auto& v : viewpoints) {
    std::stable_sort(v.nodes.begin(), v.nodes.end());
    std::stable_sort(v.edges.begin(), v.edges.end(),
                     [](const Edge& a, const Edge& b) { return a.key() < b.key(); });
    for (auto& s : v.skills) {
      std::stable_sort(s.requires_ids.begin(), s.requires_ids.end());
      std::stable_sort(s.bindings.begin(), s.bindings.end(),
                       [](const MetricBinding& a, const MetricBinding& b) {
                         return std::tie(a.source, a.metric) < std::tie(b.source, b.metric);
                       });
    }
    std::stable_sort(v.skills.begin(), v.skills.end(),
                     [](const Skill& a, const Skill& b) { return a.id < b.id; });
  }
  std::stable_sort(viewpoints.begin(), viewpoints.end(),
                   [](const Viewpoint& a, const Viewpoint& b) { return a.id < b.id; });
  for (auto& c : correspondences)
    std::stable_sort(c.pairs.begin(), c.pairs.end(),
                     [](const CorrespondencePair& a, const CorrespondencePair& b) {
                       return a.key() < b.key();
                     });
  std::stable_sort(correspondences.begin(), correspondences.end(),
                   [](const Correspondence& a, const Correspondence& b) { return a.id < b.id; });
  for (auto& r : requirements)
    std::stable_sort(r.anchors.begin(), r.anchors.end(),
                     [](const Anchor& a, const Anchor& b) { return a.key() < b.key(); });
  std::stable_sort(requirements.begin(), requirements.end(),
                   [](const Requirement& a, const Requirement& b) { return a.id < b.id; });
  std::stable_sort(scenarios.begin(), scenarios.end(),
                   [](const ScenarioProfile& a, const ScenarioProfile& b) { return a.id < b.id; });
}

std::string ValidationReport::to_text() const {
  std::string out;
  for (const auto& v : violations) {
    out += to_string(v.code);
    out += " ";
    out += v.location;
    if (!v.detail.empty()) {
      out += ": ";
      out += v.detail;
    }
    out += "\n";
  }
  return out;
}

namespace {

void report_duplicates(const std::vector<std::string>& sorted_ids,
                       const std::string& location_prefix,
                       std::vector<Violation>* out) {
  for (size_t i = 1; i < sorted_ids.size(); ++i) {
    if (sorted_ids[i] == sorted_ids[i - 1]) {
      if (i + 1 < sorted_ids.size() && sorted_ids[i + 1] == sorted_ids[i]) continue;
      out->push_back({ViolationCode::kDupId, location_prefix,
                      "duplicate id: " + sorted_ids[i]});
    }
  }
}

// Strongly connected components over the requires edges, Tarjan with
// sorted adjacency so the report order is stable.
struct SccFinder {
  explicit SccFinder(const std::map<std::string, std::vector<std::string>>& a) : adj(a) {}

  const std::map<std::string, std::vector<std::string>>& adj;
  std::map<std::string, int> index, low;
  std::map<std::string, bool> on_stack;
  std::vector<std::string> stack;
  int next_index = 0;
  std::vector<std::vector<std::string>> sccs;

  void run() {
    for (const auto& [id, _] : adj)
      if (!index.count(id)) strongconnect(id);
  }

  void strongconnect(const std::string& v) {
    index[v] = low[v] = next_index++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& w : adj.at(v)) {
      if (!adj.count(w)) continue;
      if (!index.count(w)) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> scc;
      while (true) {
        std::string w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        scc.push_back(w);
        if (w == v) break;
      }
      std::sort(scc.begin(), scc.end());
      sccs.push_back(std::move(scc));
    }
  }
};

void check_skill_cycles(const SkillGraph& graph, std::vector<Violation>* out) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& s : graph.skills) {
    auto& edges = adj[s.id];
    for (const auto& c : s.requires_ids) edges.push_back(c);
    std::sort(edges.begin(), edges.end());
  }
  SccFinder finder{adj};
  finder.run();
  std::sort(finder.sccs.begin(), finder.sccs.end());
  for (const auto& scc : finder.sccs) {
    bool self_loop = scc.size() == 1 &&
                     std::count(adj[scc[0]].begin(), adj[scc[0]].end(), scc[0]) > 0;
    if (scc.size() > 1 || self_loop) {
      out->push_back({ViolationCode::kCycle, "skill " + scc.front(),
                      "requires cycle through: " + join(scc, ", ")});
    }
  }
}

void check_skill_data(const Viewpoint& vp, const Skill& s,
                      std::vector<Violation>* out) {
  const std::string loc = "viewpoint " + vp.id + " skill " + s.id;
  const Thresholds& t = s.thresholds;
  if (!(t.degraded > 0.0 && t.degraded <= 1.0 && t.unavailable >= 0.0 &&
        t.unavailable < 1.0 && t.unavailable < t.degraded)) {
    out->push_back({ViolationCode::kBadThresholds, loc,
                    "require 0 <= theta_unavailable < theta_degraded <= 1, got (" +
                        format_number(t.degraded) + ", " +
                        format_number(t.unavailable) + ")"});
  }
  for (const auto& b : s.bindings) {
    const std::string bloc = loc + " metric " + b.source + "." + b.metric;
    if (b.nominal.lo > b.nominal.hi || b.unavailable.lo > b.unavailable.hi) {
      out->push_back({ViolationCode::kBadIntervals, bloc, "interval bounds reversed"});
    } else if (b.nominal.overlaps(b.unavailable)) {
      out->push_back({ViolationCode::kBadIntervals, bloc,
                      "nominal and unavailable intervals overlap"});
    }
    if (b.timeout && *b.timeout <= 0.0) {
      out->push_back({ViolationCode::kBadTimeout, bloc, "timeout must be positive"});
    } else if (b.timeout && b.kind == MetricKind::kScalar) {
      out->push_back({ViolationCode::kBadTimeout, bloc,
                      "timeout applies to heartbeat and counter metrics only"});
    }
  }
}

}  // namespace

ValidationReport validate(const ArchitectureModel& model) {
  ValidationReport report;
  auto* out = &report.violations;

  {
    std::vector<std::string> ids;
    for (const auto& v : model.viewpoints) ids.push_back(v.id);
    std::sort(ids.begin(), ids.end());
    report_duplicates(ids, "model viewpoints", out);
  }

  for (const auto& vp : model.viewpoints) {
    std::vector<std::string> ids = vp.element_ids();
    report_duplicates(ids, "viewpoint " + vp.id, out);

    for (const auto& e : vp.edges) {
      if (!vp.has_element(e.source) || !vp.has_element(e.target)) {
        out->push_back({ViolationCode::kDanglingEdge,
                        "viewpoint " + vp.id + " edge " + e.source + " -> " + e.target,
                        "endpoint not declared in this viewpoint"});
      }
    }
    for (const auto& s : vp.skills) {
      for (const auto& r : s.requires_ids) {
        bool is_skill = false;
        for (const auto& other : vp.skills)
          if (other.id == r) is_skill = true;
        if (!is_skill) {
          out->push_back({ViolationCode::kDanglingEdge,
                          "viewpoint " + vp.id + " skill " + s.id,
                          "requires undeclared skill: " + r});
        }
      }
      check_skill_data(vp, s, out);
    }
  }

  SkillGraph graph = model.skill_graph();
  check_skill_cycles(graph, out);
  for (const auto& s : graph.skills) {
    if (s.requires_ids.empty() && s.bindings.empty()) {
      out->push_back({ViolationCode::kLeafNoMetric, "skill " + s.id,
                      "leaf skill declares no metric binding"});
    }
  }

  {
    std::vector<std::string> ids;
    for (const auto& c : model.correspondences) ids.push_back(c.id);
    std::sort(ids.begin(), ids.end());
    report_duplicates(ids, "model correspondences", out);
  }
  for (const auto& c : model.correspondences) {
    const Viewpoint* from = model.find_viewpoint(c.from_viewpoint);
    const Viewpoint* to = model.find_viewpoint(c.to_viewpoint);
    if (!from || !to) {
      out->push_back({ViolationCode::kDanglingPair, "correspondence " + c.id,
                      "unknown viewpoint: " + (from ? c.to_viewpoint : c.from_viewpoint)});
      continue;
    }
    for (const auto& p : c.pairs) {
      if (!from->has_element(p.from) || !to->has_element(p.to)) {
        out->push_back({ViolationCode::kDanglingPair,
                        "correspondence " + c.id + " pair " + p.from + " => " + p.to,
                        "endpoint does not resolve"});
      }
    }
  }

  {
    std::vector<std::string> ids;
    for (const auto& r : model.requirements) ids.push_back(r.id);
    std::sort(ids.begin(), ids.end());
    report_duplicates(ids, "model requirements", out);
  }
  for (const auto& r : model.requirements) {
    for (const auto& a : r.anchors) {
      const Viewpoint* vp = a.viewpoint.empty() ? nullptr : model.find_viewpoint(a.viewpoint);
      if (!vp || !vp->has_element(a.element)) {
        out->push_back({ViolationCode::kUnanchoredReq, "requirement " + r.id,
                        "anchor does not resolve: " +
                            (a.viewpoint.empty() ? a.element
                                                 : a.viewpoint + "." + a.element)});
      }
    }
  }

  {
    std::vector<std::string> ids;
    for (const auto& s : model.scenarios) ids.push_back(s.id);
    std::sort(ids.begin(), ids.end());
    report_duplicates(ids, "model scenarios", out);
  }

  return report;
}

std::vector<std::string> topological_order(const SkillGraph& graph) {
  // Children-first Kahn; the ready set is ordered so ties resolve to the
  // lexicographically smallest id.
  std::map<std::string, int> pending;  // children not yet emitted
  std::map<std::string, std::vector<std::string>> rev;  // child -> parents
  for (const auto& s : graph.skills) {
    int count = 0;
    for (const auto& c : s.requires_ids) {
      if (!graph.has(c)) continue;  // dangling: ignored here, validate reports it
      ++count;
      rev[c].push_back(s.id);
    }
    pending[s.id] = count;
  }

  std::set<std::string> ready;
  for (const auto& [id, count] : pending)
    if (count == 0) ready.insert(id);

  std::vector<std::string> order;
  while (!ready.empty()) {
    std::string id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(id);
    auto it = rev.find(id);
    if (it == rev.end()) continue;
    for (const auto& parent : it->second) {
      if (--pending[parent] == 0) ready.insert(parent);
    }
  }

  if (order.size() != pending.size()) {
    std::vector<std::string> stuck;
    for (const auto& [id, count] : pending)
      if (count > 0) stuck.push_back(id);
    throw CycleError("skill graph is cyclic; unresolved: " + join(stuck, ", "));
  }
  return order;
}

}  // namespace capcheck
