#include "core/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace capcheck {

const char* to_string(SkillStatus status) {
  switch (status) {
    case SkillStatus::kNominal: return "NOMINAL";
    case SkillStatus::kDegraded: return "DEGRADED";
    case SkillStatus::kUnavailable: return "UNAVAILABLE";
  }
  return "?";
}

const char* to_string(DecisionState state) {
  switch (state) {
    case DecisionState::kNominal: return "NOMINAL";
    case DecisionState::kDegraded: return "DEGRADED";
    case DecisionState::kRms: return "RMS";
  }
  return "?";
}

void MetricTable::ingest(const MetricRecord& record) {
  auto [it, inserted] = cells_.try_emplace({record.source, record.metric});
  Cell& cell = it->second;
  if (inserted || record.value > cell.value) {
    // first sighting counts as activity; afterwards only strict increases
    // relative to the last seen value do (a reset followed by progress is
    // alive, a frozen counter is not)
    cell.changed = record.timestamp;
  }
  cell.value = record.value;
  cell.updated = record.timestamp;
}

const MetricTable::Cell* MetricTable::find(const std::string& source,
                                           const std::string& metric) const {
  auto it = cells_.find({source, metric});
  return it == cells_.end() ? nullptr : &it->second;
}

double normalize(const MetricBinding& binding, double value, double age) {
  if (binding.kind != MetricKind::kScalar && binding.timeout &&
      age > *binding.timeout) {
    return 0.0;
  }
  if (binding.nominal.contains(value)) return 1.0;
  if (binding.unavailable.contains(value)) return 0.0;
  double dn = binding.nominal.distance_to(value);
  double du = binding.unavailable.distance_to(value);
  if (std::isinf(dn)) return 0.0;  // nominal unreachable
  if (std::isinf(du)) return 1.0;
  return du / (dn + du);
}

double evaluate_own(const Skill& skill, const MetricTable& table, double now) {
  if (skill.bindings.empty()) return 1.0;
  double own = 1.0;
  for (const auto& b : skill.bindings) {
    const MetricTable::Cell* cell = table.find(b.source, b.metric);
    if (!cell) {
      own = 0.0;  // no evidence means unavailable
      continue;
    }
    double age = b.kind == MetricKind::kCounter ? now - cell->changed
                                                : now - cell->updated;
    own = std::min(own, normalize(b, cell->value, age));
  }
  return own;
}

std::map<std::string, double> evaluate_all(const SkillGraph& graph,
                                           const MetricTable& table,
                                           double now) {
  std::map<std::string, double> own;
  for (const auto& s : graph.skills) own[s.id] = evaluate_own(s, table, now);
  return own;
}

std::map<std::string, double> propagate(const SkillGraph& graph,
                                        const std::map<std::string, double>& own) {
  std::map<std::string, double> agg;
  for (const auto& id : topological_order(graph)) {
    auto it = own.find(id);
    double value = it != own.end() ? it->second : 1.0;
    for (const auto& child : graph.children(id)) {
      value = std::min(value, agg.at(child));
    }
    agg[id] = value;
  }
  return agg;
}

SkillStatus status_of(const Thresholds& thresholds, double aggregated) {
  if (aggregated >= thresholds.degraded) return SkillStatus::kNominal;
  if (aggregated >= thresholds.unavailable) return SkillStatus::kDegraded;
  return SkillStatus::kUnavailable;
}

namespace {

void collect_reachable(const SkillGraph& graph, const std::string& from,
                       std::set<std::string>* out) {
  if (!out->insert(from).second) return;
  for (const auto& c : graph.children(from)) collect_reachable(graph, c, out);
}

}  // namespace

Decision decide(const SkillGraph& graph, const std::string& root,
                const std::map<std::string, double>& aggregated,
                double timestamp) {
  const Skill* root_skill = graph.find(root);
  if (!root_skill) throw UnknownIdError("unknown skill: " + root);

  Decision d;
  d.timestamp = timestamp;
  d.root = root;
  auto it = aggregated.find(root);
  d.aggregated = it != aggregated.end() ? it->second : 0.0;

  const Thresholds& t = root_skill->thresholds;
  if (d.aggregated >= t.degraded) {
    d.state = DecisionState::kNominal;
    return d;
  }
  d.state = d.aggregated >= t.unavailable ? DecisionState::kDegraded
                                          : DecisionState::kRms;
  double violated = d.state == DecisionState::kDegraded ? t.degraded : t.unavailable;

  std::set<std::string> reachable;
  collect_reachable(graph, root, &reachable);
  for (const auto& id : reachable) {  // std::set iterates sorted by id
    auto ait = aggregated.find(id);
    double value = ait != aggregated.end() ? ait->second : 0.0;
    if (value > violated) continue;
    // minimal offender: nothing deeper explains this value
    std::set<std::string> below;
    collect_reachable(graph, id, &below);
    below.erase(id);
    bool minimal = true;
    for (const auto& deeper : below) {
      auto dit = aggregated.find(deeper);
      if (dit != aggregated.end() && dit->second <= value) {
        minimal = false;
        break;
      }
    }
    if (minimal) {
      d.cause.push_back({id, status_of(graph.find(id)->thresholds, value)});
    }
  }
  return d;
}

std::vector<Decision> replay(const SkillGraph& graph, const std::string& root,
                             const std::vector<MetricRecord>& records,
                             double step, std::optional<double> until) {
  if (!(step > 0.0)) throw DomainError("replay step must be positive");
  for (size_t i = 1; i < records.size(); ++i) {
    if (records[i].timestamp < records[i - 1].timestamp) {
      throw UnsortedStreamError(
          "metric stream not sorted: record " + std::to_string(i + 1) +
          " at t=" + format_number(records[i].timestamp) + " after t=" +
          format_number(records[i - 1].timestamp));
    }
  }

  double horizon = until.value_or(records.empty() ? 0.0 : records.back().timestamp);
  // number of boundaries k*step inside (0, horizon]; guard against the
  // horizon sitting a rounding error below an exact multiple
  long long k_max = static_cast<long long>(std::ceil(horizon / step - 1e-9));
  if (k_max < 0) k_max = 0;

  std::vector<Decision> out;
  MetricTable table;
  size_t idx = 0;
  for (long long k = 1; k <= k_max; ++k) {
    double t = static_cast<double>(k) * step;
    while (idx < records.size() && records[idx].timestamp <= t) {
      table.ingest(records[idx]);
      ++idx;
    }
    out.push_back(decide(graph, root, propagate(graph, evaluate_all(graph, table, t)), t));
  }
  return out;
}

std::vector<MetricRecord> read_metrics_csv(const std::string& text,
                                           const std::string& filename) {
  std::string body = text;
  if (body.rfind("\xEF\xBB\xBF", 0) == 0) body.erase(0, 3);

  std::vector<MetricRecord> out;
  int line_no = 0;
  bool seen_header = false;
  for (auto& line : split(body, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != "timestamp,source,metric,value") {
        throw ParseError({filename, line_no, 1},
                         "expected header 'timestamp,source,metric,value'");
      }
      seen_header = true;
      continue;
    }
    std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 4) {
      throw ParseError({filename, line_no, 1},
                       "expected 4 fields, got " + std::to_string(fields.size()));
    }
    MetricRecord r;
    if (!parse_number(fields[0], &r.timestamp) || !std::isfinite(r.timestamp) ||
        r.timestamp < 0.0) {
      throw ParseError({filename, line_no, 1},
                       "bad timestamp: " + fields[0]);
    }
    r.source = fields[1];
    r.metric = fields[2];
    if (r.source.empty() || r.metric.empty()) {
      throw ParseError({filename, line_no, 1}, "empty source or metric");
    }
    if (!parse_number(fields[3], &r.value)) {
      throw ParseError({filename, line_no, 1}, "bad value: " + fields[3]);
    }
    out.push_back(std::move(r));
  }
  if (!seen_header) {
    throw ParseError({filename, 1, 1},
                     "expected header 'timestamp,source,metric,value'");
  }
  return out;
}

std::string decisions_to_csv(const std::vector<Decision>& decisions) {
  std::string out = "timestamp,root,state,aggregated,cause\n";
  for (const auto& d : decisions) {
    std::vector<std::string> ids;
    for (const auto& c : d.cause) ids.push_back(c.id);
    out += format_number(d.timestamp) + "," + d.root + "," +
           to_string(d.state) + "," + format_number(d.aggregated) + "," +
           join(ids, "|") + "\n";
  }
  return out;
}

}  // namespace capcheck
