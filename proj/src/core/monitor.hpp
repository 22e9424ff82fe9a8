#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/model.hpp"

namespace capcheck {

enum class SkillStatus { kNominal, kDegraded, kUnavailable };
enum class DecisionState { kNominal, kDegraded, kRms };

const char* to_string(SkillStatus status);
const char* to_string(DecisionState state);

struct MetricRecord {
  double timestamp = 0.0;  // seconds, monotone non-negative
  std::string source;
  std::string metric;
  double value = 0.0;  // heartbeats carry 1.0

  bool operator==(const MetricRecord&) const = default;
};

struct SkillState {
  std::string id;
  double own = 1.0;
  double aggregated = 1.0;
  SkillStatus status = SkillStatus::kNominal;

  bool operator==(const SkillState&) const = default;
};

struct CauseEntry {
  std::string id;
  SkillStatus status = SkillStatus::kUnavailable;

  bool operator==(const CauseEntry&) const = default;
};

struct Decision {
  double timestamp = 0.0;
  std::string root;
  DecisionState state = DecisionState::kNominal;
  double aggregated = 1.0;
  std::vector<CauseEntry> cause;  // minimal offenders, sorted by id

  bool operator==(const Decision&) const = default;
};

// Latest observation per (source, metric). Tracks when the value was last
// updated and when it last strictly increased (counter liveness).
class MetricTable {
 public:
  struct Cell {
    double value = 0.0;
    double updated = 0.0;  // timestamp of the latest record
    double changed = 0.0;  // timestamp of the latest strict increase
  };

  void ingest(const MetricRecord& record);
  const Cell* find(const std::string& source, const std::string& metric) const;
  void clear() { cells_.clear(); }

 private:
  std::map<std::pair<std::string, std::string>, Cell> cells_;
};

// Piecewise-linear membership: 1 inside nominal, 0 inside unavailable,
// linear across the gap. Heartbeat/counter bindings with a timeout collapse
// to 0 once age exceeds it.
double normalize(const MetricBinding& binding, double value, double age);

// Minimum of normalize over the skill's bindings; a binding with no record
// counts as 0. Skills without bindings report 1 (monitors may sit at any
// level; leaves without bindings are a validation finding, not handled here).
double evaluate_own(const Skill& skill, const MetricTable& table, double now);

std::map<std::string, double> evaluate_all(const SkillGraph& graph,
                                           const MetricTable& table, double now);

// aggregated(s) = min(own(s), min over required children c of aggregated(c)).
// Skills absent from `own` count as 1. Throws CycleError on cyclic graphs.
std::map<std::string, double> propagate(const SkillGraph& graph,
                                        const std::map<std::string, double>& own);

SkillStatus status_of(const Thresholds& thresholds, double aggregated);

// Classifies the root against its own thresholds and names the minimal
// offending skills (no required descendant with an equal-or-lower value).
// Throws UnknownIdError when root is not in the graph.
Decision decide(const SkillGraph& graph, const std::string& root,
                const std::map<std::string, double>& aggregated,
                double timestamp);

// Batch harness: one Decision per step boundary k*step, k = 1..K, consuming
// records with timestamp <= boundary (latest record wins per source/metric).
// `until` defaults to the last record's timestamp. Throws UnsortedStreamError
// when timestamps decrease, DomainError for step <= 0.
std::vector<Decision> replay(const SkillGraph& graph, const std::string& root,
                             const std::vector<MetricRecord>& records,
                             double step,
                             std::optional<double> until = std::nullopt);

// CSV with header `timestamp,source,metric,value`. Throws ParseError.
std::vector<MetricRecord> read_metrics_csv(const std::string& text,
                                           const std::string& filename);

// CSV with header `timestamp,root,state,aggregated,cause`; cause ids joined
// by '|'. Byte-deterministic.
std::string decisions_to_csv(const std::vector<Decision>& decisions);

}  // namespace capcheck
