#pragma once

#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace capcheck {

enum class ViewpointKind { kFunctional, kCapability, kSoftware, kHardware };
enum class MetricKind { kHeartbeat, kCounter, kScalar };
enum class RequirementKind { kSafetyGoal, kHazard, kRiskMinimalState, kFunctional };

const char* to_string(ViewpointKind kind);
const char* to_string(MetricKind kind);
const char* to_string(RequirementKind kind);

// Closed real interval; bounds may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return v >= lo && v <= hi; }
  bool overlaps(const Interval& other) const {
    return lo <= other.hi && other.lo <= hi;
  }
  // 0 when v lies inside the interval.
  double distance_to(double v) const;

  bool operator==(const Interval&) const = default;
};

struct MetricBinding {
  std::string source;
  std::string metric;
  MetricKind kind = MetricKind::kScalar;
  Interval nominal;
  Interval unavailable;
  std::optional<double> timeout;  // heartbeat/counter only

  bool operator==(const MetricBinding&) const = default;
};

struct Thresholds {
  // Performance at or above `degraded` is nominal, below `unavailable` the
  // skill counts as lost. Defaults are conservative: anything short of full
  // performance is degraded, below half it is unavailable.
  double degraded = 1.0;
  double unavailable = 0.5;

  bool operator==(const Thresholds&) const = default;
};

struct Skill {
  std::string id;
  std::string description;
  std::vector<std::string> requires_ids;  // abstract -> concrete
  Thresholds thresholds;
  std::vector<MetricBinding> bindings;

  bool operator==(const Skill&) const = default;
};

struct Edge {
  std::string source;
  std::string target;
  std::string label;  // optional, empty when absent

  bool operator==(const Edge&) const = default;
  auto key() const { return std::tie(source, target, label); }
};

struct Viewpoint {
  std::string id;
  ViewpointKind kind = ViewpointKind::kFunctional;
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::vector<Skill> skills;
  // ISO 42010 metadata, carried but not interpreted.
  std::string stakeholder;
  std::string concern;

  bool has_element(const std::string& element_id) const;
  // nodes followed by skill ids, canonical order.
  std::vector<std::string> element_ids() const;

  bool operator==(const Viewpoint&) const = default;
};

struct Anchor {
  std::string viewpoint;  // empty when the anchor token had no '.' separator
  std::string element;

  bool operator==(const Anchor&) const = default;
  auto key() const { return std::tie(viewpoint, element); }
};

struct Requirement {
  std::string id;
  RequirementKind kind = RequirementKind::kFunctional;
  std::string text;
  std::vector<Anchor> anchors;

  bool operator==(const Requirement&) const = default;
};

struct CorrespondencePair {
  std::string from;
  std::string to;

  bool operator==(const CorrespondencePair&) const = default;
  auto key() const { return std::tie(from, to); }
};

struct Correspondence {
  std::string id;
  std::string from_viewpoint;
  std::string to_viewpoint;
  std::vector<CorrespondencePair> pairs;  // n:m allowed

  bool operator==(const Correspondence&) const = default;
};

// Kinematic and geometric parameters for one driving scenario. Fields are
// optional so serialization can reproduce exactly the declared keys; the
// accessors apply the documented defaults.
struct ScenarioProfile {
  std::string id;
  std::optional<double> v_init_v;
  std::optional<double> d_crossing_v;
  std::optional<double> a_max_v;
  std::optional<double> mu_v;
  std::optional<double> t_react_v;
  std::optional<double> d_detect_v;
  std::optional<double> van_offset_lat_v;
  std::optional<double> van_length_v;
  std::optional<double> ped_lat_v;
  std::optional<double> g_v;

  double v_init() const { return v_init_v.value_or(0.0); }
  double d_crossing() const { return d_crossing_v.value_or(0.0); }
  double a_max() const { return a_max_v.value_or(0.0); }
  double mu() const { return mu_v.value_or(0.0); }
  double t_react() const { return t_react_v.value_or(0.0); }
  double d_detect() const {
    return d_detect_v.value_or(std::numeric_limits<double>::infinity());
  }
  double van_offset_lat() const { return van_offset_lat_v.value_or(0.0); }
  double van_length() const { return van_length_v.value_or(0.0); }
  double ped_lat() const { return ped_lat_v.value_or(0.0); }
  double g() const { return g_v.value_or(9.81); }

  bool operator==(const ScenarioProfile&) const = default;
};

// The capability viewpoint as a plain requires-DAG: skill union over all
// capability viewpoints of a model.
struct SkillGraph {
  std::vector<Skill> skills;  // sorted by id

  const Skill* find(const std::string& id) const;
  bool has(const std::string& id) const { return find(id) != nullptr; }
  std::vector<std::string> skill_ids() const;
  // children(s) = skills s requires; missing targets are skipped.
  std::vector<std::string> children(const std::string& id) const;
  std::vector<std::string> parents(const std::string& id) const;
  bool is_leaf(const std::string& id) const;

  bool operator==(const SkillGraph&) const = default;
};

struct ArchitectureModel {
  std::vector<Viewpoint> viewpoints;
  std::vector<Correspondence> correspondences;
  std::vector<Requirement> requirements;
  std::vector<ScenarioProfile> scenarios;

  const Viewpoint* find_viewpoint(const std::string& id) const;
  const Requirement* find_requirement(const std::string& id) const;
  const ScenarioProfile* find_scenario(const std::string& id) const;
  SkillGraph skill_graph() const;

  // Sorts every collection into canonical order (blocks by id, members by
  // their keys). Parsing and programmatic construction both end here so that
  // equality, validation and serialization are order-insensitive.
  void canonicalize();

  bool operator==(const ArchitectureModel&) const = default;
};

enum class ViolationCode {
  kCycle,
  kDanglingEdge,
  kDanglingPair,
  kDupId,
  kBadThresholds,
  kBadIntervals,
  kBadTimeout,
  kLeafNoMetric,
  kUnanchoredReq,
};

const char* to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string location;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool empty() const { return violations.empty(); }
  std::string to_text() const;

  bool operator==(const ValidationReport&) const = default;
};

// Pure structural validation; violations are data, not errors.
ValidationReport validate(const ArchitectureModel& model);

// Evaluation order over the requires-DAG: every skill appears after all
// skills it requires (children first), ties broken lexicographically.
// Throws CycleError when the graph is cyclic.
std::vector<std::string> topological_order(const SkillGraph& graph);

}  // namespace capcheck
