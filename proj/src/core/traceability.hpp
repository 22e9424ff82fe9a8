#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "core/model.hpp"

namespace capcheck {

struct ElementRef {
  std::string viewpoint;
  std::string element;

  std::string to_string() const { return viewpoint + "." + element; }
  bool operator==(const ElementRef&) const = default;
  auto key() const { return std::tie(viewpoint, element); }
};

// Transitive closure from one element over correspondence pairs (both
// directions) and requires edges child -> parent. Reflexive: the origin is
// always affected.
struct ImpactSet {
  ElementRef origin;
  std::vector<ElementRef> affected;  // sorted by (viewpoint, element)
  std::vector<std::string> paths;    // one discovery chain per affected entry
};

// Elements of the correspondence's source viewpoint that appear in no pair.
struct CoverageGap {
  std::string correspondence;
  std::string viewpoint;  // the from-viewpoint
  std::vector<std::string> unmapped;  // sorted; empty = full coverage
};

struct RequirementTrace {
  std::string id;
  RequirementKind kind = RequirementKind::kFunctional;
  std::string text;
  std::vector<Anchor> anchors;
  std::vector<ElementRef> affected;  // union of per-anchor impact, sorted
};

// One entry per correspondence, in canonical model order.
std::vector<CoverageGap> check_coverage(const ArchitectureModel& model);

// Throws UnknownIdError when the origin does not resolve.
ImpactSet impact(const ArchitectureModel& model, const ElementRef& origin);

// Throws UnknownIdError for a missing requirement or unresolvable anchor.
RequirementTrace trace_requirement(const ArchitectureModel& model,
                                   const std::string& requirement_id);

}  // namespace capcheck
