#include "core/traceability.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "core/errors.hpp"

namespace capcheck {
namespace {

using Key = std::pair<std::string, std::string>;

Key key_of(const ElementRef& ref) { return {ref.viewpoint, ref.element}; }

// Neighbors reachable in one hop, sorted for deterministic discovery.
std::vector<ElementRef> neighbors(const ArchitectureModel& model,
                                  const ElementRef& at) {
  std::vector<ElementRef> out;
  for (const auto& c : model.correspondences) {
    for (const auto& p : c.pairs) {
      if (c.from_viewpoint == at.viewpoint && p.from == at.element) {
        out.push_back({c.to_viewpoint, p.to});
      }
      if (c.to_viewpoint == at.viewpoint && p.to == at.element) {
        out.push_back({c.from_viewpoint, p.from});
      }
    }
  }
  // requires edges upward only: a concrete skill impacts every skill
  // that requires it
  const Viewpoint* vp = model.find_viewpoint(at.viewpoint);
  if (vp) {
    for (const auto& s : vp->skills) {
      for (const auto& r : s.requires_ids) {
        if (r == at.element) {
          out.push_back({at.viewpoint, s.id});
          break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const ElementRef& a, const ElementRef& b) { return a.key() < b.key(); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<CoverageGap> check_coverage(const ArchitectureModel& model) {
  std::vector<CoverageGap> out;
  for (const auto& c : model.correspondences) {
    CoverageGap gap;
    gap.correspondence = c.id;
    gap.viewpoint = c.from_viewpoint;
    const Viewpoint* from = model.find_viewpoint(c.from_viewpoint);
    if (from) {
      std::set<std::string> mapped;
      for (const auto& p : c.pairs) mapped.insert(p.from);
      for (const auto& el : from->element_ids()) {
        if (!mapped.count(el)) gap.unmapped.push_back(el);
      }
    }
    out.push_back(std::move(gap));
  }
  return out;
}

ImpactSet impact(const ArchitectureModel& model, const ElementRef& origin) {
  const Viewpoint* vp = model.find_viewpoint(origin.viewpoint);
  if (!vp || !vp->has_element(origin.element)) {
    throw UnknownIdError("unknown element: " + origin.to_string());
  }

  std::map<Key, std::string> path;  // discovered element -> chain text
  path[key_of(origin)] = origin.to_string();
  std::deque<ElementRef> queue{origin};
  while (!queue.empty()) {
    ElementRef at = queue.front();
    queue.pop_front();
    const std::string& chain = path.at(key_of(at));
    for (const auto& next : neighbors(model, at)) {
      auto [it, inserted] = path.try_emplace(key_of(next));
      if (!inserted) continue;
      it->second = chain + " -> " + next.to_string();
      queue.push_back(next);
    }
  }

  ImpactSet result;
  result.origin = origin;
  for (const auto& [key, chain] : path) {  // map iterates in sorted key order
    result.affected.push_back({key.first, key.second});
    result.paths.push_back(chain);
  }
  return result;
}

RequirementTrace trace_requirement(const ArchitectureModel& model,
                                   const std::string& requirement_id) {
  const Requirement* req = model.find_requirement(requirement_id);
  if (!req) throw UnknownIdError("unknown requirement: " + requirement_id);

  RequirementTrace trace;
  trace.id = req->id;
  trace.kind = req->kind;
  trace.text = req->text;
  trace.anchors = req->anchors;

  std::set<Key> seen;
  for (const auto& a : req->anchors) {
    if (a.viewpoint.empty()) {
      throw UnknownIdError("anchor is not qualified as viewpoint.element: " +
                           a.element);
    }
    ImpactSet set = impact(model, {a.viewpoint, a.element});
    for (const auto& ref : set.affected) seen.insert(key_of(ref));
  }
  for (const auto& key : seen) trace.affected.push_back({key.first, key.second});
  return trace;
}

}  // namespace capcheck
