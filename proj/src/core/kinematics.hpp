#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace capcheck {

enum class Policy { kConservativeStop, kAdequateSpeedTracking };

const char* to_string(Policy policy);
std::optional<Policy> policy_from_string(const std::string& name);

struct TraceSample {
  double t = 0.0;      // s
  double x = 0.0;      // m along path, crossing line at x = d_crossing
  double v = 0.0;      // m/s, >= 0
  double a_cmd = 0.0;  // m/s^2, commanded (<= 0)

  bool operator==(const TraceSample&) const = default;
};

struct BehaviorTrace {
  std::vector<TraceSample> samples;  // t strictly increasing

  bool operator==(const BehaviorTrace&) const = default;
};

struct HazardFinding {
  std::string id;  // H1, H2, H3
  double timestamp = 0.0;
  std::string detail;

  bool operator==(const HazardFinding&) const = default;
};

struct BoundaryPoint {
  double d = 0.0;
  double v_boundary = 0.0;

  bool operator==(const BoundaryPoint&) const = default;
};

// Throws DomainError when a field violates its range (negative distances,
// mu outside (0, 1.5], a_max <= 0, ...).
void validate_profile(const ScenarioProfile& profile);

// min(a_max, mu * g): actuator limit capped by road friction.
double effective_deceleration(const ScenarioProfile& profile);

// v * t_react + v^2 / (2 * a_eff). Throws DomainError on a_eff <= 0 or v < 0.
double stopping_distance(double v, double a_eff, double t_react);

// Largest v with stopping_distance(v) <= min(d, d_detect); exact inverse.
double adequate_speed(double d, double a_eff, double t_react,
                      double d_detect = std::numeric_limits<double>::infinity());

// Longitudinal distance ahead of the ego at which the pedestrian lateral
// line first clears the van corner, for an ego x_ego meters from the
// crossing. +inf when the geometry cannot occlude, 0 once the ego has
// passed the corner.
double occlusion_range(const ScenarioProfile& profile, double x_ego);

// Worst case: the largest ego distance from which a pedestrian standing at
// the crossing is visible. +inf when the geometry cannot occlude. The
// boundary and the simulated policies never assume detection earlier than
// this.
double emergence_cap(const ScenarioProfile& profile);

// Planning boundary of the safety goal: adequate_speed over
// min(d, d_detect, emergence_cap) - margin. Includes the reaction time.
double boundary_speed(const ScenarioProfile& profile, double d,
                      double margin = 0.0);

std::vector<BoundaryPoint> rms_boundary(const ScenarioProfile& profile,
                                        const std::vector<double>& d_grid,
                                        double margin = 0.0);

// Fixed 1e-3 s sampling; each step advances with the exact constant-
// acceleration solution, so stop positions carry no integration bias.
// conservative_stop cruises until the worst-case trigger distance
// min(d_detect, emergence_cap), coasts t_react, then brakes at a_eff.
// adequate_speed_tracking brakes whenever v exceeds boundary_speed(d).
// The trace ends at v = 0 or at crossing passage.
BehaviorTrace simulate(const ScenarioProfile& profile, Policy policy);

// H2: first sample exceeding the immediate-braking curve sqrt(2 a_eff
// d_eff) by > 1e-6 before the line (a vehicle already braking owes no
// reaction time, so the planning boundary would flag clean stops).
// H3: first sample at or past the line with v > 0.
// H1: H2 fired and no sample in [t*, t* + t_react] commands a_cmd < 0,
// provided the trace covers that window or crosses the line inside it.
std::vector<HazardFinding> check_hazards(const BehaviorTrace& trace,
                                         const ScenarioProfile& profile);

// CSV with header `t,x,v,a_cmd`. Throws ParseError (also for non-monotone
// t or negative v).
BehaviorTrace read_trace_csv(const std::string& text,
                             const std::string& filename);

std::string trace_to_csv(const BehaviorTrace& trace);

std::string boundary_to_csv(const std::vector<BoundaryPoint>& points);

}  // namespace capcheck
