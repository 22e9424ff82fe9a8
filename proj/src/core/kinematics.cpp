#include "core/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/text.hpp"

namespace capcheck {
namespace {

constexpr double kDt = 1e-3;
constexpr double kHazardTolerance = 1e-6;
constexpr double kTimeCap = 3600.0;  // defensive bound for pathological profiles
const double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

}  // namespace

const char* to_string(Policy policy) {
  switch (policy) {
    case Policy::kConservativeStop: return "conservative_stop";
    case Policy::kAdequateSpeedTracking: return "adequate_speed_tracking";
  }
  return "?";
}

std::optional<Policy> policy_from_string(const std::string& name) {
  if (name == "conservative_stop") return Policy::kConservativeStop;
  if (name == "adequate_speed_tracking") return Policy::kAdequateSpeedTracking;
  return std::nullopt;
}

void validate_profile(const ScenarioProfile& profile) {
  require(std::isfinite(profile.v_init()) && profile.v_init() >= 0.0,
          "v_init must be finite and >= 0");
  require(std::isfinite(profile.d_crossing()) && profile.d_crossing() >= 0.0,
          "d_crossing must be finite and >= 0");
  require(std::isfinite(profile.a_max()) && profile.a_max() > 0.0,
          "a_max must be positive");
  require(std::isfinite(profile.mu()) && profile.mu() > 0.0 && profile.mu() <= 1.5,
          "mu must be in (0, 1.5]");
  require(std::isfinite(profile.t_react()) && profile.t_react() >= 0.0,
          "t_react must be finite and >= 0");
  require(profile.d_detect() >= 0.0, "d_detect must be >= 0");
  require(std::isfinite(profile.van_offset_lat()) && profile.van_offset_lat() >= 0.0,
          "van_offset_lat must be finite and >= 0");
  require(std::isfinite(profile.van_length()) && profile.van_length() >= 0.0,
          "van_length must be finite and >= 0");
  require(std::isfinite(profile.ped_lat()) && profile.ped_lat() >= 0.0,
          "ped_lat must be finite and >= 0");
  require(std::isfinite(profile.g()) && profile.g() > 0.0, "g must be positive");
}

double effective_deceleration(const ScenarioProfile& profile) {
  return std::min(profile.a_max(), profile.mu() * profile.g());
}

double stopping_distance(double v, double a_eff, double t_react) {
  require(a_eff > 0.0, "a_eff must be positive");
  require(v >= 0.0, "v must be >= 0");
  require(t_react >= 0.0, "t_react must be >= 0");
  return v * t_react + v * v / (2.0 * a_eff);
}

double adequate_speed(double d, double a_eff, double t_react, double d_detect) {
  require(a_eff > 0.0, "a_eff must be positive");
  require(t_react >= 0.0, "t_react must be >= 0");
  double de = std::min(d, d_detect);
  if (de <= 0.0) return 0.0;
  if (std::isinf(de)) return kInf;
  // largest v with v*t_react + v^2/(2a) = de
  double at = a_eff * t_react;
  return -at + std::sqrt(at * at + 2.0 * a_eff * de);
}

double occlusion_range(const ScenarioProfile& profile, double x_ego) {
  validate_profile(profile);
  require(std::isfinite(x_ego), "x_ego must be finite");
  if (profile.ped_lat() <= profile.van_offset_lat()) return kInf;  // no occlusion
  if (x_ego <= profile.van_length()) return 0.0;  // ego at or past the corner
  if (profile.van_offset_lat() == 0.0) return kInf;  // van dead ahead hides the line
  // sight ray from the ego origin past the corner at
  // (x_ego - van_length, van_offset_lat), intersected with the lateral line
  // y = ped_lat
  double ratio = profile.ped_lat() / profile.van_offset_lat();
  return ratio * (x_ego - profile.van_length());
}

double emergence_cap(const ScenarioProfile& profile) {
  validate_profile(profile);
  if (profile.ped_lat() <= profile.van_offset_lat()) return kInf;
  if (profile.van_offset_lat() == 0.0) return profile.van_length();
  double ratio = profile.ped_lat() / profile.van_offset_lat();  // > 1 here
  // largest D with occlusion_range(D) <= D, i.e. ratio*(D - L) = D
  return ratio * profile.van_length() / (ratio - 1.0);
}

double boundary_speed(const ScenarioProfile& profile, double d, double margin) {
  double de = std::min({d, profile.d_detect(), emergence_cap(profile)}) - margin;
  if (de < 0.0) de = 0.0;
  return adequate_speed(de, effective_deceleration(profile), profile.t_react());
}

std::vector<BoundaryPoint> rms_boundary(const ScenarioProfile& profile,
                                        const std::vector<double>& d_grid,
                                        double margin) {
  validate_profile(profile);
  std::vector<BoundaryPoint> out;
  out.reserve(d_grid.size());
  for (double d : d_grid) {
    require(d >= 0.0, "grid distance must be >= 0");
    out.push_back({d, boundary_speed(profile, d, margin)});
  }
  return out;
}

namespace {

BehaviorTrace simulate_conservative(const ScenarioProfile& profile) {
  double a = effective_deceleration(profile);
  double v0 = profile.v_init();
  double D = profile.d_crossing();
  BehaviorTrace trace;
  if (v0 <= 0.0) {
    trace.samples.push_back({0.0, 0.0, 0.0, 0.0});
    return trace;
  }

  // worst case: nothing can be reacted to before the trigger distance
  double trigger = std::min(profile.d_detect(), emergence_cap(profile));
  double t1 = D > trigger ? (D - trigger) / v0 : 0.0;  // cruise ends
  double t2 = t1 + profile.t_react();                  // braking starts
  double t_stop = t2 + v0 / a;
  double x1 = v0 * t1;
  double x2 = x1 + v0 * (t2 - t1);
  double x_stop = x2 + v0 * v0 / (2.0 * a);

  double t_x = kInf;  // crossing passage, if any
  if (D <= x1) {
    t_x = D / v0;
  } else if (D <= x2) {
    t_x = t1 + (D - x1) / v0;
  } else if (x_stop > D) {
    double disc = std::max(0.0, v0 * v0 - 2.0 * a * (D - x2));
    t_x = t2 + (v0 - std::sqrt(disc)) / a;
  }
  bool crosses = t_x < t_stop;
  double t_end = crosses ? t_x : t_stop;

  auto sample_at = [&](double t) -> TraceSample {
    if (t < t1) return {t, v0 * t, v0, 0.0};
    if (t < t2) return {t, x1 + v0 * (t - t1), v0, 0.0};
    double tau = t - t2;
    return {t, x2 + v0 * tau - 0.5 * a * tau * tau, v0 - a * tau, -a};
  };

  for (long long k = 0; static_cast<double>(k) * kDt < t_end; ++k) {
    trace.samples.push_back(sample_at(static_cast<double>(k) * kDt));
  }
  if (crosses) {
    TraceSample last = sample_at(t_x);
    last.x = D;
    last.v = std::max(last.v, 0.0);
    trace.samples.push_back(last);
  } else {
    trace.samples.push_back({t_stop, x_stop, 0.0, 0.0});
  }
  return trace;
}

BehaviorTrace simulate_tracking(const ScenarioProfile& profile) {
  double a = effective_deceleration(profile);
  double D = profile.d_crossing();
  BehaviorTrace trace;
  double t = 0.0, x = 0.0, v = profile.v_init();
  if (v <= 0.0) {
    trace.samples.push_back({0.0, 0.0, 0.0, 0.0});
    return trace;
  }
  while (true) {
    bool brake = v > boundary_speed(profile, D - x);
    double cmd = brake ? -a : 0.0;
    trace.samples.push_back({t, x, v, cmd});
    if (x >= D || v <= 0.0 || t > kTimeCap) break;

    if (brake && v <= a * kDt) {  // comes to rest inside this step
      double dt_stop = v / a;
      double x_end = x + 0.5 * v * dt_stop;
      if (x_end >= D) {
        trace.samples.push_back({t + (v - std::sqrt(std::max(
                                          0.0, v * v - 2.0 * a * (D - x)))) /
                                         a,
                                 D, std::sqrt(std::max(0.0, v * v - 2.0 * a * (D - x))),
                                 cmd});
      } else {
        trace.samples.push_back({t + dt_stop, x_end, 0.0, 0.0});
      }
      break;
    }

    double v_next = brake ? v - a * kDt : v;
    double x_next = x + v * kDt - (brake ? 0.5 * a * kDt * kDt : 0.0);
    if (x_next >= D) {  // crossing passage inside this step, solved exactly
      double rem = D - x;
      double tau;
      double v_cross;
      if (brake) {
        v_cross = std::sqrt(std::max(0.0, v * v - 2.0 * a * rem));
        tau = (v - v_cross) / a;
      } else {
        v_cross = v;
        tau = rem / v;
      }
      trace.samples.push_back({t + tau, D, v_cross, cmd});
      break;
    }
    t += kDt;
    x = x_next;
    v = v_next;
  }
  return trace;
}

}  // namespace

BehaviorTrace simulate(const ScenarioProfile& profile, Policy policy) {
  validate_profile(profile);
  return policy == Policy::kConservativeStop ? simulate_conservative(profile)
                                             : simulate_tracking(profile);
}

std::vector<HazardFinding> check_hazards(const BehaviorTrace& trace,
                                         const ScenarioProfile& profile) {
  validate_profile(profile);
  double a = effective_deceleration(profile);
  double cap = emergence_cap(profile);
  double D = profile.d_crossing();

  // Immediate-braking curve: beyond it even instant max braking crosses the
  // line. The planning boundary (boundary_speed) also budgets t_react, which
  // a vehicle already braking has spent; judging traces against it would
  // flag clean conservative stops.
  auto hazard_speed = [&](double d) {
    double de = std::min({d, profile.d_detect(), cap});
    if (de < 0.0) de = 0.0;
    return std::sqrt(2.0 * a * de);
  };

  const TraceSample* first_over = nullptr;
  for (const auto& s : trace.samples) {
    if (s.x < D && s.v > hazard_speed(D - s.x) + kHazardTolerance) {
      first_over = &s;
      break;
    }
  }
  const TraceSample* crossing = nullptr;
  for (const auto& s : trace.samples) {
    if (s.x >= D && s.v > 0.0) {
      crossing = &s;
      break;
    }
  }

  std::vector<HazardFinding> out;
  if (first_over) {
    double t_star = first_over->t;
    double w_end = t_star + profile.t_react() + 1e-9;
    bool braked = false;
    bool crossed_in_window = false;
    double last_t = trace.samples.back().t;
    for (const auto& s : trace.samples) {
      if (s.t < t_star || s.t > w_end) continue;
      if (s.a_cmd < 0.0) braked = true;
      if (s.x >= D) crossed_in_window = true;
    }
    bool window_covered = last_t >= w_end - 2e-9 || crossed_in_window;
    if (!braked && window_covered) {
      out.push_back({"H1", t_star,
                     "no braking command within t_react=" +
                         format_number(profile.t_react()) +
                         " s of the boundary violation at t=" +
                         format_number(t_star)});
    }
  }
  if (first_over) {
    double d = D - first_over->x;
    out.push_back({"H2", first_over->t,
                   "v=" + format_number(first_over->v) +
                       " exceeds the stoppable speed " +
                       format_number(hazard_speed(d)) + " at d=" +
                       format_number(d)});
  }
  if (crossing) {
    out.push_back({"H3", crossing->t,
                   "crossed the line at v=" + format_number(crossing->v)});
  }
  return out;
}

BehaviorTrace read_trace_csv(const std::string& text,
                             const std::string& filename) {
  std::string body = text;
  if (body.rfind("\xEF\xBB\xBF", 0) == 0) body.erase(0, 3);

  BehaviorTrace trace;
  int line_no = 0;
  bool seen_header = false;
  for (auto& line : split(body, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != "t,x,v,a_cmd") {
        throw ParseError({filename, line_no, 1}, "expected header 't,x,v,a_cmd'");
      }
      seen_header = true;
      continue;
    }
    std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 4) {
      throw ParseError({filename, line_no, 1},
                       "expected 4 fields, got " + std::to_string(fields.size()));
    }
    TraceSample s;
    if (!parse_number(fields[0], &s.t) || !std::isfinite(s.t)) {
      throw ParseError({filename, line_no, 1}, "bad t: " + fields[0]);
    }
    if (!parse_number(fields[1], &s.x) || !std::isfinite(s.x)) {
      throw ParseError({filename, line_no, 1}, "bad x: " + fields[1]);
    }
    if (!parse_number(fields[2], &s.v) || !std::isfinite(s.v) || s.v < 0.0) {
      throw ParseError({filename, line_no, 1}, "bad v: " + fields[2]);
    }
    if (!parse_number(fields[3], &s.a_cmd) || !std::isfinite(s.a_cmd)) {
      throw ParseError({filename, line_no, 1}, "bad a_cmd: " + fields[3]);
    }
    if (!trace.samples.empty() && s.t <= trace.samples.back().t) {
      throw ParseError({filename, line_no, 1}, "t must be strictly increasing");
    }
    trace.samples.push_back(s);
  }
  if (!seen_header) {
    throw ParseError({filename, 1, 1}, "expected header 't,x,v,a_cmd'");
  }
  return trace;
}

std::string trace_to_csv(const BehaviorTrace& trace) {
  std::string out = "t,x,v,a_cmd\n";
  for (const auto& s : trace.samples) {
    out += format_number(s.t) + "," + format_number(s.x) + "," +
           format_number(s.v) + "," + format_number(s.a_cmd) + "\n";
  }
  return out;
}

std::string boundary_to_csv(const std::vector<BoundaryPoint>& points) {
  std::string out = "d,v_boundary\n";
  for (const auto& p : points) {
    out += format_number(p.d) + "," + format_number(p.v_boundary) + "\n";
  }
  return out;
}

}  // namespace capcheck
