#include "capcheck/capcheck.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "core/adl.hpp"
#include "core/errors.hpp"
#include "core/kinematics.hpp"
#include "core/model.hpp"
#include "core/monitor.hpp"
#include "core/text.hpp"
#include "core/traceability.hpp"

// Each handle owns the computed result plus every composed string a getter
// may hand out, so returned pointers stay valid for the handle's lifetime.

struct capcheck_model {
  capcheck::ArchitectureModel value;
};

struct capcheck_report {
  capcheck::ValidationReport value;
};

struct capcheck_coverage {
  std::vector<capcheck::CoverageGap> value;
};

struct capcheck_impact {
  capcheck::ImpactSet value;
};

struct capcheck_reqtrace {
  capcheck::RequirementTrace value;
  std::vector<std::string> anchor_texts;
};

struct capcheck_decisions {
  std::vector<capcheck::Decision> value;
  std::vector<std::string> cause_texts;
};

struct capcheck_trace {
  capcheck::BehaviorTrace value;
};

struct capcheck_boundary {
  std::vector<capcheck::BoundaryPoint> value;
};

struct capcheck_findings {
  std::vector<capcheck::HazardFinding> value;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return CAPCHECK_OK;
  } catch (const capcheck::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(CAPCHECK_E_INTERNAL, e.what());
  } catch (...) {
    return fail(CAPCHECK_E_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bool missing(const void* p) { return p == nullptr; }

const capcheck::ScenarioProfile& scenario_of(const capcheck_model* model,
                                             const char* id) {
  const capcheck::ScenarioProfile* sc = model->value.find_scenario(id);
  if (!sc) throw capcheck::UnknownIdError(std::string("unknown scenario: ") + id);
  return *sc;
}

}  // namespace

extern "C" {

const char* capcheck_version(void) { return "1.0.0"; }

const char* capcheck_last_error(void) { return g_last_error.c_str(); }

void capcheck_string_free(char* s) { delete[] s; }

int capcheck_model_parse(const char* text, const char* filename,
                         capcheck_model_t** out) {
  if (missing(text) || missing(out)) return fail(CAPCHECK_E_USAGE, "null argument");
  return guarded([&] {
    auto* handle = new capcheck_model;
    try {
      handle->value = capcheck::parse_adl(text, filename ? filename : "<input>");
    } catch (...) {
      delete handle;
      throw;
    }
    *out = handle;
  });
}

int capcheck_model_serialize(const capcheck_model_t* model, char** out) {
  if (missing(model) || missing(out)) return fail(CAPCHECK_E_USAGE, "null argument");
  return guarded([&] { *out = copy_string(capcheck::serialize_adl(model->value)); });
}

void capcheck_model_free(capcheck_model_t* model) { delete model; }

int capcheck_validate(const capcheck_model_t* model, capcheck_report_t** out) {
  if (missing(model) || missing(out)) return fail(CAPCHECK_E_USAGE, "null argument");
  return guarded([&] { *out = new capcheck_report{capcheck::validate(model->value)}; });
}

size_t capcheck_report_count(const capcheck_report_t* report) {
  return report ? report->value.violations.size() : 0;
}

const char* capcheck_report_code(const capcheck_report_t* report, size_t i) {
  if (!report || i >= report->value.violations.size()) return nullptr;
  return capcheck::to_string(report->value.violations[i].code);
}

const char* capcheck_report_location(const capcheck_report_t* report, size_t i) {
  if (!report || i >= report->value.violations.size()) return nullptr;
  return report->value.violations[i].location.c_str();
}

const char* capcheck_report_detail(const capcheck_report_t* report, size_t i) {
  if (!report || i >= report->value.violations.size()) return nullptr;
  return report->value.violations[i].detail.c_str();
}

void capcheck_report_free(capcheck_report_t* report) { delete report; }

int capcheck_coverage(const capcheck_model_t* model, capcheck_coverage_t** out) {
  if (missing(model) || missing(out)) return fail(CAPCHECK_E_USAGE, "null argument");
  return guarded([&] {
    *out = new capcheck_coverage_t{capcheck::check_coverage(model->value)};
  });
}

size_t capcheck_coverage_count(const capcheck_coverage_t* coverage) {
  return coverage ? coverage->value.size() : 0;
}

const char* capcheck_coverage_id(const capcheck_coverage_t* coverage, size_t i) {
  if (!coverage || i >= coverage->value.size()) return nullptr;
  return coverage->value[i].correspondence.c_str();
}

const char* capcheck_coverage_viewpoint(const capcheck_coverage_t* coverage,
                                        size_t i) {
  if (!coverage || i >= coverage->value.size()) return nullptr;
  return coverage->value[i].viewpoint.c_str();
}

size_t capcheck_coverage_unmapped_count(const capcheck_coverage_t* coverage,
                                        size_t i) {
  if (!coverage || i >= coverage->value.size()) return 0;
  return coverage->value[i].unmapped.size();
}

const char* capcheck_coverage_unmapped(const capcheck_coverage_t* coverage,
                                       size_t i, size_t j) {
  if (!coverage || i >= coverage->value.size()) return nullptr;
  const auto& unmapped = coverage->value[i].unmapped;
  return j < unmapped.size() ? unmapped[j].c_str() : nullptr;
}

void capcheck_coverage_free(capcheck_coverage_t* coverage) { delete coverage; }

int capcheck_impact(const capcheck_model_t* model, const char* viewpoint,
                    const char* element, capcheck_impact_t** out) {
  if (missing(model) || missing(viewpoint) || missing(element) || missing(out)) {
    return fail(CAPCHECK_E_USAGE, "null argument");
  }
  return guarded([&] {
    *out = new capcheck_impact_t{capcheck::impact(model->value, {viewpoint, element})};
  });
}

size_t capcheck_impact_count(const capcheck_impact_t* impact) {
  return impact ? impact->value.affected.size() : 0;
}

const char* capcheck_impact_viewpoint(const capcheck_impact_t* impact, size_t i) {
  if (!impact || i >= impact->value.affected.size()) return nullptr;
  return impact->value.affected[i].viewpoint.c_str();
}

const char* capcheck_impact_element(const capcheck_impact_t* impact, size_t i) {
  if (!impact || i >= impact->value.affected.size()) return nullptr;
  return impact->value.affected[i].element.c_str();
}

const char* capcheck_impact_path(const capcheck_impact_t* impact, size_t i) {
  if (!impact || i >= impact->value.paths.size()) return nullptr;
  return impact->value.paths[i].c_str();
}

void capcheck_impact_free(capcheck_impact_t* impact) { delete impact; }

int capcheck_requirement(const capcheck_model_t* model, const char* id,
                         capcheck_reqtrace_t** out) {
  if (missing(model) || missing(id) || missing(out)) {
    return fail(CAPCHECK_E_USAGE, "null argument");
  }
  return guarded([&] {
    auto* handle = new capcheck_reqtrace;
    try {
      handle->value = capcheck::trace_requirement(model->value, id);
      for (const auto& a : handle->value.anchors) {
        handle->anchor_texts.push_back(
            a.viewpoint.empty() ? a.element : a.viewpoint + "." + a.element);
      }
    } catch (...) {
      delete handle;
      throw;
    }
    *out = handle;
  });
}

const char* capcheck_requirement_kind(const capcheck_reqtrace_t* trace) {
  return trace ? capcheck::to_string(trace->value.kind) : nullptr;
}

const char* capcheck_requirement_text(const capcheck_reqtrace_t* trace) {
  return trace ? trace->value.text.c_str() : nullptr;
}

size_t capcheck_requirement_anchor_count(const capcheck_reqtrace_t* trace) {
  return trace ? trace->anchor_texts.size() : 0;
}

const char* capcheck_requirement_anchor(const capcheck_reqtrace_t* trace,
                                        size_t i) {
  if (!trace || i >= trace->anchor_texts.size()) return nullptr;
  return trace->anchor_texts[i].c_str();
}

size_t capcheck_requirement_affected_count(const capcheck_reqtrace_t* trace) {
  return trace ? trace->value.affected.size() : 0;
}

const char* capcheck_requirement_affected_viewpoint(
    const capcheck_reqtrace_t* trace, size_t i) {
  if (!trace || i >= trace->value.affected.size()) return nullptr;
  return trace->value.affected[i].viewpoint.c_str();
}

const char* capcheck_requirement_affected_element(
    const capcheck_reqtrace_t* trace, size_t i) {
  if (!trace || i >= trace->value.affected.size()) return nullptr;
  return trace->value.affected[i].element.c_str();
}

void capcheck_requirement_free(capcheck_reqtrace_t* trace) { delete trace; }

int capcheck_replay(const capcheck_model_t* model, const char* root,
                    const char* metrics_csv, const char* filename, double step,
                    double until, capcheck_decisions_t** out) {
  if (missing(model) || missing(root) || missing(metrics_csv) || missing(out)) {
    return fail(CAPCHECK_E_USAGE, "null argument");
  }
  return guarded([&] {
    auto records = capcheck::read_metrics_csv(
        metrics_csv, filename ? filename : "<metrics>");
    auto graph = model->value.skill_graph();
    std::optional<double> horizon;
    if (until >= 0.0) horizon = until;
    auto* handle = new capcheck_decisions;
    try {
      handle->value = capcheck::replay(graph, root, records, step, horizon);
      for (const auto& d : handle->value) {
        std::vector<std::string> parts;
        for (const auto& c : d.cause) {
          parts.push_back(c.id + ":" + capcheck::to_string(c.status));
        }
        handle->cause_texts.push_back(capcheck::join(parts, "|"));
      }
    } catch (...) {
      delete handle;
      throw;
    }
    *out = handle;
  });
}

size_t capcheck_decisions_count(const capcheck_decisions_t* decisions) {
  return decisions ? decisions->value.size() : 0;
}

double capcheck_decision_timestamp(const capcheck_decisions_t* decisions,
                                   size_t i) {
  if (!decisions || i >= decisions->value.size()) return 0.0;
  return decisions->value[i].timestamp;
}

const char* capcheck_decision_state(const capcheck_decisions_t* decisions,
                                    size_t i) {
  if (!decisions || i >= decisions->value.size()) return nullptr;
  return capcheck::to_string(decisions->value[i].state);
}

double capcheck_decision_aggregated(const capcheck_decisions_t* decisions,
                                    size_t i) {
  if (!decisions || i >= decisions->value.size()) return 0.0;
  return decisions->value[i].aggregated;
}

const char* capcheck_decision_cause(const capcheck_decisions_t* decisions,
                                    size_t i) {
  if (!decisions || i >= decisions->cause_texts.size()) return nullptr;
  return decisions->cause_texts[i].c_str();
}

int capcheck_decisions_csv(const capcheck_decisions_t* decisions, char** out) {
  if (missing(decisions) || missing(out)) return fail(CAPCHECK_E_USAGE, "null argument");
  return guarded([&] {
    *out = copy_string(capcheck::decisions_to_csv(decisions->value));
  });
}

void capcheck_decisions_free(capcheck_decisions_t* decisions) { delete decisions; }

int capcheck_simulate(const capcheck_model_t* model, const char* scenario,
                      const char* policy, capcheck_trace_t** out) {
  if (missing(model) || missing(scenario) || missing(policy) || missing(out)) {
    return fail(CAPCHECK_E_USAGE, "null argument");
  }
  return guarded([&] {
    auto parsed = capcheck::policy_from_string(policy);
    if (!parsed) {
      throw capcheck::Error(capcheck::ErrorCode::kUsage,
                            std::string("unknown policy: ") + policy);
    }
    const auto& profile = scenario_of(model, scenario);
    *out = new capcheck_trace{capcheck::simulate(profile, *parsed)};
  });
}

size_t capcheck_trace_count(const capcheck_trace_t* trace) {
  return trace ? trace->value.samples.size() : 0;
}

int capcheck_trace_sample(const capcheck_trace_t* trace, size_t i, double* t,
                          double* x, double* v, double* a_cmd) {
  if (!trace || i >= trace->value.samples.size()) {
    return fail(CAPCHECK_E_USAGE, "sample index out of range");
  }
  const auto& s = trace->value.samples[i];
  if (t) *t = s.t;
  if (x) *x = s.x;
  if (v) *v = s.v;
  if (a_cmd) *a_cmd = s.a_cmd;
  return CAPCHECK_OK;
}

int capcheck_trace_csv(const capcheck_trace_t* trace, char** out) {
  if (missing(trace) || missing(out)) return fail(CAPCHECK_E_USAGE, "null argument");
  return guarded([&] { *out = copy_string(capcheck::trace_to_csv(trace->value)); });
}

void capcheck_trace_free(capcheck_trace_t* trace) { delete trace; }

int capcheck_boundary(const capcheck_model_t* model, const char* scenario,
                      size_t grid_n, capcheck_boundary_t** out) {
  if (missing(model) || missing(scenario) || missing(out)) {
    return fail(CAPCHECK_E_USAGE, "null argument");
  }
  if (grid_n < 2) return fail(CAPCHECK_E_USAGE, "grid needs at least 2 points");
  return guarded([&] {
    const auto& profile = scenario_of(model, scenario);
    capcheck::validate_profile(profile);
    std::vector<double> grid;
    grid.reserve(grid_n);
    double d_max = profile.d_crossing();
    for (size_t i = 0; i < grid_n; ++i) {
      grid.push_back(d_max * static_cast<double>(i) /
                     static_cast<double>(grid_n - 1));
    }
    *out = new capcheck_boundary_t{capcheck::rms_boundary(profile, grid)};
  });
}

size_t capcheck_boundary_count(const capcheck_boundary_t* boundary) {
  return boundary ? boundary->value.size() : 0;
}

int capcheck_boundary_point(const capcheck_boundary_t* boundary, size_t i,
                            double* d, double* v_boundary) {
  if (!boundary || i >= boundary->value.size()) {
    return fail(CAPCHECK_E_USAGE, "point index out of range");
  }
  if (d) *d = boundary->value[i].d;
  if (v_boundary) *v_boundary = boundary->value[i].v_boundary;
  return CAPCHECK_OK;
}

int capcheck_boundary_csv(const capcheck_boundary_t* boundary, char** out) {
  if (missing(boundary) || missing(out)) return fail(CAPCHECK_E_USAGE, "null argument");
  return guarded([&] {
    *out = copy_string(capcheck::boundary_to_csv(boundary->value));
  });
}

void capcheck_boundary_free(capcheck_boundary_t* boundary) { delete boundary; }

int capcheck_hazards(const capcheck_model_t* model, const char* scenario,
                     const char* trace_csv, const char* filename,
                     capcheck_findings_t** out) {
  if (missing(model) || missing(scenario) || missing(trace_csv) || missing(out)) {
    return fail(CAPCHECK_E_USAGE, "null argument");
  }
  return guarded([&] {
    const auto& profile = scenario_of(model, scenario);
    auto trace = capcheck::read_trace_csv(trace_csv,
                                          filename ? filename : "<trace>");
    *out = new capcheck_findings{capcheck::check_hazards(trace, profile)};
  });
}

size_t capcheck_findings_count(const capcheck_findings_t* findings) {
  return findings ? findings->value.size() : 0;
}

const char* capcheck_finding_id(const capcheck_findings_t* findings, size_t i) {
  if (!findings || i >= findings->value.size()) return nullptr;
  return findings->value[i].id.c_str();
}

double capcheck_finding_timestamp(const capcheck_findings_t* findings, size_t i) {
  if (!findings || i >= findings->value.size()) return 0.0;
  return findings->value[i].timestamp;
}

const char* capcheck_finding_detail(const capcheck_findings_t* findings,
                                    size_t i) {
  if (!findings || i >= findings->value.size()) return nullptr;
  return findings->value[i].detail.c_str();
}

void capcheck_findings_free(capcheck_findings_t* findings) { delete findings; }

}  // extern "C"
