/* C interface of the capability-viewpoint toolkit.
 *
 * Conventions:
 *   - Every constructor writes an opaque handle through `out` and returns a
 *     CAPCHECK_* status. On failure `*out` is left untouched and
 *     capcheck_last_error() describes the problem (thread-local).
 *   - Strings returned by getters are owned by their handle and stay valid
 *     until the matching *_free call. Strings returned through `char**`
 *     (serialize, *_csv) are owned by the caller: release them with
 *     capcheck_string_free.
 *   - Index getters return NULL (or 0) when the index is out of range.
 */
#ifndef CAPCHECK_H
#define CAPCHECK_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CAPCHECK_OK 0
#define CAPCHECK_E_INTERNAL 1
#define CAPCHECK_E_PARSE 2
#define CAPCHECK_E_IO 3
#define CAPCHECK_E_USAGE 4
#define CAPCHECK_E_CYCLE 5
#define CAPCHECK_E_UNKNOWN_ID 6
#define CAPCHECK_E_DOMAIN 7
#define CAPCHECK_E_UNSORTED 8

typedef struct capcheck_model capcheck_model_t;
typedef struct capcheck_report capcheck_report_t;
typedef struct capcheck_coverage capcheck_coverage_t;
typedef struct capcheck_impact capcheck_impact_t;
typedef struct capcheck_reqtrace capcheck_reqtrace_t;
typedef struct capcheck_decisions capcheck_decisions_t;
typedef struct capcheck_trace capcheck_trace_t;
typedef struct capcheck_boundary capcheck_boundary_t;
typedef struct capcheck_findings capcheck_findings_t;

const char* capcheck_version(void);

/* Message of the last failing call on this thread; empty string if none. */
const char* capcheck_last_error(void);

void capcheck_string_free(char* s);

/* ---- model ---- */

int capcheck_model_parse(const char* text, const char* filename,
                         capcheck_model_t** out);
int capcheck_model_serialize(const capcheck_model_t* model, char** out);
void capcheck_model_free(capcheck_model_t* model);

/* ---- structural validation ---- */

int capcheck_validate(const capcheck_model_t* model, capcheck_report_t** out);
size_t capcheck_report_count(const capcheck_report_t* report);
const char* capcheck_report_code(const capcheck_report_t* report, size_t i);
const char* capcheck_report_location(const capcheck_report_t* report, size_t i);
const char* capcheck_report_detail(const capcheck_report_t* report, size_t i);
void capcheck_report_free(capcheck_report_t* report);

/* ---- correspondence coverage ---- */

int capcheck_coverage(const capcheck_model_t* model, capcheck_coverage_t** out);
size_t capcheck_coverage_count(const capcheck_coverage_t* coverage);
const char* capcheck_coverage_id(const capcheck_coverage_t* coverage, size_t i);
const char* capcheck_coverage_viewpoint(const capcheck_coverage_t* coverage,
                                        size_t i);
size_t capcheck_coverage_unmapped_count(const capcheck_coverage_t* coverage,
                                        size_t i);
const char* capcheck_coverage_unmapped(const capcheck_coverage_t* coverage,
                                       size_t i, size_t j);
void capcheck_coverage_free(capcheck_coverage_t* coverage);

/* ---- impact closure ---- */

int capcheck_impact(const capcheck_model_t* model, const char* viewpoint,
                    const char* element, capcheck_impact_t** out);
size_t capcheck_impact_count(const capcheck_impact_t* impact);
const char* capcheck_impact_viewpoint(const capcheck_impact_t* impact, size_t i);
const char* capcheck_impact_element(const capcheck_impact_t* impact, size_t i);
const char* capcheck_impact_path(const capcheck_impact_t* impact, size_t i);
void capcheck_impact_free(capcheck_impact_t* impact);

/* ---- requirement tracing ---- */

int capcheck_requirement(const capcheck_model_t* model, const char* id,
                         capcheck_reqtrace_t** out);
const char* capcheck_requirement_kind(const capcheck_reqtrace_t* trace);
const char* capcheck_requirement_text(const capcheck_reqtrace_t* trace);
size_t capcheck_requirement_anchor_count(const capcheck_reqtrace_t* trace);
const char* capcheck_requirement_anchor(const capcheck_reqtrace_t* trace,
                                        size_t i);
size_t capcheck_requirement_affected_count(const capcheck_reqtrace_t* trace);
const char* capcheck_requirement_affected_viewpoint(
    const capcheck_reqtrace_t* trace, size_t i);
const char* capcheck_requirement_affected_element(
    const capcheck_reqtrace_t* trace, size_t i);
void capcheck_requirement_free(capcheck_reqtrace_t* trace);

/* ---- capability monitor replay ---- */

/* `metrics_csv` is the stream content (header `timestamp,source,metric,value`);
 * `filename` only labels parse errors. `until` < 0 selects the default (the
 * last record's timestamp). */
int capcheck_replay(const capcheck_model_t* model, const char* root,
                    const char* metrics_csv, const char* filename, double step,
                    double until, capcheck_decisions_t** out);
size_t capcheck_decisions_count(const capcheck_decisions_t* decisions);
double capcheck_decision_timestamp(const capcheck_decisions_t* decisions,
                                   size_t i);
const char* capcheck_decision_state(const capcheck_decisions_t* decisions,
                                    size_t i);
double capcheck_decision_aggregated(const capcheck_decisions_t* decisions,
                                    size_t i);
/* `skill:STATUS` entries joined by '|'; empty string when nominal. */
const char* capcheck_decision_cause(const capcheck_decisions_t* decisions,
                                    size_t i);
int capcheck_decisions_csv(const capcheck_decisions_t* decisions, char** out);
void capcheck_decisions_free(capcheck_decisions_t* decisions);

/* ---- scenario kinematics ---- */

int capcheck_simulate(const capcheck_model_t* model, const char* scenario,
                      const char* policy, capcheck_trace_t** out);
size_t capcheck_trace_count(const capcheck_trace_t* trace);
int capcheck_trace_sample(const capcheck_trace_t* trace, size_t i, double* t,
                          double* x, double* v, double* a_cmd);
int capcheck_trace_csv(const capcheck_trace_t* trace, char** out);
void capcheck_trace_free(capcheck_trace_t* trace);

/* Boundary curve on a uniform grid of `grid_n` >= 2 points over
 * [0, d_crossing]. */
int capcheck_boundary(const capcheck_model_t* model, const char* scenario,
                      size_t grid_n, capcheck_boundary_t** out);
size_t capcheck_boundary_count(const capcheck_boundary_t* boundary);
int capcheck_boundary_point(const capcheck_boundary_t* boundary, size_t i,
                            double* d, double* v_boundary);
int capcheck_boundary_csv(const capcheck_boundary_t* boundary, char** out);
void capcheck_boundary_free(capcheck_boundary_t* boundary);

/* `trace_csv` content must carry the header `t,x,v,a_cmd`. */
int capcheck_hazards(const capcheck_model_t* model, const char* scenario,
                     const char* trace_csv, const char* filename,
                     capcheck_findings_t** out);
size_t capcheck_findings_count(const capcheck_findings_t* findings);
const char* capcheck_finding_id(const capcheck_findings_t* findings, size_t i);
double capcheck_finding_timestamp(const capcheck_findings_t* findings, size_t i);
const char* capcheck_finding_detail(const capcheck_findings_t* findings,
                                    size_t i);
void capcheck_findings_free(capcheck_findings_t* findings);

#ifdef __cplusplus
}
#endif

#endif /* CAPCHECK_H */
