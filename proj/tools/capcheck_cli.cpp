// Command-line front end. Talks to the core exclusively through the C API,
// which keeps it an honest consumer of the public surface.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "capcheck/capcheck.h"

namespace {

// Shortest round-trip formatting, same scheme the library uses for CSV, so
// human output and exported files agree on digits.
std::string fmt_num(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

bool color_enabled() {
  const char* env = std::getenv("CAPCHECK_COLOR");
  return env != nullptr && std::string(env) == "1";
}

std::string paint(const std::string& text, const char* code) {
  if (!color_enabled()) return text;
  return std::string("\x1b[") + code + "m" + text + "\x1b[0m";
}

std::string red(const std::string& t) { return paint(t, "31"); }
std::string yellow(const std::string& t) { return paint(t, "33"); }
std::string green(const std::string& t) { return paint(t, "32"); }

std::string color_state(const std::string& state) {
  if (state == "NOMINAL") return green(state);
  if (state == "DEGRADED") return yellow(state);
  return red(state);
}

int io_error(const std::string& message) {
  std::cerr << "capcheck: error: " << message << "\n";
  return 3;
}

int status_error(int status) {
  std::cerr << "capcheck: error: " << capcheck_last_error() << "\n";
  switch (status) {
    case CAPCHECK_E_PARSE:
    case CAPCHECK_E_UNSORTED:
      return 2;
    case CAPCHECK_E_IO:
      return 3;
    case CAPCHECK_E_USAGE:
    case CAPCHECK_E_UNKNOWN_ID:
    case CAPCHECK_E_DOMAIN:
      return 4;
    case CAPCHECK_E_CYCLE:
      return 1;  // structural invalidity, same class as an E_CYCLE finding
    default:
      return 3;
  }
}

bool read_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  *out = ss.str();
  return in.good() || in.eof();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << content;
  out.flush();
  return out.good();
}

using ModelHandle = std::unique_ptr<capcheck_model_t, void (*)(capcheck_model_t*)>;

// Loads and parses the model file; on failure prints and fills *exit_code.
ModelHandle load_model(const std::string& path, int* exit_code) {
  std::string text;
  if (!read_file(path, &text)) {
    *exit_code = io_error("cannot read " + path);
    return {nullptr, capcheck_model_free};
  }
  capcheck_model_t* raw = nullptr;
  int status = capcheck_model_parse(text.c_str(), path.c_str(), &raw);
  if (status != CAPCHECK_OK) {
    *exit_code = status_error(status);
    return {nullptr, capcheck_model_free};
  }
  return {raw, capcheck_model_free};
}

// ---- subcommand handlers ----

int run_validate(const std::string& model_path) {
  int code = 0;
  ModelHandle model = load_model(model_path, &code);
  if (!model) return code;

  capcheck_report_t* raw = nullptr;
  int status = capcheck_validate(model.get(), &raw);
  if (status != CAPCHECK_OK) return status_error(status);
  std::unique_ptr<capcheck_report_t, void (*)(capcheck_report_t*)> report(
      raw, capcheck_report_free);

  size_t n = capcheck_report_count(report.get());
  for (size_t i = 0; i < n; ++i) {
    std::cout << red(capcheck_report_code(report.get(), i)) << " "
              << capcheck_report_location(report.get(), i);
    const char* detail = capcheck_report_detail(report.get(), i);
    if (detail && detail[0] != '\0') std::cout << ": " << detail;
    std::cout << "\n";
  }
  std::cout << n << (n == 1 ? " violation" : " violations") << "\n";
  return n == 0 ? 0 : 1;
}

int run_coverage(const std::string& model_path) {
  int code = 0;
  ModelHandle model = load_model(model_path, &code);
  if (!model) return code;

  capcheck_coverage_t* raw = nullptr;
  int status = capcheck_coverage(model.get(), &raw);
  if (status != CAPCHECK_OK) return status_error(status);
  std::unique_ptr<capcheck_coverage_t, void (*)(capcheck_coverage_t*)> cov(
      raw, capcheck_coverage_free);

  size_t n = capcheck_coverage_count(cov.get());
  size_t total_unmapped = 0;
  for (size_t i = 0; i < n; ++i) {
    size_t k = capcheck_coverage_unmapped_count(cov.get(), i);
    std::cout << "correspondence " << capcheck_coverage_id(cov.get(), i) << " ("
              << capcheck_coverage_viewpoint(cov.get(), i) << "): ";
    if (k == 0) {
      std::cout << green("full coverage") << "\n";
    } else {
      std::cout << red(std::to_string(k) + " unmapped") << "\n";
      for (size_t j = 0; j < k; ++j) {
        std::cout << "  " << capcheck_coverage_unmapped(cov.get(), i, j) << "\n";
      }
    }
    total_unmapped += k;
  }
  std::cout << total_unmapped
            << (total_unmapped == 1 ? " unmapped element in "
                                    : " unmapped elements in ")
            << n << (n == 1 ? " correspondence" : " correspondences") << "\n";
  return total_unmapped == 0 ? 0 : 1;
}

int run_trace(const std::string& model_path, const std::string& from, bool csv) {
  size_t colon = from.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == from.size()) {
    std::cerr << "capcheck: error: --from expects <viewpoint>:<element>, got '"
              << from << "'\n";
    return 4;
  }
  std::string viewpoint = from.substr(0, colon);
  std::string element = from.substr(colon + 1);

  int code = 0;
  ModelHandle model = load_model(model_path, &code);
  if (!model) return code;

  capcheck_impact_t* raw = nullptr;
  int status = capcheck_impact(model.get(), viewpoint.c_str(), element.c_str(), &raw);
  if (status != CAPCHECK_OK) return status_error(status);
  std::unique_ptr<capcheck_impact_t, void (*)(capcheck_impact_t*)> impact(
      raw, capcheck_impact_free);

  size_t n = capcheck_impact_count(impact.get());
  if (csv) {
    std::cout << "viewpoint,element\n";
    for (size_t i = 0; i < n; ++i) {
      std::cout << capcheck_impact_viewpoint(impact.get(), i) << ","
                << capcheck_impact_element(impact.get(), i) << "\n";
    }
    return 0;
  }
  std::cout << "impact of " << viewpoint << "." << element << " (" << n
            << (n == 1 ? " element" : " elements") << "):\n";
  for (size_t i = 0; i < n; ++i) {
    std::string ref = std::string(capcheck_impact_viewpoint(impact.get(), i)) +
                      "." + capcheck_impact_element(impact.get(), i);
    std::cout << "  " << ref;
    const char* path = capcheck_impact_path(impact.get(), i);
    if (path && ref != path) std::cout << "  [" << path << "]";
    std::cout << "\n";
  }
  return 0;
}

int run_requirement(const std::string& model_path, const std::string& id) {
  int code = 0;
  ModelHandle model = load_model(model_path, &code);
  if (!model) return code;

  capcheck_reqtrace_t* raw = nullptr;
  int status = capcheck_requirement(model.get(), id.c_str(), &raw);
  if (status != CAPCHECK_OK) return status_error(status);
  std::unique_ptr<capcheck_reqtrace_t, void (*)(capcheck_reqtrace_t*)> trace(
      raw, capcheck_requirement_free);

  std::cout << "requirement " << id << " ("
            << capcheck_requirement_kind(trace.get()) << ")\n";
  std::cout << "text: " << capcheck_requirement_text(trace.get()) << "\n";
  std::cout << "anchors:";
  size_t na = capcheck_requirement_anchor_count(trace.get());
  for (size_t i = 0; i < na; ++i) {
    std::cout << (i == 0 ? " " : ", ")
              << capcheck_requirement_anchor(trace.get(), i);
  }
  std::cout << "\n";
  size_t n = capcheck_requirement_affected_count(trace.get());
  std::cout << "affected (" << n << "):\n";
  for (size_t i = 0; i < n; ++i) {
    std::cout << "  " << capcheck_requirement_affected_viewpoint(trace.get(), i)
              << "." << capcheck_requirement_affected_element(trace.get(), i)
              << "\n";
  }
  return 0;
}

int run_monitor(const std::string& model_path, const std::string& root,
                const std::string& metrics_path, double step, double until,
                const std::string& out_path) {
  int code = 0;
  ModelHandle model = load_model(model_path, &code);
  if (!model) return code;

  std::string metrics;
  if (!read_file(metrics_path, &metrics)) {
    return io_error("cannot read " + metrics_path);
  }

  capcheck_decisions_t* raw = nullptr;
  int status = capcheck_replay(model.get(), root.c_str(), metrics.c_str(),
                               metrics_path.c_str(), step, until, &raw);
  if (status != CAPCHECK_OK) return status_error(status);
  std::unique_ptr<capcheck_decisions_t, void (*)(capcheck_decisions_t*)> decisions(
      raw, capcheck_decisions_free);

  size_t n = capcheck_decisions_count(decisions.get());
  size_t off_nominal = 0;
  for (size_t i = 0; i < n; ++i) {
    std::string state = capcheck_decision_state(decisions.get(), i);
    if (state != "NOMINAL") ++off_nominal;
    std::cout << "t=" << fmt_num(capcheck_decision_timestamp(decisions.get(), i))
              << " " << color_state(state) << " aggregated="
              << fmt_num(capcheck_decision_aggregated(decisions.get(), i));
    const char* cause = capcheck_decision_cause(decisions.get(), i);
    if (cause && cause[0] != '\0') std::cout << " cause=" << cause;
    std::cout << "\n";
  }
  std::cout << n << (n == 1 ? " decision, " : " decisions, ") << off_nominal
            << " non-nominal\n";

  if (!out_path.empty()) {
    char* csv = nullptr;
    status = capcheck_decisions_csv(decisions.get(), &csv);
    if (status != CAPCHECK_OK) return status_error(status);
    std::string content(csv);
    capcheck_string_free(csv);
    if (!write_file(out_path, content)) return io_error("cannot write " + out_path);
  }
  return off_nominal == 0 ? 0 : 1;
}

int run_boundary(const std::string& model_path, const std::string& scenario,
                 size_t grid, const std::string& out_path) {
  int code = 0;
  ModelHandle model = load_model(model_path, &code);
  if (!model) return code;

  capcheck_boundary_t* raw = nullptr;
  int status = capcheck_boundary(model.get(), scenario.c_str(), grid, &raw);
  if (status != CAPCHECK_OK) return status_error(status);
  std::unique_ptr<capcheck_boundary_t, void (*)(capcheck_boundary_t*)> boundary(
      raw, capcheck_boundary_free);

  size_t n = capcheck_boundary_count(boundary.get());
  for (size_t i = 0; i < n; ++i) {
    double d = 0, v = 0;
    capcheck_boundary_point(boundary.get(), i, &d, &v);
    std::cout << "d=" << fmt_num(d) << " v_boundary=" << fmt_num(v) << "\n";
  }

  if (!out_path.empty()) {
    char* csv = nullptr;
    status = capcheck_boundary_csv(boundary.get(), &csv);
    if (status != CAPCHECK_OK) return status_error(status);
    std::string content(csv);
    capcheck_string_free(csv);
    if (!write_file(out_path, content)) return io_error("cannot write " + out_path);
  }
  return 0;
}

int run_simulate(const std::string& model_path, const std::string& scenario,
                 const std::string& policy, const std::string& out_path) {
  int code = 0;
  ModelHandle model = load_model(model_path, &code);
  if (!model) return code;

  capcheck_trace_t* raw = nullptr;
  int status = capcheck_simulate(model.get(), scenario.c_str(), policy.c_str(), &raw);
  if (status != CAPCHECK_OK) return status_error(status);
  std::unique_ptr<capcheck_trace_t, void (*)(capcheck_trace_t*)> trace(
      raw, capcheck_trace_free);

  size_t n = capcheck_trace_count(trace.get());
  double t = 0, x = 0, v = 0, a = 0;
  capcheck_trace_sample(trace.get(), n - 1, &t, &x, &v, &a);
  std::cout << "policy " << policy << ": " << n
            << (n == 1 ? " sample" : " samples") << ", t_end=" << fmt_num(t)
            << ", x_end=" << fmt_num(x) << ", v_end=" << fmt_num(v) << "\n";

  if (!out_path.empty()) {
    char* csv = nullptr;
    status = capcheck_trace_csv(trace.get(), &csv);
    if (status != CAPCHECK_OK) return status_error(status);
    std::string content(csv);
    capcheck_string_free(csv);
    if (!write_file(out_path, content)) return io_error("cannot write " + out_path);
  }
  return 0;
}

int run_hazards(const std::string& model_path, const std::string& scenario,
                const std::string& trace_path) {
  int code = 0;
  ModelHandle model = load_model(model_path, &code);
  if (!model) return code;

  std::string trace_csv;
  if (!read_file(trace_path, &trace_csv)) {
    return io_error("cannot read " + trace_path);
  }

  capcheck_findings_t* raw = nullptr;
  int status = capcheck_hazards(model.get(), scenario.c_str(), trace_csv.c_str(),
                                trace_path.c_str(), &raw);
  if (status != CAPCHECK_OK) return status_error(status);
  std::unique_ptr<capcheck_findings_t, void (*)(capcheck_findings_t*)> findings(
      raw, capcheck_findings_free);

  size_t n = capcheck_findings_count(findings.get());
  for (size_t i = 0; i < n; ++i) {
    std::cout << red(capcheck_finding_id(findings.get(), i)) << " at t="
              << fmt_num(capcheck_finding_timestamp(findings.get(), i)) << ": "
              << capcheck_finding_detail(findings.get(), i) << "\n";
  }
  if (n == 0) {
    std::cout << green("no hazards") << "\n";
  } else {
    std::cout << n << (n == 1 ? " hazard" : " hazards") << "\n";
  }
  return n == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capability-viewpoint toolkit: architecture validation, "
               "traceability, runtime capability monitoring and scenario "
               "safety analysis"};
  app.require_subcommand(1);

  std::string model_path, from, req_id, root, metrics_path, scenario, policy,
      trace_path, out_path;
  bool csv = false;
  double step = 0.0, until = -1.0;
  std::size_t grid = 0;

  auto* cmd_validate = app.add_subcommand("validate", "Check structural invariants");
  cmd_validate->add_option("model", model_path, "ADL model file")->required();

  auto* cmd_coverage =
      app.add_subcommand("coverage", "Unmapped elements per correspondence");
  cmd_coverage->add_option("model", model_path, "ADL model file")->required();

  auto* cmd_trace = app.add_subcommand("trace", "Impact closure of one element");
  cmd_trace->add_option("model", model_path, "ADL model file")->required();
  cmd_trace->add_option("--from", from, "origin as <viewpoint>:<element>")
      ->required();
  cmd_trace->add_flag("--csv", csv, "emit viewpoint,element rows");

  auto* cmd_requirement =
      app.add_subcommand("requirement", "Trace a requirement through anchors");
  cmd_requirement->add_option("model", model_path, "ADL model file")->required();
  cmd_requirement->add_option("--id", req_id, "requirement id")->required();

  auto* cmd_monitor =
      app.add_subcommand("monitor", "Replay a metric stream into decisions");
  cmd_monitor->add_option("model", model_path, "ADL model file")->required();
  cmd_monitor->add_option("--root", root, "root skill id")->required();
  cmd_monitor->add_option("--metrics", metrics_path, "metric stream CSV")
      ->required();
  cmd_monitor->add_option("--step", step, "decision period in seconds")
      ->required();
  cmd_monitor->add_option("--until", until,
                          "replay horizon in seconds (default: last record)");
  cmd_monitor->add_option("--out", out_path, "write decision log CSV here");

  auto* cmd_boundary =
      app.add_subcommand("boundary", "Export the safety-goal/RMS boundary");
  cmd_boundary->add_option("model", model_path, "ADL model file")->required();
  cmd_boundary->add_option("--scenario", scenario, "scenario id")->required();
  cmd_boundary->add_option("--grid", grid, "number of grid points (>= 2)")
      ->required();
  cmd_boundary->add_option("--out", out_path, "write d,v_boundary CSV here");

  auto* cmd_simulate = app.add_subcommand("simulate", "Integrate an approach policy");
  cmd_simulate->add_option("model", model_path, "ADL model file")->required();
  cmd_simulate->add_option("--scenario", scenario, "scenario id")->required();
  cmd_simulate
      ->add_option("--policy", policy,
                   "conservative_stop | adequate_speed_tracking")
      ->required();
  cmd_simulate->add_option("--out", out_path, "write t,x,v,a_cmd CSV here");

  auto* cmd_hazards = app.add_subcommand("hazards", "Check a trace for hazards");
  cmd_hazards->add_option("model", model_path, "ADL model file")->required();
  cmd_hazards->add_option("--scenario", scenario, "scenario id")->required();
  cmd_hazards->add_option("--trace", trace_path, "behavior trace CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "capcheck: error: " << e.what() << "\n";
    std::cerr << app.help();
    return 4;
  }

  if (cmd_validate->parsed()) return run_validate(model_path);
  if (cmd_coverage->parsed()) return run_coverage(model_path);
  if (cmd_trace->parsed()) return run_trace(model_path, from, csv);
  if (cmd_requirement->parsed()) return run_requirement(model_path, req_id);
  if (cmd_monitor->parsed()) {
    return run_monitor(model_path, root, metrics_path, step, until, out_path);
  }
  if (cmd_boundary->parsed()) return run_boundary(model_path, scenario, grid, out_path);
  if (cmd_simulate->parsed()) return run_simulate(model_path, scenario, policy, out_path);
  if (cmd_hazards->parsed()) return run_hazards(model_path, scenario, trace_path);
  return 4;
}
