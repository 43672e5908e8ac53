#include <cinttypes>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ign_bench/bench.hpp"

namespace ign::bench {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string exact(double v) { return fmt("%.17g", v); }

}  // namespace

void write_trace_csv(std::ostream& out, std::string_view method,
                     const std::vector<TraceRecord>& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << method << ',' << r.t << ',' << exact(r.epoch) << ',' << fmt("%.6f", r.elapsed_seconds)
        << ',' << exact(r.residual_norm) << ',';
    if (r.error_norm) out << exact(*r.error_norm);
    out << '\n';
  }
}

SummaryRow summarize(std::string method, const std::vector<TraceRecord>& trace, double tol,
                     double budget) {
  SummaryRow row;
  row.method = std::move(method);
  row.budget = budget;
  if (trace.empty()) return row;
  row.final_residual = trace.back().residual_norm;
  for (const auto& r : trace) {
    if (r.residual_norm <= tol) {
      row.reached = true;
      row.epochs_to_tol = r.epoch;
      row.time_to_tol = r.elapsed_seconds;
      break;
    }
  }
  return row;
}

bool ComparisonReport::any_failure() const {
  for (const auto& r : rows) {
    if (!r.error.empty()) return true;
  }
  return false;
}

void print_summary(std::ostream& out, const ComparisonReport& report) {
  out << std::left << std::setw(14) << "method" << std::setw(20) << "epochs-to-tol"
      << std::setw(16) << "time-to-tol(s)" << "final-residual\n";
  for (const auto& r : report.rows) {
    std::string epochs = "DNF (" + fmt("%g", r.budget) + " epochs)";
    std::string time = "-";
    if (r.reached) {
      epochs = fmt("%.3f", *r.epochs_to_tol);
      time = fmt("%.4f", *r.time_to_tol);
    }
    if (!r.error.empty()) epochs = "FAILED";
    out << std::setw(14) << r.method << std::setw(20) << epochs << std::setw(16) << time
        << fmt("%.3e", r.final_residual) << '\n';
    if (!r.error.empty()) out << "  error: " << r.error << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ComparisonReport& report) {
  out << "method,status,epochs_to_tol,time_to_tol,final_residual,budget_epochs,trace\n";
  for (const auto& r : report.rows) {
    const char* status = !r.error.empty() ? "failed" : (r.reached ? "reached" : "dnf");
    out << r.method << ',' << status << ',';
    if (r.epochs_to_tol) out << exact(*r.epochs_to_tol);
    out << ',';
    if (r.time_to_tol) out << fmt("%.6f", *r.time_to_tol);
    out << ',' << exact(r.final_residual) << ',' << exact(r.budget) << ','
        << r.trace_path.filename().string() << '\n';
  }
}

}  // namespace ign::bench
