#include "lnf/report.hpp"

#include <cstdio>
#include <utility>
#include <vector>

namespace lnf {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::pair<const char*, std::string>> metric_fields(const FilterMetrics& m) {
  return {
      {"f0_hz", num(m.f0_hz)},
      {"il_db", num(m.il_db)},
      {"fbw_3db", num(m.fbw_3db)},
      {"fbw_4db", num(m.fbw_4db)},
      {"oob_rejection_db", num(m.oob_rejection_db)},
      {"ripple_db", num(m.ripple_db)},
      {"gd_variation_ns", num(m.gd_variation_s * 1e9)},
      {"passband_lo_hz", num(m.passband.lo_hz)},
      {"passband_hi_hz", num(m.passband.hi_hz)},
      {"multimodal", m.multimodal ? "1" : "0"},
      {"narrow_sweep", m.narrow_sweep ? "1" : "0"},
  };
}

}  // namespace

std::string metrics_report(const FilterMetrics& m) {
  std::string out;
  for (const auto& [k, v] : metric_fields(m)) out += std::string(k) + "=" + v + "\n";
  return out;
}

std::string metrics_csv_header() {
  std::string out;
  for (const auto& [k, v] : metric_fields(FilterMetrics{})) {
    if (!out.empty()) out += ',';
    out += k;
  }
  return out + "\n";
}

std::string metrics_csv_row(const FilterMetrics& m) {
  std::string out;
  bool first = true;
  for (const auto& [k, v] : metric_fields(m)) {
    if (!first) out += ',';
    out += v;
    first = false;
  }
  return out + "\n";
}

std::string fit_report(const FitResult& r) {
  std::string out;
  out += "converged=" + std::string(r.converged ? "1" : "0") + "\n";
  out += "residual=" + num(r.residual) + "\n";
  out += "iterations=" + std::to_string(r.iterations) + "\n";
  for (const Parameter& p : r.parameters) {
    out += "param." + p.name + "=" + num(p.value) + "\n";
    out += "param." + p.name + ".unit=" + p.unit + "\n";
  }
  std::string sat;
  for (const std::string& s : r.saturated) sat += (sat.empty() ? "" : ",") + s;
  out += "saturated=" + sat + "\n";
  return out;
}

}  // namespace lnf
