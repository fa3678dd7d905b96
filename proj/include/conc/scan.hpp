#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "conc/bounds.hpp"
#include "conc/states.hpp"
#include "conc/types.hpp"

namespace conc {

struct ScanRow {
  double a = 0.0;
  double lower_algebraic = 0.0;
  double lower_optimized = 0.0;
  double upper_optimized = 0.0;
  double negativity = 0.0;
  bool is_ppt = false;
  double seconds = 0.0;
};

// Evaluate the bound pipeline on an even grid over the one-parameter 3x3 PPT
// family.  Each grid point gets its own decorrelated-but-deterministic seed
// derived from (opts.seed, k).
inline std::vector<ScanRow> scan_horodecki(double a_min, double a_max, int steps,
                                           const OptimizerOptions& opts = {}) {
  if (!(a_min >= 0.0 && a_max <= 1.0 && a_min < a_max))
    throw BadRange("scan_horodecki: need 0 <= a_min < a_max <= 1");
  if (steps < 2) throw BadRange("scan_horodecki: need at least 2 steps");

  std::vector<ScanRow> rows;
  rows.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    const double a = a_min + k * (a_max - a_min) / (steps - 1);
    OptimizerOptions point_opts = opts;
    point_opts.seed = mix_seed(opts.seed, static_cast<std::uint64_t>(k));
    BoundReport rep = bound_report(horodecki_state(a), point_opts);
    ScanRow row;
    row.a = a;
    row.lower_algebraic = rep.lower_algebraic;
    row.lower_optimized = rep.lower_optimized;
    row.upper_optimized = rep.upper_optimized;
    row.negativity = rep.negativity;
    row.is_ppt = rep.is_ppt;
    row.seconds = rep.diag.wall_seconds;
    rows.push_back(row);
  }
  return rows;
}

namespace detail {
inline std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::string(buf);
}
}  // namespace detail

inline std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::string out = "a,lower_algebraic,lower_optimized,upper_optimized,negativity,is_ppt,seconds\n";
  for (const ScanRow& r : rows) {
    out += detail::format_g12(r.a);
    out += ',';
    out += detail::format_g12(r.lower_algebraic);
    out += ',';
    out += detail::format_g12(r.lower_optimized);
    out += ',';
    out += detail::format_g12(r.upper_optimized);
    out += ',';
    out += detail::format_g12(r.negativity);
    out += ',';
    out += r.is_ppt ? "true" : "false";
    out += ',';
    out += detail::format_g12(r.seconds);
    out += '\n';
  }
  return out;
}

inline void write_scan_csv(const std::string& path, const std::vector<ScanRow>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("write_scan_csv: cannot open '" + path + "' for writing");
  f << scan_to_csv(rows);
}

}  // namespace conc
