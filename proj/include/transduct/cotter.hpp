#pragma once

// Rejected-box predictions for a defect-rate process: beta-binomial
// transduction at several prior sample sizes against the binomial plug-in.

#include <cstdint>
#include <optional>
#include <vector>

#include "transduct/report.hpp"
#include "transduct/scenario.hpp"

namespace transduct::cotter {

// All quantities are proportions; to_table converts to percent.
struct TableRow {
  std::optional<std::int64_t> prior_sample_size;  // empty for the known-p baseline
  double mean = 0.0;                              // E[r/n]
  double sd = 0.0;                                // sd of r/n
  double rejected = 0.0;                          // P(r > threshold)
  std::optional<double> additional_rejected;      // (rejected - baseline) / baseline
};

// One row per n0 in input order, then the baseline row (p = ratio known exactly).
// Throws scenario::ScenarioError when ratio * n0 is not an integer.
[[nodiscard]] std::vector<TableRow> run_cotter_pin(const scenario::CotterParams& params);

// Columns prior_sample_size, mean_pct, sd_pct, rejected_pct, additional_rejected_pct.
[[nodiscard]] report::Table to_table(const std::vector<TableRow>& rows, std::string title = {});

}  // namespace transduct::cotter
