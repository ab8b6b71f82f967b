#include "transduct/cotter.hpp"

#include <cmath>

#include "transduct/binomial.hpp"
#include "transduct/numerics.hpp"

namespace transduct::cotter {

std::vector<TableRow> run_cotter_pin(const scenario::CotterParams& params) {
  scenario::validate(params);
  const binomial::BinomialParams known{params.n, params.ratio};
  const auto baseline_pmf = binomial::binomial_log_pmf_table(known);
  const double baseline_tail =
      numerics::stable_tail_sum(baseline_pmf, params.threshold + 1, params.n);

  std::vector<TableRow> rows;
  rows.reserve(params.n0.size() + 1);
  for (const auto n0 : params.n0) {
    const auto r0 = std::llround(params.ratio * static_cast<double>(n0));
    const binomial::PriorSample prior(r0, n0, params.pseudo_count);
    // One pmf per row, shared by the tail comparison.
    const auto pmf = binomial::beta_binomial_log_pmf_table(params.n, prior);
    const auto tails = binomial::compare_tails(pmf, baseline_pmf, params.threshold);
    const auto moments = binomial::beta_binomial_moments(params.n, prior);
    TableRow row;
    row.prior_sample_size = n0;
    row.mean = moments.mean;
    row.sd = std::sqrt(moments.variance);
    row.rejected = tails.transductive_tail;
    if (tails.additional_rejected_pct) {
      row.additional_rejected = (tails.transductive_tail - tails.abductive_tail) / tails.abductive_tail;
    }
    rows.push_back(row);
  }

  const auto moments = binomial::binomial_moments(known);
  rows.push_back({std::nullopt, moments.mean, std::sqrt(moments.variance), baseline_tail, 0.0});
  return rows;
}

report::Table to_table(const std::vector<TableRow>& rows, std::string title) {
  report::Table table;
  table.title = std::move(title);
  table.columns = {"prior_sample_size", "mean_pct", "sd_pct", "rejected_pct",
                   "additional_rejected_pct"};
  table.labels = {"Prior Sample Size", "Mean of Defects (%)", "Standard Deviation of Defects (%)",
                  "Boxes Rejected (%)", "Additional Boxes Rejected (%)"};
  for (const auto& row : rows) {
    std::vector<report::Cell> cells;
    if (row.prior_sample_size) {
      cells.emplace_back(*row.prior_sample_size);
    } else {
      cells.emplace_back(report::Infinity{});
    }
    cells.emplace_back(100.0 * row.mean);
    cells.emplace_back(100.0 * row.sd);
    cells.emplace_back(100.0 * row.rejected);
    if (row.additional_rejected) {
      cells.emplace_back(100.0 * *row.additional_rejected);
    } else {
      cells.emplace_back(report::Missing{});
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace transduct::cotter
