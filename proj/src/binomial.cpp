#include "transduct/binomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "transduct/errors.hpp"
#include "transduct/numerics.hpp"

namespace transduct::binomial {

using numerics::kLogZero;

PriorSample::PriorSample(std::int64_t r0, std::int64_t n0, double pseudo_count)
    : r0_(r0), n0_(n0), pseudo_count_(pseudo_count) {
  if (!(pseudo_count >= 0.0) || !std::isfinite(pseudo_count)) {
    throw DomainError("PriorSample: pseudo-count must be finite and nonnegative");
  }
  if (n0 < 1 || r0 < 0 || r0 > n0) {
    throw DomainError("PriorSample: need 0 <= r0 <= n0 and n0 >= 1, got r0=" +
                      std::to_string(r0) + " n0=" + std::to_string(n0));
  }
  if (pseudo_count == 0.0 && (r0 == 0 || r0 == n0)) {
    throw BoundaryPriorError("PriorSample: r0=" + std::to_string(r0) + " n0=" +
                             std::to_string(n0) +
                             " leaves the posterior improper; use a pseudo-count");
  }
}

PriorSample PriorSample::updated(std::int64_t defects, std::int64_t trials) const {
  if (trials < 0 || defects < 0 || defects > trials) {
    throw DomainError("PriorSample::updated: need 0 <= defects <= trials");
  }
  return {r0_ + defects, n0_ + trials, pseudo_count_};
}

void BinomialParams::validate() const {
  if (n < 1) throw DomainError("BinomialParams: n must be >= 1, got " + std::to_string(n));
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("BinomialParams: p must lie in (0, 1), got " + std::to_string(p));
  }
}

double binomial_log_pmf(std::int64_t r, const BinomialParams& params) {
  params.validate();
  if (r < 0 || r > params.n) {
    throw DomainError("binomial_log_pmf: r=" + std::to_string(r) + " outside [0, " +
                      std::to_string(params.n) + "]");
  }
  const auto rd = static_cast<double>(r);
  const auto fails = static_cast<double>(params.n - r);
  return numerics::ln_choose(params.n, r) + rd * std::log(params.p) +
         fails * std::log1p(-params.p);
}

std::vector<double> binomial_log_pmf_table(const BinomialParams& params) {
  params.validate();
  std::vector<double> table(static_cast<std::size_t>(params.n) + 1);
  for (std::int64_t r = 0; r <= params.n; ++r) {
    table[static_cast<std::size_t>(r)] = binomial_log_pmf(r, params);
  }
  return table;
}

namespace {

// Binomial table that also accepts the degenerate plug-in values p = 0 and p = 1,
// which the pseudo-count mode can produce for r0 = 0 or r0 = n0.
std::vector<double> plug_in_log_pmf_table(std::int64_t n, double p) {
  if (p > 0.0 && p < 1.0) return binomial_log_pmf_table({n, p});
  std::vector<double> table(static_cast<std::size_t>(n) + 1, kLogZero);
  table[p <= 0.0 ? 0 : static_cast<std::size_t>(n)] = 0.0;
  return table;
}

// -ln B(a, b) = ln Gamma(a + b) - ln Gamma(a) - ln Gamma(b)
double neg_ln_beta(double a, double b) {
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return numerics::ln_gamma_ratio(hi, lo) - numerics::ln_gamma(lo);
}

}  // namespace

double beta_posterior_log_density(double p, const PriorSample& prior) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("beta_posterior_log_density: p must lie in (0, 1), got " +
                      std::to_string(p));
  }
  const double a = prior.alpha();
  const double b = prior.beta();
  return neg_ln_beta(a, b) + (a - 1.0) * std::log(p) + (b - 1.0) * std::log1p(-p);
}

double beta_binomial_log_pmf(std::int64_t r, std::int64_t n, const PriorSample& prior) {
  if (n < 0 || r < 0 || r > n) {
    throw DomainError("beta_binomial_log_pmf: r=" + std::to_string(r) + " outside [0, " +
                      std::to_string(n) + "]");
  }
  const double a = prior.alpha();
  const double b = prior.beta();
  const auto rd = static_cast<double>(r);
  const auto fails = static_cast<double>(n - r);
  return numerics::ln_choose(n, r) + numerics::ln_gamma_ratio(a, rd) +
         numerics::ln_gamma_ratio(b, fails) - numerics::ln_gamma_ratio(a + b, static_cast<double>(n));
}

std::vector<double> beta_binomial_log_pmf_table(std::int64_t n, const PriorSample& prior) {
  if (n < 0) throw DomainError("beta_binomial_log_pmf_table: n must be >= 0");
  std::vector<double> table(static_cast<std::size_t>(n) + 1);
  for (std::int64_t r = 0; r <= n; ++r) {
    table[static_cast<std::size_t>(r)] = beta_binomial_log_pmf(r, n, prior);
  }
  return table;
}

MomentPair binomial_moments(const BinomialParams& params) {
  params.validate();
  const double within = params.p * (1.0 - params.p) / static_cast<double>(params.n);
  return MomentPair::from_split(params.p, within, 0.0);
}

MomentPair beta_binomial_moments(std::int64_t n, const PriorSample& prior) {
  if (n < 1) throw DomainError("beta_binomial_moments: n must be >= 1");
  const double a = prior.alpha();
  const double b = prior.beta();
  const double s = a + b;
  // E[p(1-p)] = ab / (s (s+1)),  V[p] = ab / (s^2 (s+1))
  const double expected_pq = a * b / (s * (s + 1.0));
  const double within = expected_pq / static_cast<double>(n);
  const double between = expected_pq / s;
  return MomentPair::from_split(a / s, within, between);
}

PredictiveDistribution sequential_predict(std::int64_t n, const PriorSample& prior) {
  if (n < 1) throw DomainError("sequential_predict: n must be >= 1");
  // log_paths[r]: probability of r defects among the items predicted so far.
  // Every path reaching r shares the updated prior (r0 + r, n0 + step).
  std::vector<double> log_paths{0.0};
  for (std::int64_t step = 0; step < n; ++step) {
    std::vector<double> next(log_paths.size() + 1, kLogZero);
    for (std::size_t r = 0; r < log_paths.size(); ++r) {
      if (log_paths[r] == kLogZero) continue;
      const double defect = prior.updated(static_cast<std::int64_t>(r), step).posterior_mean();
      next[r + 1] = numerics::log_add(next[r + 1], log_paths[r] + std::log(defect));
      next[r] = numerics::log_add(next[r], log_paths[r] + std::log1p(-defect));
    }
    log_paths = std::move(next);
  }
  std::vector<Datum> outcomes;
  outcomes.reserve(log_paths.size());
  for (std::int64_t r = 0; r <= n; ++r) outcomes.emplace_back(Count{r, n});
  return {std::move(outcomes), std::move(log_paths), PredictiveKind::posterior_predictive};
}

TailComparison compare_tails(std::span<const double> transductive_log_pmf,
                             std::span<const double> abductive_log_pmf, std::int64_t threshold) {
  if (transductive_log_pmf.size() != abductive_log_pmf.size()) {
    throw DomainError("compare_tails: tables cover different sample sizes");
  }
  const auto n = static_cast<std::int64_t>(transductive_log_pmf.size()) - 1;
  if (threshold < 0 || threshold >= n) {
    throw DomainError("compare_tails: need 0 <= threshold < n, got threshold=" +
                      std::to_string(threshold) + " n=" + std::to_string(n));
  }
  TailComparison out;
  out.transductive_tail = numerics::stable_tail_sum(transductive_log_pmf, threshold + 1, n);
  out.abductive_tail = numerics::stable_tail_sum(abductive_log_pmf, threshold + 1, n);
  if (out.abductive_tail > 0.0) {
    out.additional_rejected_pct =
        100.0 * (out.transductive_tail - out.abductive_tail) / out.abductive_tail;
  }
  return out;
}

TailComparison tail_and_overconfidence(std::int64_t n, std::int64_t threshold,
                                       const PriorSample& prior) {
  if (n < 1) throw DomainError("tail_and_overconfidence: n must be >= 1");
  const auto transductive = beta_binomial_log_pmf_table(n, prior);
  const auto abductive = plug_in_log_pmf_table(n, prior.ratio());
  return compare_tails(transductive, abductive, threshold);
}

}  // namespace transduct::binomial
