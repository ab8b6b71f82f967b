#pragma once

// Binomial deduction and beta-binomial transduction for a defect-rate process.
//
// The prior evidence is a sample of n0 items with r0 defects. Under the
// p^-1 (1-p)^-1 reference prior this yields a Beta(r0, n0 - r0) posterior for
// the defect proportion, and the predictive count in a future sample of n is
// beta-binomial.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "transduct/predictive.hpp"

namespace transduct::binomial {

// Previous evidence: r0 defects out of n0.
//
// Requires 0 < r0 < n0; the boundary cases throw BoundaryPriorError because
// the posterior is improper there. A nonzero pseudo_count adds that many
// virtual successes and failures, which admits 0 <= r0 <= n0.
class PriorSample {
 public:
  PriorSample(std::int64_t r0, std::int64_t n0, double pseudo_count = 0.0);

  [[nodiscard]] std::int64_t r0() const noexcept { return r0_; }
  [[nodiscard]] std::int64_t n0() const noexcept { return n0_; }
  [[nodiscard]] double pseudo_count() const noexcept { return pseudo_count_; }

  // Posterior Beta shape parameters.
  [[nodiscard]] double alpha() const noexcept { return static_cast<double>(r0_) + pseudo_count_; }
  [[nodiscard]] double beta() const noexcept {
    return static_cast<double>(n0_ - r0_) + pseudo_count_;
  }
  // Observed frequency r0 / n0 (the abductive plug-in value).
  [[nodiscard]] double ratio() const noexcept {
    return static_cast<double>(r0_) / static_cast<double>(n0_);
  }
  // Posterior mean of p; equals ratio() when no pseudo-counts are in use.
  [[nodiscard]] double posterior_mean() const noexcept { return alpha() / (alpha() + beta()); }

  // Prior after also observing `defects` out of `trials` more items.
  [[nodiscard]] PriorSample updated(std::int64_t defects, std::int64_t trials) const;

  friend bool operator==(const PriorSample&, const PriorSample&) = default;

 private:
  std::int64_t r0_;
  std::int64_t n0_;
  double pseudo_count_;
};

struct BinomialParams {
  std::int64_t n = 1;
  double p = 0.5;

  // Throws DomainError unless n >= 1 and 0 < p < 1.
  void validate() const;
};

// ln[C(n,r) p^r (1-p)^(n-r)].
[[nodiscard]] double binomial_log_pmf(std::int64_t r, const BinomialParams& params);

// ln pmf for r = 0..n.
[[nodiscard]] std::vector<double> binomial_log_pmf_table(const BinomialParams& params);

// Log density of Beta(alpha, beta) at p in (0, 1).
[[nodiscard]] double beta_posterior_log_density(double p, const PriorSample& prior);

// Beta-binomial ln pmf of r defects in n future items, built from ln Gamma ratios.
[[nodiscard]] double beta_binomial_log_pmf(std::int64_t r, std::int64_t n,
                                           const PriorSample& prior);

// ln pmf for r = 0..n.
[[nodiscard]] std::vector<double> beta_binomial_log_pmf_table(std::int64_t n,
                                                              const PriorSample& prior);

// Moments of the future proportion r/n with p known.
[[nodiscard]] MomentPair binomial_moments(const BinomialParams& params);

// Moments of the future proportion r/n under the beta-binomial predictive.
// within = E[p(1-p)/n | posterior], between = V[p | posterior].
[[nodiscard]] MomentPair beta_binomial_moments(std::int64_t n, const PriorSample& prior);

// n-step predictive built by chaining one-step predictions, updating the prior
// sample after each simulated item. Outcomes are Count{r, n} for r = 0..n.
[[nodiscard]] PredictiveDistribution sequential_predict(std::int64_t n, const PriorSample& prior);

struct TailComparison {
  // P(r > threshold) under the beta-binomial predictive.
  double transductive_tail = 0.0;
  // P(r > threshold) under the binomial with p = r0 / n0.
  double abductive_tail = 0.0;
  // 100 (transductive - abductive) / abductive; empty when abductive_tail == 0.
  std::optional<double> additional_rejected_pct;
};

[[nodiscard]] TailComparison compare_tails(std::span<const double> transductive_log_pmf,
                                           std::span<const double> abductive_log_pmf,
                                           std::int64_t threshold);

[[nodiscard]] TailComparison tail_and_overconfidence(std::int64_t n, std::int64_t threshold,
                                                     const PriorSample& prior);

}  // namespace transduct::binomial
