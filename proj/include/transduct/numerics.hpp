#pragma once

// Log-space special functions and accumulation.
//
// Every probability inside the library is carried as a natural-log weight;
// -infinity is the one and only encoding of probability zero.

#include <cstdint>
#include <functional>
#include <limits>
#include <span>

namespace transduct::numerics {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// Neumaier-compensated running sum. Deterministic for a fixed insertion order.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// ln Gamma(x) for x > 0. Relative error below 1e-12 on (0, 1e7]; exactly 0 at x = 1 and x = 2.
// Throws DomainError for x <= 0 or NaN.
[[nodiscard]] double ln_gamma(double x);

// ln Gamma(a + k) - ln Gamma(a) (log rising factorial) for a > 0, k >= 0.
//
// Computed without forming the two large ln Gamma values separately, so the
// absolute error scales with the result rather than with ln Gamma(a). This is
// what keeps beta-binomial ratios accurate at prior sizes of 1e5 and above.
[[nodiscard]] double ln_gamma_ratio(double a, double k);

// ln C(n, k). Exactly symmetric in k <-> n - k.
[[nodiscard]] double ln_choose(std::int64_t n, std::int64_t k);

// ln(exp(a) + exp(b)).
[[nodiscard]] double log_add(double a, double b);

// ln sum exp(terms[i]). Empty input or NaN/+inf terms throw DomainError.
// All -inf terms give -inf.
[[nodiscard]] double log_sum_exp(std::span<const double> terms);

// sum_{r=from}^{to} exp(log_pmf(r)) accumulated in ascending r with compensation.
// A result within 1e-12 outside [0, 1] is clamped onto the bound; anything
// further out is returned as-is so the caller sees the defect.
// Throws DomainError when from > to.
[[nodiscard]] double stable_tail_sum(const std::function<double(std::int64_t)>& log_pmf,
                                     std::int64_t from, std::int64_t to);

// Same accumulation over a precomputed table, where log_pmf[i] is the weight of outcome i.
[[nodiscard]] double stable_tail_sum(std::span<const double> log_pmf, std::int64_t from,
                                     std::int64_t to);

}  // namespace transduct::numerics
