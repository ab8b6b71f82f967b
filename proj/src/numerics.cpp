#include "transduct/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "transduct/errors.hpp"

namespace transduct::numerics {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606065121;
constexpr double kHalfLogTwoPi = 0.91893853320467274178032973640562;

// zeta(k) - 1 for k = 2..41.
constexpr std::array<double, 40> kZetaMinusOne = {
    0.64493406684822643647,     0.2020569031595942854,      0.082323233711138191516,
    0.036927755143369926331,    0.017343061984449139715,    0.0083492773819228268398,
    0.0040773561979443393787,   0.0020083928260822144179,   0.00099457512781808533715,
    0.0004941886041194645587,   0.00024608655330804829864,  0.00012271334757848914675,
    0.000061248135058704829259, 0.000030588236307020493552, 0.000015282259408651871733,
    7.6371976378997622736e-6,   3.8172932649998398565e-6,   1.9082127165539389257e-6,
    9.5396203387279611315e-7,   4.7693298678780646312e-7,   2.3845050272773299e-7,
    1.1921992596531107307e-7,   5.9608189051259479612e-8,   2.9803503514652280186e-8,
    1.4901554828365041235e-8,   7.450711789835429492e-9,    3.7253340247884570548e-9,
    1.8626597235130490064e-9,   9.3132743241966818287e-10,  4.656629065033784073e-10,
    2.328311833676505492e-10,   1.1641550172700519776e-10,  5.8207720879027008892e-11,
    2.9103850444970996869e-11,  1.4551921891041984236e-11,  7.2759598350574810145e-12,
    3.6379795473786511902e-12,  1.8189896503070659476e-12,  9.0949478402638892825e-13,
    4.5474737830421540268e-13,
};

// ln Gamma(2 + z) for |z| <= 1/2:
//   z (1 - gamma) + sum_{k>=2} (-1)^k (zeta(k) - 1) z^k / k
// The ln(1 + z) pieces of the classic ln Gamma(1 + z) series cancel exactly
// against the recurrence step, so there is no cancellation near z = 0.
double ln_gamma_two_plus(double z) {
  double acc = 0.0;
  for (std::size_t i = kZetaMinusOne.size(); i-- > 0;) {
    const double k = static_cast<double>(i + 2);
    const double coeff = ((i % 2 == 0) ? 1.0 : -1.0) * kZetaMinusOne[i] / k;
    acc = acc * z + coeff;
  }
  return z * ((1.0 - kEulerGamma) + z * acc);
}

// Stirling correction ln Gamma(y) - [(y - 1/2) ln y - y + ln sqrt(2 pi)], y >= 10.
double stirling_correction(double y) {
  const double z = 1.0 / y;
  const double z2 = z * z;
  return z * (1.0 / 12 +
              z2 * (-1.0 / 360 +
                    z2 * (1.0 / 1260 +
                          z2 * (-1.0 / 1680 +
                                z2 * (1.0 / 1188 +
                                      z2 * (-691.0 / 360360 +
                                            z2 * (1.0 / 156 + z2 * (-3617.0 / 122400))))))));
}

constexpr double kStirlingThreshold = 10.0;

}  // namespace

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double ln_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("ln_gamma: argument must be positive, got " + std::to_string(x));
  }
  if (std::isinf(x)) return x;
  if (x < 0.5) {
    // x + 1 lands in [1, 1.5)
    return ln_gamma(x + 1.0) - std::log(x);
  }
  if (x < 1.5) {
    const double z = x - 1.0;
    return ln_gamma_two_plus(z) - std::log1p(z);
  }
  if (x <= 2.5) {
    return ln_gamma_two_plus(x - 2.0);
  }
  if (x < kStirlingThreshold) {
    // Walk down to (1.5, 2.5]; the product of at most 8 factors below 10 is exact enough.
    double y = x;
    double product = 1.0;
    while (y > 2.5) {
      y -= 1.0;
      product *= y;
    }
    return ln_gamma_two_plus(y - 2.0) + std::log(product);
  }
  return (x - 0.5) * std::log(x) - x + kHalfLogTwoPi + stirling_correction(x);
}

double ln_gamma_ratio(double a, double k) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("ln_gamma_ratio: base must be positive and finite");
  }
  if (!(k >= 0.0) || !std::isfinite(k)) {
    throw DomainError("ln_gamma_ratio: increment must be nonnegative and finite");
  }
  if (k == 0.0) return 0.0;
  if (a < kStirlingThreshold) {
    // ln Gamma(a) is O(10) here, so the plain difference loses nothing.
    return ln_gamma(a + k) - ln_gamma(a);
  }
  // (a+k-1/2) ln(a+k) - (a-1/2) ln a - k, rearranged so the O(a ln a) parts cancel analytically.
  const double b = a + k;
  return (a - 0.5) * std::log1p(k / a) + k * std::log(b) - k +
         (stirling_correction(b) - stirling_correction(a));
}

double ln_choose(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("ln_choose: need 0 <= k <= n, got n=" + std::to_string(n) +
                      " k=" + std::to_string(k));
  }
  const std::int64_t kk = std::min(k, n - k);
  if (kk == 0) return 0.0;
  const auto kd = static_cast<double>(kk);
  return ln_gamma_ratio(static_cast<double>(n - kk) + 1.0, kd) - ln_gamma(kd + 1.0);
}

double log_add(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) throw DomainError("log_add: NaN log weight");
  if (a == kLogZero) return b;
  if (b == kLogZero) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) throw DomainError("log_sum_exp: empty sequence");
  double hi = kLogZero;
  for (double t : terms) {
    if (std::isnan(t) || t == std::numeric_limits<double>::infinity()) {
      throw DomainError("log_sum_exp: log weight must be finite or -inf");
    }
    hi = std::max(hi, t);
  }
  if (hi == kLogZero) return kLogZero;
  CompensatedSum sum;
  for (double t : terms) sum.add(std::exp(t - hi));
  return hi + std::log(sum.value());
}

namespace {

double clamp_unit(double s) {
  constexpr double kSlack = 1e-12;
  if (s < 0.0 && s > -kSlack) return 0.0;
  if (s > 1.0 && s < 1.0 + kSlack) return 1.0;
  return s;
}

}  // namespace

double stable_tail_sum(const std::function<double(std::int64_t)>& log_pmf, std::int64_t from,
                       std::int64_t to) {
  if (from > to) {
    throw DomainError("stable_tail_sum: empty range [" + std::to_string(from) + ", " +
                      std::to_string(to) + "]");
  }
  CompensatedSum sum;
  for (std::int64_t r = from; r <= to; ++r) sum.add(std::exp(log_pmf(r)));
  return clamp_unit(sum.value());
}

double stable_tail_sum(std::span<const double> log_pmf, std::int64_t from, std::int64_t to) {
  if (from < 0 || to >= static_cast<std::int64_t>(log_pmf.size())) {
    throw DomainError("stable_tail_sum: range outside the table");
  }
  return stable_tail_sum(
      [&](std::int64_t r) { return log_pmf[static_cast<std::size_t>(r)]; }, from, to);
}

}  // namespace transduct::numerics
