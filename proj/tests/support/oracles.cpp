#include "oracles.hpp"

#include <cmath>

namespace transduct::oracle {

namespace {
constexpr double kLn2 = 0.693147180559945309417232121458176568;

mpz_class factorial(unsigned long k) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), k);
  return out;
}
}  // namespace

double log_of(const mpz_class& z) {
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * kLn2;
}

double log_of(const mpq_class& q) {
  return log_of(mpz_class(q.get_num())) - log_of(mpz_class(q.get_den()));
}

double ln_factorial(unsigned long k) { return log_of(factorial(k)); }

double ln_rising(unsigned long a, unsigned long k) {
  mpz_class out = 1;
  for (unsigned long i = 0; i < k; ++i) out *= a + i;
  return log_of(out);
}

mpz_class choose(unsigned long n, unsigned long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

mpq_class binomial_pmf(unsigned long r, unsigned long n, unsigned long num, unsigned long den) {
  mpz_class p_num;
  mpz_class q_num;
  mpz_class d;
  mpz_ui_pow_ui(p_num.get_mpz_t(), num, r);
  mpz_ui_pow_ui(q_num.get_mpz_t(), den - num, n - r);
  mpz_ui_pow_ui(d.get_mpz_t(), den, n);
  mpq_class out(choose(n, r) * p_num * q_num, d);
  out.canonicalize();
  return out;
}

mpq_class beta_binomial_pmf(unsigned long r, unsigned long n, unsigned long r0, unsigned long n0) {
  const mpz_class num = choose(n, r) * factorial(r0 + r - 1) * factorial(n0 - r0 + n - r - 1) *
                        factorial(n0 - 1);
  const mpz_class den = factorial(r0 - 1) * factorial(n0 - r0 - 1) * factorial(n0 + n - 1);
  mpq_class out(num, den);
  out.canonicalize();
  return out;
}

}  // namespace transduct::oracle

#include <mpfr.h>

namespace transduct::oracle {

double ln_gamma_mpfr(double x) {
  mpfr_t v;
  mpfr_init2(v, 256);
  mpfr_set_d(v, x, MPFR_RNDN);
  int sign = 0;
  mpfr_lgamma(v, &sign, v, MPFR_RNDN);
  const double out = mpfr_get_d(v, MPFR_RNDN);
  mpfr_clear(v);
  return out;
}

}  // namespace transduct::oracle
