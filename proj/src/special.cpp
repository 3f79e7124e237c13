#include "gigg/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gigg/errors.hpp"

namespace gigg {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

// Taylor coefficients of 1/Gamma(z) about 0 (Abramowitz & Stegun 6.1.34):
// 1/Gamma(z) = sum_{k>=1} c_k z^k, so 1/Gamma(1+z) = sum_{k>=0} c_{k+1} z^k.
constexpr std::array<double, 26> kRecipGamma = {
    1.0,
    0.5772156649015329,
    -0.6558780715202538,
    -0.0420026350340952,
    0.1665386113822915,
    -0.0421977345555443,
    -0.0096219715278770,
    0.0072189432466630,
    -0.0011651675918591,
    -0.0002152416741149,
    0.0001280502823882,
    -0.0000201348547807,
    -0.0000012504934821,
    0.0000011330272320,
    -0.0000002056338417,
    0.0000000061160950,
    0.0000000050020075,
    -0.0000000011812746,
    0.0000000001043427,
    0.0000000000077823,
    -0.0000000000036968,
    0.0000000000005100,
    -0.0000000000000206,
    -0.0000000000000054,
    0.0000000000000014,
    0.0000000000000001,
};

struct TemmeGammas {
  double gam1;   // (1/G(1-mu) - 1/G(1+mu)) / (2 mu)
  double gam2;   // (1/G(1-mu) + 1/G(1+mu)) / 2
  double gampl;  // 1/G(1+mu)
  double gammi;  // 1/G(1-mu)
};

// Even and odd parts of the series are summed separately so gam1 has no
// cancellation as mu -> 0.
TemmeGammas temme_gammas(double mu) {
  const double mu2 = mu * mu;
  double odd = 0.0;
  double even = 0.0;
  double pw = 1.0;
  for (std::size_t k = 0; k + 1 < kRecipGamma.size(); k += 2) {
    even += kRecipGamma[k] * pw;
    odd += kRecipGamma[k + 1] * pw;
    pw *= mu2;
  }
  TemmeGammas g;
  g.gam1 = -odd;
  g.gam2 = even;
  g.gampl = even + mu * odd;
  g.gammi = even - mu * odd;
  return g;
}

struct SeedPair {
  double log_k;  // log K_mu(x)
  double ratio;  // K_{mu+1}(x) / K_mu(x)
};

// K_mu and K_{mu+1} for |mu| <= 1/2 by Temme's series (small x).
SeedPair temme_series(double mu, double x) {
  const double x2 = 0.5 * x;
  const double pimu = std::numbers::pi * mu;
  const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(x2);
  double e = mu * d;
  const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
  const TemmeGammas g = temme_gammas(mu);
  double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / g.gampl;
  double q = 0.5 / (e * g.gammi);
  double c = 1.0;
  d = x2 * x2;
  double sum1 = p;
  const double mu2 = mu * mu;
  int i = 1;
  for (; i <= kMaxIter; ++i) {
    ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
    c *= d / i;
    p /= (i - mu);
    q /= (i + mu);
    const double del = c * ff;
    sum += del;
    sum1 += c * (p - i * ff);
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  if (i > kMaxIter) throw NumericError("bessel_k: series did not converge");
  return {std::log(sum), sum1 * (2.0 / x) / sum};
}

// K_mu and K_{mu+1} for |mu| <= 1/2 by Steed's continued fraction (x >= 2).
// Works with exp(x) K_mu(x) so large arguments never underflow.
SeedPair steed_cf2(double mu, double x) {
  const double mu2 = mu * mu;
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i > kMaxIter) throw NumericError("bessel_k: continued fraction did not converge");
  h = a1 * h;
  const double log_k = 0.5 * std::log(std::numbers::pi / (2.0 * x)) - x - std::log(s);
  return {log_k, (mu + x + 0.5 - h) / x};
}

}  // namespace

double log_bessel_k(double nu, double x) {
  if (!(x >= 0.0) || !std::isfinite(nu)) {
    throw ParameterDomainError("bessel_k: argument must be non-negative and order finite");
  }
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  nu = std::abs(nu);
  const double nl = std::floor(nu + 0.5);
  const double mu = nu - nl;
  SeedPair seed = x < 2.0 ? temme_series(mu, x) : steed_cf2(mu, x);
  // Upward recurrence K_{v+1} = K_{v-1} + (2v/x) K_v, carried on the ratio
  // r_v = K_{v+1}/K_v and the running log so nothing overflows.
  double log_k = seed.log_k;
  double r = seed.ratio;
  const long steps = static_cast<long>(nl);
  for (long i = 1; i <= steps; ++i) {
    log_k += std::log(r);
    r = 1.0 / r + 2.0 * (mu + static_cast<double>(i)) / x;
  }
  return log_k;
}

double bessel_k(double nu, double x) { return std::exp(log_bessel_k(nu, x)); }

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ParameterDomainError("digamma: argument must be positive and finite, got " +
                               std::to_string(x));
  }
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Asymptotic series with Bernoulli numbers B_2k / (2k).
  const double tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
  return result + std::log(x) - 0.5 * inv - tail;
}

double trigamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw ParameterDomainError("trigamma: argument must be positive and finite");
  }
  double result = 0.0;
  while (x < 10.0) {
    result += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double tail =
      inv * (1.0 +
             inv * (0.5 +
                    inv * (1.0 / 6.0 -
                           inv2 * (1.0 / 30.0 -
                                   inv2 * (1.0 / 42.0 -
                                           inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))))));
  return result + tail;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

}  // namespace gigg
