#include "gigg/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gigg/errors.hpp"
#include "gigg/special.hpp"

namespace gigg {
namespace {

constexpr double kTiny = std::numeric_limits<double>::min();
constexpr double kHuge = std::numeric_limits<double>::max();

// Log-density of the standardized GIG(lam, omega, omega), up to a constant.
double std_log_kernel(double x, double lam, double omega) {
  return (lam - 1.0) * std::log(x) - 0.5 * omega * (x + 1.0 / x);
}

double gig_mode(double lam, double omega) {
  if (lam >= 1.0) {
    return (std::sqrt((lam - 1.0) * (lam - 1.0) + omega * omega) + (lam - 1.0)) / omega;
  }
  return omega / (std::sqrt((1.0 - lam) * (1.0 - lam) + omega * omega) + (1.0 - lam));
}

// Ratio-of-uniforms with mode shift (Dagpunar; Hoermann & Leydold 2014).
double rou_shift(Rng& rng, double lam, double omega) {
  const double t = 0.5 * (lam - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lam, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);

  // Extremes of (x - xm) sqrt(f(x)) are roots of a cubic; solve by Cardano.
  const double a = -(2.0 * (lam + 1.0) / omega + xm);
  const double b = 2.0 * (lam - 1.0) * xm / omega - 1.0;
  const double c = xm;
  const double p = b - a * a / 3.0;
  const double q = (2.0 * a * a * a) / 27.0 - (a * b) / 3.0 + c;
  const double arg = std::clamp(-q / (2.0 * std::sqrt(-(p * p * p) / 27.0)), -1.0, 1.0);
  const double fi = std::acos(arg);
  const double fak = 2.0 * std::sqrt(-p / 3.0);
  const double y1 = fak * std::cos(fi / 3.0) - a / 3.0;
  const double y2 = fak * std::cos(fi / 3.0 + 4.0 / 3.0 * std::numbers::pi) - a / 3.0;
  const double uplus = (y1 - xm) * std::exp(t * std::log(y1) - s * (y1 + 1.0 / y1) - nc);
  const double uminus = (y2 - xm) * std::exp(t * std::log(y2) - s * (y2 + 1.0 / y2) - nc);

  for (;;) {
    const double u = uminus + rng.uniform() * (uplus - uminus);
    const double v = rng.uniform();
    const double x = u / v + xm;
    if (x <= 0.0) continue;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

// Ratio-of-uniforms without mode shift.
double rou_noshift(Rng& rng, double lam, double omega) {
  const double t = 0.5 * (lam - 1.0);
  const double s = 0.25 * omega;
  const double xm = gig_mode(lam, omega);
  const double nc = t * std::log(xm) - s * (xm + 1.0 / xm);
  const double ym = ((lam + 1.0) + std::sqrt((lam + 1.0) * (lam + 1.0) + omega * omega)) / omega;
  const double um = std::exp(0.5 * (lam + 1.0) * std::log(ym) - s * (ym + 1.0 / ym) - nc);
  for (;;) {
    const double u = um * rng.uniform();
    const double v = rng.uniform();
    const double x = u / v;
    if (std::log(v) <= t * std::log(x) - s * (x + 1.0 / x) - nc) return x;
  }
}

// Rejection from a three-piece hat for the non-T-concave region
// 0 <= lam < 1, small omega (Hoermann & Leydold 2014).
double non_t_concave(Rng& rng, double lam, double omega) {
  const double xm = gig_mode(lam, omega);
  const double x0 = omega / (1.0 - lam);
  const double two_over_omega = 2.0 / omega;
  const double k0 = std::exp(std::log(xm) * (lam - 1.0) - 0.5 * omega * (xm + 1.0 / xm));
  const double a0 = k0 * x0;
  double k1 = 0.0;
  double a1 = 0.0;
  double k2 = 0.0;
  double a2 = 0.0;
  if (x0 >= two_over_omega) {
    k2 = std::pow(x0, lam - 1.0);
    a2 = k2 * 2.0 * std::exp(-omega * x0 / 2.0) / omega;
  } else {
    k1 = std::exp(-omega);
    a1 = lam == 0.0
             ? k1 * (std::log(2.0) - 2.0 * std::log(omega))
             : k1 / lam * (std::pow(two_over_omega, lam) - std::pow(x0, lam));
    k2 = std::pow(two_over_omega, lam - 1.0);
    a2 = k2 * 2.0 * std::exp(-1.0) / omega;
  }
  const double total = a0 + a1 + a2;
  const double tail_start = std::max(x0, two_over_omega);
  for (;;) {
    double v = total * rng.uniform();
    double x, hx;
    if (v <= a0) {
      x = x0 * v / a0;
      hx = k0;
    } else if ((v -= a0) <= a1) {
      if (lam == 0.0) {
        x = omega * std::exp(std::exp(omega) * v);
        hx = k1 / x;
      } else {
        x = std::pow(std::pow(x0, lam) + lam / k1 * v, 1.0 / lam);
        hx = k1 * std::pow(x, lam - 1.0);
      }
    } else {
      v -= a1;
      x = -two_over_omega * std::log(std::exp(-omega / 2.0 * tail_start) - omega / (2.0 * k2) * v);
      hx = k2 * std::exp(-omega / 2.0 * x);
    }
    const double u = rng.uniform() * hx;
    if (std::log(u) <= std_log_kernel(x, lam, omega)) return x;
  }
}

// Draw from GIG(lam, omega, omega) for lam >= 0.
double standardized_gig(Rng& rng, double lam, double omega) {
  if (lam > 2.0 || omega > 3.0) return rou_shift(rng, lam, omega);
  if (lam >= 1.0 - 2.25 * omega * omega || omega > 0.2) return rou_noshift(rng, lam, omega);
  return non_t_concave(rng, lam, omega);
}

// True when GIG(lam, psi, chi) is within ~1e-15 total variation of its
// gamma (lam > 0) or inverse-gamma (lam < 0) limit.
bool limit_is_exact(const GigParams& p) {
  if (p.lam == 0.0) return false;
  if (p.psi == 0.0 || p.chi == 0.0) return true;
  const double l = std::abs(p.lam);
  return l * std::log(p.psi * p.chi * 5e14) - std::lgamma(l + 1.0) < -34.5;
}

}  // namespace

bool GigParams::proper() const {
  if (!std::isfinite(lam) || !std::isfinite(psi) || !std::isfinite(chi)) return false;
  if (psi < 0.0 || chi < 0.0) return false;
  if (lam >= 0.0 && psi <= 0.0) return false;
  if (lam <= 0.0 && chi <= 0.0) return false;
  return true;
}

void GigParams::validate() const {
  if (!proper()) {
    std::ostringstream msg;
    msg << "improper GIG parameters (lambda=" << lam << ", psi=" << psi << ", chi=" << chi << ")";
    throw ParameterDomainError(msg.str());
  }
}

GigParams GigParams::floored(double floor) const {
  return {lam, std::max(psi, floor), std::max(chi, floor)};
}

double gig_logpdf(double x, const GigParams& p) {
  p.validate();
  if (!(x > 0.0)) throw ParameterDomainError("gig_pdf: x must be positive");
  if (p.chi == 0.0) return std::log(gamma_pdf(x, p.lam, 0.5 * p.psi));
  if (p.psi == 0.0) return std::log(inverse_gamma_pdf(x, -p.lam, 0.5 * p.chi));
  const double omega = std::sqrt(p.psi * p.chi);
  // (psi/chi)^(lam/2) split as logs so neither rate needs to be moderate.
  return 0.5 * p.lam * (std::log(p.psi) - std::log(p.chi)) - std::log(2.0) -
         log_bessel_k(p.lam, omega) + (p.lam - 1.0) * std::log(x) -
         0.5 * (p.chi / x + p.psi * x);
}

double gig_pdf(double x, const GigParams& p) { return std::exp(gig_logpdf(x, p)); }

double gig_sample(Rng& rng, const GigParams& p) {
  p.validate();
  if (limit_is_exact(p)) {
    if (p.lam > 0.0) return sample_gamma(rng, p.lam, 0.5 * p.psi);
    return sample_inverse_gamma(rng, -p.lam, 0.5 * p.chi);
  }
  const double omega = std::sqrt(p.psi) * std::sqrt(p.chi);
  const double alpha = std::sqrt(p.chi) / std::sqrt(p.psi);
  const double y = standardized_gig(rng, std::abs(p.lam), omega);
  // If Y ~ GIG(|lam|, omega, omega) then 1/Y ~ GIG(-|lam|, omega, omega).
  const double x = p.lam < 0.0 ? alpha / y : alpha * y;
  return std::clamp(x, kTiny, kHuge);
}

double beta_prime_logpdf(double x, double a, double b) {
  if (!(x > 0.0) || !(a > 0.0) || !(b > 0.0)) {
    throw ParameterDomainError("beta_prime_pdf: x, a and b must be positive");
  }
  return -log_beta(a, b) + (a - 1.0) * std::log(x) - (a + b) * std::log1p(x);
}

double beta_prime_pdf(double x, double a, double b) { return std::exp(beta_prime_logpdf(x, a, b)); }

double gamma_pdf(double x, double shape, double rate) {
  if (!(x > 0.0) || !(shape > 0.0) || !(rate > 0.0)) {
    throw ParameterDomainError("gamma_pdf: arguments must be positive");
  }
  return std::exp(shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) -
                  rate * x);
}

double inverse_gamma_pdf(double x, double shape, double scale) {
  if (!(x > 0.0) || !(shape > 0.0) || !(scale > 0.0)) {
    throw ParameterDomainError("inverse_gamma_pdf: arguments must be positive");
  }
  return std::exp(shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) -
                  scale / x);
}

double half_cauchy_pdf(double x, double scale) {
  if (!(x > 0.0) || !(scale > 0.0)) {
    throw ParameterDomainError("half_cauchy_pdf: arguments must be positive");
  }
  const double z = x / scale;
  return 2.0 / (std::numbers::pi * scale * (1.0 + z * z));
}

double basic_sample(Rng& rng, BasicKind kind, double p1, double p2) {
  switch (kind) {
    case BasicKind::Gamma:
    case BasicKind::InverseGamma: {
      if (!(p1 > 0.0) || !(p2 > 0.0) || !std::isfinite(p1) || !std::isfinite(p2)) {
        throw ParameterDomainError("basic_sample: shape and rate/scale must be positive");
      }
      const double log_g = rng.log_gamma_unit(p1);
      const double log_x = kind == BasicKind::Gamma ? log_g - std::log(p2) : std::log(p2) - log_g;
      return std::clamp(std::exp(log_x), kTiny, kHuge);
    }
    case BasicKind::HalfCauchy: {
      if (!(p2 > 0.0) || !std::isfinite(p2)) {
        throw ParameterDomainError("basic_sample: half-Cauchy scale must be positive");
      }
      const double x = p2 * std::tan(0.5 * std::numbers::pi * rng.uniform());
      return std::clamp(x, kTiny, kHuge);
    }
  }
  throw ParameterDomainError("basic_sample: unknown distribution kind");
}

}  // namespace gigg
