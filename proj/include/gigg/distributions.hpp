#pragma once

#include "gigg/random.hpp"

namespace gigg {

// Generalized inverse Gaussian GIG(lam, psi, chi) with density
//   (psi/chi)^(lam/2) / (2 K_lam(sqrt(psi chi))) x^(lam-1) exp(-(chi/x + psi x)/2).
// Proper iff both rates are non-negative, at least one is positive, psi > 0
// when lam >= 0 and chi > 0 when lam <= 0. A zero rate denotes the gamma
// (chi = 0) or inverse-gamma (psi = 0) limit.
struct GigParams {
  double lam = 0.0;
  double psi = 1.0;
  double chi = 1.0;

  bool proper() const;
  // Throws ParameterDomainError unless proper().
  void validate() const;
  // Both rates raised to at least `floor`. Used by callers whose rates are
  // computed from quantities that can underflow.
  GigParams floored(double floor = 1e-300) const;
};

double gig_logpdf(double x, const GigParams& p);
double gig_pdf(double x, const GigParams& p);
double gig_sample(Rng& rng, const GigParams& p);

// Beta prime density Gamma(a+b)/(Gamma(a)Gamma(b)) x^(a-1) (1+x)^(-a-b).
double beta_prime_logpdf(double x, double a, double b);
double beta_prime_pdf(double x, double a, double b);

// Gamma with shape/rate, inverse gamma with shape/scale, half-Cauchy with scale.
double gamma_pdf(double x, double shape, double rate);
double inverse_gamma_pdf(double x, double shape, double scale);
double half_cauchy_pdf(double x, double scale);

enum class BasicKind { Gamma, InverseGamma, HalfCauchy };

// Draw from one of the basic families. p1 is the shape (ignored for the
// half-Cauchy), p2 the rate (gamma), scale (inverse gamma) or scale
// (half-Cauchy). Draws that underflow are returned as the smallest normal
// double so the result is always positive.
double basic_sample(Rng& rng, BasicKind kind, double p1, double p2);

inline double sample_gamma(Rng& rng, double shape, double rate) {
  return basic_sample(rng, BasicKind::Gamma, shape, rate);
}
inline double sample_inverse_gamma(Rng& rng, double shape, double scale) {
  return basic_sample(rng, BasicKind::InverseGamma, shape, scale);
}

}  // namespace gigg
