#pragma once

namespace gigg {

// log K_nu(x), the modified Bessel function of the third kind, for x > 0 and
// any real order. Evaluated without forming K_nu itself, so it stays finite
// where K_nu over- or underflows (large order with small argument, or large
// argument).
double log_bessel_k(double nu, double x);

// K_nu(x); may overflow to +inf or underflow to 0 where log_bessel_k does not.
double bessel_k(double nu, double x);

double digamma(double x);
double trigamma(double x);

// log B(a, b)
double log_beta(double a, double b);

}  // namespace gigg
