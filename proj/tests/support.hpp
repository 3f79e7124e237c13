#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace testing {

struct MeanSe {
  double mean;
  double se;
};

inline MeanSe mean_se(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return {m, std::sqrt(ss / (n - 1.0) / n)};
}

// Kolmogorov-Smirnov distance between the sample and a continuous
// distribution given by its density on (lo, inf). The CDF is accumulated
// between consecutive order statistics with a 10-point Gauss rule.
inline double ks_from_density(std::vector<double> x, const std::function<double(double)>& pdf,
                              double lo = 0.0) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  using boost::math::quadrature::gauss_kronrod;
  double cdf = gauss_kronrod<double, 15>::integrate(pdf, lo, x.front(), 20, 1e-12);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0 && x[i] > x[i - 1]) {
      cdf += boost::math::quadrature::gauss<double, 10>::integrate(pdf, x[i - 1], x[i]);
    }
    d = std::max({d, std::abs(cdf - i / n), std::abs((i + 1) / n - cdf)});
  }
  return d;
}

// Integral of a density over (0, inf) on the log axis.
inline double total_mass(const std::function<double(double)>& pdf) {
  auto g = [&](double t) {
    const double x = std::exp(t);
    return pdf(x) * x;
  };
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(g, -700.0, 700.0, 25, 1e-12);
}

inline double ks_from_cdf(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
  }
  return d;
}

// GIG density written directly against Boost's Bessel K.
inline double oracle_gig_pdf(double x, double lam, double psi, double chi) {
  const double omega = std::sqrt(psi * chi);
  return std::pow(psi / chi, lam / 2.0) / (2.0 * boost::math::cyl_bessel_k(lam, omega)) *
         std::pow(x, lam - 1.0) * std::exp(-0.5 * (chi / x + psi * x));
}

inline double oracle_gig_mean(double lam, double psi, double chi) {
  const double omega = std::sqrt(psi * chi);
  return std::sqrt(chi / psi) * boost::math::cyl_bessel_k(lam + 1.0, omega) /
         boost::math::cyl_bessel_k(lam, omega);
}

inline double oracle_gig_second_moment(double lam, double psi, double chi) {
  const double omega = std::sqrt(psi * chi);
  return (chi / psi) * boost::math::cyl_bessel_k(lam + 2.0, omega) /
         boost::math::cyl_bessel_k(lam, omega);
}

}  // namespace testing
