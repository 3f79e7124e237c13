#include "gigg/mmle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gigg/errors.hpp"
#include "gigg/special.hpp"

namespace gigg {

void MmleSettings::validate() const {
  if (!(tol > 0.0)) throw ParameterDomainError("mmle: tol must be positive");
  if (max_iters < 1) throw ParameterDomainError("mmle: max_iters must be at least 1");
  if (mc_draws < 1) throw ParameterDomainError("mmle: mc_draws must be at least 1");
  if (period < 1) throw ParameterDomainError("mmle: period must be at least 1");
}

double digamma_inverse(double y) {
  if (!std::isfinite(y)) throw ParameterDomainError("digamma_inverse: argument must be finite");
  constexpr double kEuler = 0.57721566490153286061;
  double x = y >= -2.22 ? std::exp(y) + 0.5 : -1.0 / (y + kEuler);
  for (int iter = 0; iter < 100; ++iter) {
    const double residual = digamma(x) - y;
    if (std::abs(residual) < 1e-12 * std::max(1.0, std::abs(y))) return x;
    double next = x - residual / trigamma(x);
    if (!(next > 0.0)) next = 0.5 * x;
    if (std::abs(next - x) <= 1e-15 * x) return next;
    x = next;
  }
  std::ostringstream msg;
  msg << "digamma_inverse(" << y << ") did not converge";
  throw NumericError(msg.str(), std::abs(digamma(x) - y));
}

MmleStep mmle_iterate(const ExpectationProvider& provider, const Hyperparameters& hyper,
                      std::span<const int> group_sizes, const MmleSettings& settings) {
  settings.validate();
  const int groups = static_cast<int>(group_sizes.size());
  hyper.validate(groups);
  const LogScaleExpectations e = provider(hyper);
  MmleStep step{hyper, false, 0.0};
  int offset = 0;
  for (int g = 0; g < groups; ++g) {
    const int pg = group_sizes[g];
    try {
      if (settings.estimate_a) step.hyper.a[g] = digamma_inverse(e.log_gamma2[g]);
      const double mean_log_lambda = e.log_lambda2.segment(offset, pg).mean();
      step.hyper.b[g] = digamma_inverse(-mean_log_lambda);
    } catch (const NumericError& err) {
      throw NumericError("mmle: group " + std::to_string(g) + ": " + err.what(), err.achieved());
    } catch (const ParameterDomainError& err) {
      throw ParameterDomainError("mmle: group " + std::to_string(g) + ": " + err.what());
    }
    offset += pg;
  }
  step.change = (step.hyper.a - hyper.a).squaredNorm() + (step.hyper.b - hyper.b).squaredNorm();
  step.converged = step.change < settings.tol;
  return step;
}

double prior_kappa_correlation(int group_size, double a, double b, double tau2, double sigma2,
                               int replicates, Rng& rng) {
  if (group_size < 2) {
    throw ParameterDomainError("kappa correlation needs a group of at least two coefficients");
  }
  if (replicates < 2) throw ParameterDomainError("kappa correlation needs at least two replicates");
  const double log_r = std::log(tau2 / sigma2);
  double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
  for (int i = 0; i < replicates; ++i) {
    const double log_g = rng.log_gamma_unit(a);
    // lambda2 ~ IG(b, 1) is the reciprocal of a unit gamma.
    const double log_l1 = -rng.log_gamma_unit(b);
    const double log_l2 = -rng.log_gamma_unit(b);
    for (int j = 2; j < group_size; ++j) rng.log_gamma_unit(b);
    // kappa = 1 / (1 + exp(log ratio)), computed without overflow.
    auto kappa = [](double t) { return t > 0 ? std::exp(-t) / (1.0 + std::exp(-t)) : 1.0 / (1.0 + std::exp(t)); };
    const double k1 = kappa(log_r + log_g + log_l1);
    const double k2 = kappa(log_r + log_g + log_l2);
    s1 += k1;
    s2 += k2;
    s11 += k1 * k1;
    s22 += k2 * k2;
    s12 += k1 * k2;
  }
  const double n = replicates;
  const double cov = s12 / n - (s1 / n) * (s2 / n);
  const double v1 = s11 / n - (s1 / n) * (s1 / n);
  const double v2 = s22 / n - (s2 / n) * (s2 / n);
  if (!(v1 > 0.0) || !(v2 > 0.0)) return 0.0;
  return cov / std::sqrt(v1 * v2);
}

double calibrate_b_from_target_correlation(int group_size, double a, double tau2, double sigma2,
                                           double target_rho, Rng& rng) {
  if (group_size < 2) {
    throw ParameterDomainError("calibrate_b: within-group correlation needs at least two coefficients");
  }
  if (!(target_rho >= 0.0 && target_rho < 1.0)) {
    throw ParameterDomainError("calibrate_b: target correlation must lie in [0, 1)");
  }
  constexpr double kLo = 1e-3;
  constexpr double kHi = 64.0;
  constexpr double kTol = 0.02;
  constexpr int kReplicates = 100000;
  // Every candidate b reuses one stream so the search sees a smooth curve.
  const std::uint64_t seed = rng.next_u64();
  auto corr = [&](double b) {
    Rng local(seed);
    return prior_kappa_correlation(group_size, a, b, tau2, sigma2, kReplicates, local);
  };
  double lo = kLo, hi = kHi;
  const double c_lo = corr(lo);
  if (std::abs(c_lo - target_rho) <= kTol) return lo;
  const double c_hi = corr(hi);
  if (std::abs(c_hi - target_rho) <= kTol) return hi;
  if (target_rho < c_lo || target_rho > c_hi) {
    std::ostringstream msg;
    msg << "calibrate_b: target correlation " << target_rho << " outside achievable range ["
        << c_lo << ", " << c_hi << "]";
    throw CalibrationError(msg.str());
  }
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = std::sqrt(lo * hi);
    const double c = corr(mid);
    if (std::abs(c - target_rho) <= kTol) return mid;
    (c < target_rho ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace gigg
