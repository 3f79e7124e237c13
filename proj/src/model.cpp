#include "gigg/model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "gigg/distributions.hpp"
#include "gigg/errors.hpp"
#include "gigg/quadrature.hpp"
#include "gigg/special.hpp"

namespace gigg {

GroupedDesign::GroupedDesign(Vector y, Matrix adjust, Matrix shrink, std::vector<int> group_sizes)
    : y_(std::move(y)),
      adjust_(std::move(adjust)),
      shrink_(std::move(shrink)),
      group_sizes_(std::move(group_sizes)) {
  const auto n = y_.size();
  if (n < 1) throw InputError("design: response must have at least one observation");
  if (!y_.allFinite() || !shrink_.allFinite() || !adjust_.allFinite()) {
    throw InputError("design: non-finite value in data");
  }
  if (shrink_.rows() != n) throw SchemaError("design: X must have one row per observation");
  if (adjust_.cols() > 0 && adjust_.rows() != n) {
    throw SchemaError("design: C must have one row per observation");
  }
  if (adjust_.cols() == 0) adjust_.resize(n, 0);
  if (group_sizes_.empty()) throw SchemaError("design: at least one group is required");
  int total = 0;
  for (std::size_t g = 0; g < group_sizes_.size(); ++g) {
    if (group_sizes_[g] < 1) {
      throw SchemaError("design: group " + std::to_string(g) + " is empty");
    }
    offsets_.push_back(total);
    total += group_sizes_[g];
    group_index_.insert(group_index_.end(), group_sizes_[g], static_cast<int>(g));
  }
  if (total != shrink_.cols()) {
    throw SchemaError("design: group sizes sum to " + std::to_string(total) + " but X has " +
                      std::to_string(shrink_.cols()) + " columns");
  }
  if (adjust_.cols() > 0) {
    // Grow the column set until the rank stalls to name the offending column.
    for (Eigen::Index j = 0; j < adjust_.cols(); ++j) {
      Eigen::ColPivHouseholderQR<Matrix> qr(adjust_.leftCols(j + 1));
      if (qr.rank() < j + 1) {
        throw LinearAlgebraError("design: adjustment matrix is rank deficient at column " +
                                 std::to_string(j));
      }
    }
  }
}

Hyperparameters Hyperparameters::uniform(int groups, double a, double b) {
  return {Vector::Constant(groups, a), Vector::Constant(groups, b)};
}

void Hyperparameters::validate(int groups) const {
  if (a.size() != groups || b.size() != groups) {
    throw ParameterDomainError("hyperparameters: expected " + std::to_string(groups) +
                               " entries per vector");
  }
  for (int g = 0; g < groups; ++g) {
    if (!(a[g] > 0.0) || !(b[g] > 0.0) || !std::isfinite(a[g]) || !std::isfinite(b[g])) {
      throw ParameterDomainError("hyperparameters: group " + std::to_string(g) +
                                 " has a non-positive or non-finite entry");
    }
  }
}

ShrinkageFactors shrinkage_factors(double tau2, double sigma2, const Vector& gamma2,
                                   const Vector& lambda2, std::span<const int> group_sizes) {
  ShrinkageFactors out{Vector(lambda2.size())};
  Eigen::Index k = 0;
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    for (int j = 0; j < group_sizes[g]; ++j, ++k) {
      const double ratio = tau2 * gamma2[static_cast<Eigen::Index>(g)] * lambda2[k] / sigma2;
      out.kappa[k] = 1.0 / (1.0 + ratio);
    }
  }
  return out;
}

namespace {

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterDomainError(std::string(name) + " must be positive and finite");
  }
}

// log of the integrand of the mixture integral on the t = log(u / tau2) axis.
double log_mixture_integrand(double t, double beta, double tau2, double a, double b) {
  const double u = tau2 * std::exp(t);
  const double log_normal = -0.5 * std::log(2.0 * std::numbers::pi * u) - beta * beta / (2.0 * u);
  // BetaPrime(a, b) density of w = e^t times the Jacobian dw/dt = w.
  const double log_mix = -log_beta(a, b) + a * t - (a + b) * softplus(t);
  return log_normal + log_mix;
}

}  // namespace

double marginal_prior_pdf(double beta, double tau2, double a, double b) {
  require_positive(tau2, "tau2");
  require_positive(a, "a");
  require_positive(b, "b");
  if (!std::isfinite(beta)) throw ParameterDomainError("beta must be finite");
  if (beta == 0.0 && a <= 0.5) return std::numeric_limits<double>::infinity();

  constexpr double kLo = -60.0;
  constexpr double kHi = 60.0;
  // The integrand turns on near u ~ beta^2; splitting there keeps the first
  // Kronrod pass from stepping over it.
  double split = beta == 0.0 ? 0.0 : std::log(beta * beta / tau2);
  split = std::clamp(split, kLo + 1.0, kHi - 1.0);
  const double offset = log_mixture_integrand(split, beta, tau2, a, b);
  auto f = [&](double t) { return std::exp(log_mixture_integrand(t, beta, tau2, a, b) - offset); };
  QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  const QuadratureResult left = integrate(f, kLo, split, opts);
  const QuadratureResult right = integrate(f, split, kHi, opts);
  const double total = left.value + right.value;
  const double err = left.error + right.error;
  if (err > 1e-8 * total) throw NumericError("marginal_prior_pdf: quadrature tolerance not met", err);
  return total * std::exp(offset);
}

double tail_rate(double beta, double tau2, double a, double b) {
  require_positive(tau2, "tau2");
  require_positive(a, "a");
  require_positive(b, "b");
  if (beta == 0.0 || !std::isfinite(beta)) {
    throw ParameterDomainError("tail_rate: beta must be finite and non-zero");
  }
  const double z = beta * beta / tau2;
  const double log_r = b * std::log(2.0 * tau2) + std::lgamma(b + 0.5) -
                       0.5 * std::log(std::numbers::pi) - log_beta(a, b) -
                       (1.0 + 2.0 * b) * std::log(std::abs(beta)) + a * (std::log(z) - std::log1p(z));
  return std::exp(log_r);
}

double shrinkage_prior_logpdf(std::span<const double> kappa, double tau2, double sigma2, double a,
                              double b) {
  require_positive(tau2, "tau2");
  require_positive(sigma2, "sigma2");
  require_positive(a, "a");
  require_positive(b, "b");
  if (kappa.empty()) throw ParameterDomainError("shrinkage_prior_logpdf: empty group");
  const double pg = static_cast<double>(kappa.size());
  const double r = tau2 / sigma2;
  double odds = 0.0;
  double independent = 0.0;
  for (double k : kappa) {
    if (!(k > 0.0 && k < 1.0)) {
      throw ParameterDomainError("shrinkage_prior_logpdf: shrinkage factors must lie in (0, 1)");
    }
    odds += k / (1.0 - k);
    independent += (b - 1.0) * std::log(k) - (b + 1.0) * std::log1p(-k);
  }
  return std::lgamma(a + pg * b) - std::lgamma(a) - pg * std::lgamma(b) + pg * b * std::log(r) -
         (a + pg * b) * std::log1p(r * odds) + independent;
}

namespace {

enum class Weight { One, Kappa, OneMinusKappa };

struct LogIntegral {
  double log_value;
  double rel_error;
};

// log of int exp(g(x)) dx over [lo, hi], with g evaluated in log space and a
// grid maximum subtracted before exponentiating.
LogIntegral log_integrate(const std::function<double(double)>& g, double lo, double hi,
                          double rel_tol) {
  constexpr int kGrid = 200;
  double peak = -std::numeric_limits<double>::infinity();
  double peak_x = lo;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = lo + (hi - lo) * i / kGrid;
    const double v = g(x);
    if (v > peak) {
      peak = v;
      peak_x = x;
    }
  }
  if (!std::isfinite(peak)) {
    throw NumericError("normal-means posterior: integrand vanished on the grid");
  }
  auto f = [&](double x) { return std::exp(g(x) - peak); };
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.max_intervals = 8000;
  // Split at the grid peak so the first pass resolves the bulk.
  const double split = std::clamp(peak_x, lo, hi);
  double value = 0.0;
  double err = 0.0;
  if (split > lo) {
    const auto r = integrate(f, lo, split, opts);
    value += r.value;
    err += r.error;
  }
  if (split < hi) {
    const auto r = integrate(f, split, hi, opts);
    value += r.value;
    err += r.error;
  }
  return {peak + std::log(value), err / value};
}

// Posterior of one group's shrinkage factors in the normal-means model:
//   prod_j k_j^(b-1/2) (1-k_j)^(-(b+1)) exp(-k_j y_j^2 / (2 s2))
//     * (1 + r sum_j k_j/(1-k_j))^(-(a + p b)),    r = tau2 / s2.
// Writing the coupling term as a Gamma mixture,
//   (1 + r S)^(-c) = Gamma(c)^-1 int_0^inf s^(c-1) exp(-s (1 + r S)) ds,
// the components decouple given s, so every expectation reduces to a 1-D
// integral over log s of a product of 1-D integrals over logit(k_j).
class KappaPosteriorQuadrature {
 public:
  KappaPosteriorQuadrature(std::span<const double> y, double tau2, double sigma2, double a,
                           double b, double rel_tol)
      : y_(y.begin(), y.end()), log_r_(std::log(tau2 / sigma2)), sigma2_(sigma2), a_(a), b_(b),
        rel_tol_(rel_tol) {}

  // E[w(k_j) | y] for the requested weight.
  double expectation(int j, Weight w) const {
    const LogIntegral num = outer(j, w);
    const LogIntegral den = outer(j, Weight::One);
    return std::exp(num.log_value - den.log_value);
  }

 private:
  // log h_j(s) = log int exp(phi_j(t) - s r e^t) w(k(t)) dt, t = logit k.
  double log_inner(double log_s, double yj, Weight w) const {
    const double half_y2 = yj * yj / (2.0 * sigma2_);
    const double b = b_;
    const double shift = log_s + log_r_;
    auto g = [=](double t) {
      const double log_k = -softplus(-t);
      const double log_1mk = -softplus(t);
      double v = (b + 0.5) * log_k - b * log_1mk - std::exp(log_k) * half_y2 - std::exp(shift + t);
      if (w == Weight::Kappa) v += log_k;
      if (w == Weight::OneMinusKappa) v += log_1mk;
      return v;
    };
    // Left tail decays like exp((b + 1/2) t); right tail is cut off by the
    // double exponential once s r e^t is large.
    const double lo = -80.0 / (b + 0.5) - 5.0;
    const double hi = std::max(-shift + 6.0, lo + 10.0);
    return log_integrate(g, lo, hi, rel_tol_ * 0.01).log_value;
  }

  LogIntegral outer(int j, Weight w) const {
    const double p = static_cast<double>(y_.size());
    const double c = a_ + p * b_;
    auto g = [&](double v) {
      double total = c * v - std::exp(v);
      for (std::size_t k = 0; k < y_.size(); ++k) {
        total += log_inner(v, y_[k], static_cast<int>(k) == j ? w : Weight::One);
      }
      return total;
    };
    // As s -> 0 the integrand behaves like s^a (each h_j grows like s^-b).
    const double lo = -std::min(40.0 / a_, 1e5) - 10.0;
    const double hi = 7.0;
    return log_integrate(g, lo, hi, rel_tol_);
  }

  std::vector<double> y_;
  double log_r_;
  double sigma2_;
  double a_;
  double b_;
  double rel_tol_;
};

PosteriorMeanEstimate importance_expectation(std::span<const double> y, double tau2, double sigma2,
                                             double a, double b, int j, Weight w,
                                             const PosteriorMeanOptions& options) {
  const std::size_t pg = y.size();
  const double r = tau2 / sigma2;
  const double c = a + static_cast<double>(pg) * b;
  Rng rng(options.seed);
  std::vector<double> log_w;
  std::vector<double> h;
  std::vector<double> log_g1(pg), log_g2(pg);
  auto draw_batch = [&](std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      double lw = 0.0;
      double odds = 0.0;
      double hj = 1.0;
      for (std::size_t k = 0; k < pg; ++k) {
        // Beta(b + 1/2, 1/2) as G1 / (G1 + G2), kept in logs so 1 - kappa
        // is accurate near one.
        const double l1 = rng.log_gamma_unit(b + 0.5);
        const double l2 = rng.log_gamma_unit(0.5);
        const double lse = std::max(l1, l2) + std::log1p(std::exp(-std::abs(l1 - l2)));
        const double log_k = l1 - lse;
        const double log_1mk = l2 - lse;
        const double kappa = std::exp(log_k);
        odds += std::exp(l1 - l2);
        lw += -(b + 0.5) * log_1mk - kappa * y[k] * y[k] / (2.0 * sigma2);
        if (static_cast<int>(k) == j) {
          hj = w == Weight::Kappa ? kappa : w == Weight::OneMinusKappa ? std::exp(log_1mk) : 1.0;
        }
      }
      lw -= c * std::log1p(r * odds);
      log_w.push_back(lw);
      h.push_back(hj);
    }
  };
  auto estimate = [&]() {
    const double peak = *std::max_element(log_w.begin(), log_w.end());
    double sw = 0.0, swh = 0.0;
    for (std::size_t i = 0; i < log_w.size(); ++i) {
      const double wi = std::exp(log_w[i] - peak);
      sw += wi;
      swh += wi * h[i];
    }
    const double mean = swh / sw;
    double var = 0.0;
    for (std::size_t i = 0; i < log_w.size(); ++i) {
      const double wi = std::exp(log_w[i] - peak) / sw;
      var += wi * wi * (h[i] - mean) * (h[i] - mean);
    }
    return PosteriorMeanEstimate{mean, std::sqrt(var), false};
  };
  draw_batch(options.is_draws);
  PosteriorMeanEstimate est = estimate();
  while (options.target_se > 0.0 && est.std_error > options.target_se) {
    if (log_w.size() + options.is_draws > options.max_is_draws) {
      std::ostringstream msg;
      msg << "normal-means posterior: standard error " << est.std_error << " above target "
          << options.target_se << " after " << log_w.size() << " draws";
      throw NumericError(msg.str(), est.std_error);
    }
    draw_batch(options.is_draws);
    est = estimate();
  }
  return est;
}

PosteriorMeanEstimate kappa_expectation(std::span<const double> y_g, double tau2, double sigma2,
                                        double a, double b, int j, Weight w,
                                        const PosteriorMeanOptions& options) {
  require_positive(tau2, "tau2");
  require_positive(sigma2, "sigma2");
  require_positive(a, "a");
  require_positive(b, "b");
  if (y_g.empty() || j < 0 || j >= static_cast<int>(y_g.size())) {
    throw ParameterDomainError("normal-means posterior: component index out of range");
  }
  for (double v : y_g) {
    if (!std::isfinite(v)) throw ParameterDomainError("normal-means posterior: non-finite y");
  }
  const bool use_quadrature =
      options.method == PosteriorMeanOptions::Method::Quadrature ||
      (options.method == PosteriorMeanOptions::Method::Auto && y_g.size() <= 3);
  if (use_quadrature) {
    KappaPosteriorQuadrature quad(y_g, tau2, sigma2, a, b, options.rel_tol);
    return {quad.expectation(j, w), 0.0, true};
  }
  return importance_expectation(y_g, tau2, sigma2, a, b, j, w, options);
}

}  // namespace

PosteriorMeanEstimate normal_means_posterior_mean(std::span<const double> y_g, double tau2,
                                                  double sigma2, double a, double b, int j,
                                                  const PosteriorMeanOptions& options) {
  PosteriorMeanEstimate e =
      kappa_expectation(y_g, tau2, sigma2, a, b, j, Weight::OneMinusKappa, options);
  const double yj = y_g[static_cast<std::size_t>(j)];
  return {e.value * yj, e.std_error * std::abs(yj), e.quadrature};
}

PosteriorMeanEstimate normal_means_kappa_mean(std::span<const double> y_g, double tau2,
                                              double sigma2, double a, double b, int j,
                                              const PosteriorMeanOptions& options) {
  return kappa_expectation(y_g, tau2, sigma2, a, b, j, Weight::Kappa, options);
}

}  // namespace gigg
