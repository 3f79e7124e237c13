#pragma once

#include <functional>
#include <span>

#include "gigg/model.hpp"
#include "gigg/random.hpp"

namespace gigg {

struct MmleSettings {
  bool estimate_a = false;  // when false a_g stays at its supplied value
  double tol = 1e-5;        // on sum of squared hyperparameter changes
  int max_iters = 100;
  int mc_draws = 500;  // sweeps averaged per expectation
  int period = 100;    // sweeps between in-chain updates

  void validate() const;
};

// Monte Carlo estimates of E[log gamma2_g | y] (length G) and
// E[log lambda2_gj | y] (length p) under the current hyperparameters.
struct LogScaleExpectations {
  Vector log_gamma2;
  Vector log_lambda2;
};

using ExpectationProvider = std::function<LogScaleExpectations(const Hyperparameters&)>;

struct MmleStep {
  Hyperparameters hyper;
  bool converged = false;
  double change = 0.0;  // sum of squared changes
};

// x > 0 with digamma(x) = y, by Newton's method.
double digamma_inverse(double y);

// One update b_g = digamma^-1(-mean_j E[log lambda2_gj]) and, if enabled,
// a_g = digamma^-1(E[log gamma2_g]).
MmleStep mmle_iterate(const ExpectationProvider& provider, const Hyperparameters& hyper,
                      std::span<const int> group_sizes, const MmleSettings& settings);

// Pearson correlation of two shrinkage factors of one group under the prior,
// over `replicates` independent draws of (gamma2, lambda2).
double prior_kappa_correlation(int group_size, double a, double b, double tau2, double sigma2,
                               int replicates, Rng& rng);

// b in [1e-3, 64] whose prior within-group kappa correlation is within 0.02
// of target_rho, found by bisection on log b. Throws CalibrationError when
// the target lies outside the correlations reachable on the bracket.
double calibrate_b_from_target_correlation(int group_size, double a, double tau2, double sigma2,
                                           double target_rho, Rng& rng);

}  // namespace gigg
