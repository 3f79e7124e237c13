#pragma once

#include <optional>
#include <span>

#include "gigg/model.hpp"
#include "gigg/sampler.hpp"

namespace gigg {

struct ChainSummary {
  Vector mean;
  Vector ci_lower;
  Vector ci_upper;
  Vector ess;
  Vector ess_per_second;
  Vector kappa_mean;
  std::optional<Vector> psrf;  // only with two or more chains
};

enum class Transform { Identity, FoldChange };

// Split-chain potential scale reduction factor. Each chain is halved and
// the halves treated as separate chains. Chains must have equal length >= 10.
double psrf(std::span<const Vector> chains);

// Effective sample size N / (1 + 2 sum rho_k) with the autocorrelation sum
// truncated by Geyer's initial monotone sequence.
double ess(const Vector& draws);

// Percentile (type 7) of an unsorted sample.
double quantile(Vector values, double prob);

// 100 (2^beta - 1): percent change in the response per doubling of a
// log2-scale covariate.
double fold_change(double beta);

// Posterior means, equal-tailed `level` intervals, ESS and mean shrinkage
// factors sigma2 / (sigma2 + tau2 gamma2 lambda2) of the coefficients,
// pooling the chains. Constant draw columns get a NaN ESS.
ChainSummary summarize(std::span<const PosteriorDraws> chains, double level = 0.95,
                       Transform transform = Transform::Identity);
ChainSummary summarize(const PosteriorDraws& draws, double level = 0.95,
                       Transform transform = Transform::Identity);

// Largest eigenvalue of X_g' X_g by power iteration.
double max_eigenvalue_gram(const Matrix& block);

// sigma2 / (sigma2 + theta_max(X_g' X_g) tau2).
double concentration_bound(const Matrix& block, double tau2, double sigma2);

}  // namespace gigg
