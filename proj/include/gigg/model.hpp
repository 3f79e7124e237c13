#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gigg/random.hpp"

namespace gigg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Regression data y = C alpha + X beta + e with the columns of X split into
// contiguous groups.
class GroupedDesign {
 public:
  GroupedDesign() = default;
  // Validates shapes, group sizes and the column rank of C; throws
  // InputError / SchemaError / LinearAlgebraError.
  GroupedDesign(Vector y, Matrix adjust, Matrix shrink, std::vector<int> group_sizes);

  const Vector& y() const { return y_; }
  const Matrix& C() const { return adjust_; }
  const Matrix& X() const { return shrink_; }
  const std::vector<int>& group_sizes() const { return group_sizes_; }

  int n() const { return static_cast<int>(y_.size()); }
  int p() const { return static_cast<int>(shrink_.cols()); }
  int q() const { return static_cast<int>(adjust_.cols()); }
  int groups() const { return static_cast<int>(group_sizes_.size()); }
  int offset(int g) const { return offsets_[g]; }
  int group_of(int column) const { return group_index_[column]; }

 private:
  Vector y_;
  Matrix adjust_;
  Matrix shrink_;
  std::vector<int> group_sizes_;
  std::vector<int> offsets_;
  std::vector<int> group_index_;
};

struct Hyperparameters {
  Vector a;
  Vector b;

  static Hyperparameters uniform(int groups, double a, double b);
  // Throws ParameterDomainError unless all entries are positive and finite
  // and both vectors have `groups` entries.
  void validate(int groups) const;
};

// kappa_gj = sigma2 / (sigma2 + tau2 gamma2_g lambda2_gj), each in (0, 1).
struct ShrinkageFactors {
  Vector kappa;
};

ShrinkageFactors shrinkage_factors(double tau2, double sigma2, const Vector& gamma2,
                                   const Vector& lambda2, std::span<const int> group_sizes);

// Marginal prior density of one coefficient: the normal scale mixture
// int N(beta; 0, u) f(u) du with u / tau2 ~ BetaPrime(a, b), integrated on
// the log-u axis. Relative error <= 1e-8.
double marginal_prior_pdf(double beta, double tau2, double a, double b);

// Closed-form tail envelope r(beta) whose ratio to marginal_prior_pdf tends
// to one as |beta| grows. Regularly varying with index -1 - 2b.
double tail_rate(double beta, double tau2, double a, double b);

// Log joint prior density of one group's shrinkage factors.
double shrinkage_prior_logpdf(std::span<const double> kappa, double tau2, double sigma2, double a,
                              double b);

struct PosteriorMeanEstimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for quadrature results
  bool quadrature = true;
};

struct PosteriorMeanOptions {
  // Auto: quadrature for groups of up to three, importance sampling beyond.
  enum class Method { Auto, Quadrature, ImportanceSampling };
  Method method = Method::Auto;
  double rel_tol = 1e-8;          // quadrature tolerance
  std::size_t is_draws = 200000;  // importance-sampling batch (p_g > 3)
  double target_se = 0.0;         // if > 0, batches are added until reached
  std::size_t max_is_draws = 20000000;
  std::uint64_t seed = 1;
};

// Normal-means posterior mean E[beta_gj | y_g] = (1 - E[kappa_gj | y_g]) y_gj
// with tau2 and sigma2 held fixed. Quadrature writes the group coupling as a
// gamma mixture and nests 1-D adaptive integrals over the mixing variable and
// each logit(kappa); importance sampling uses Beta(b + 1/2, 1/2) proposals.
PosteriorMeanEstimate normal_means_posterior_mean(std::span<const double> y_g, double tau2,
                                                  double sigma2, double a, double b, int j,
                                                  const PosteriorMeanOptions& options = {});

// E[kappa_gj | y_g] under the same model.
PosteriorMeanEstimate normal_means_kappa_mean(std::span<const double> y_g, double tau2,
                                              double sigma2, double a, double b, int j,
                                              const PosteriorMeanOptions& options = {});

}  // namespace gigg
