#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "gigg/model.hpp"
#include "gigg/random.hpp"
#include "gigg/sampler.hpp"

namespace gigg {

enum class PatternKind { Concentrated, Distributed, Random, Explicit };

struct CoefficientPattern {
  PatternKind kind = PatternKind::Concentrated;
  Vector values;  // Explicit only

  // "concentrated", "distributed", "random" or "explicit".
  static CoefficientPattern parse(const std::string& name);
  std::string name() const;
};

// Block-exchangeable design: unit variances, rho_within inside a group,
// rho_between across groups.
struct SimulationScenario {
  int n = 500;
  std::vector<int> group_sizes{10, 10, 10, 10, 10};
  double rho_within = 0.8;
  double rho_between = 0.2;
  CoefficientPattern pattern;
  double r_squared = 0.7;
  int q_adjust = 5;  // adjustment covariates besides the intercept
  std::uint64_t seed = 1;

  int p() const;
  // Throws ScenarioError on out-of-range fields or a covariance that is not
  // positive definite.
  void validate() const;
  Matrix covariance() const;

  // Lines of `key = value`; '#' starts a comment. Keys are the field names;
  // group_sizes and beta (explicit pattern) take comma-separated lists.
  static SimulationScenario parse(std::istream& in);
  static SimulationScenario load(const std::string& path);
};

struct SimulatedData {
  GroupedDesign design;
  Vector beta;
  Vector alpha;
  double sigma2 = 0.0;
};

// Coefficients for one replicate. Concentrated and distributed need five
// groups of 10; random needs every group to have at least one member.
Vector coefficient_vector(const CoefficientPattern& pattern, const std::vector<int>& group_sizes,
                          Rng& rng);

// sigma2 with beta' Sigma beta / (beta' Sigma beta + sigma2) = r2.
double calibrate_noise(const Vector& beta, const Matrix& sigma_x, double r2);

// Replicate `replicate` of the scenario, drawn from its own stream
// derive_seed(seed, replicate). C holds an intercept and q_adjust standard
// normal columns with alpha = (0, 1, ..., 1).
SimulatedData generate_dataset(const SimulationScenario& s, std::uint64_t replicate = 0);

// Least-squares coefficients of X after adjusting for C.
Vector ols_estimate(const GroupedDesign& design);

struct MseReport {
  std::optional<double> null_mse;  // absent when no cell is null
  std::optional<double> nonnull_mse;
  long null_count = 0;
  long nonnull_count = 0;
};

// Squared errors of replicate x p estimates, split by whether the true value
// is zero. By default each stratum reports the mean over its cells. With
// stratum_sums the squared errors are summed over a replicate's cells in the
// stratum and averaged over replicates.
MseReport mse_report(const Matrix& estimates, const Matrix& truths, bool stratum_sums = false);

struct MethodSpec {
  enum class Kind { GiggFixed, GiggMmle, Ols };
  Kind kind = Kind::Ols;
  // For GiggFixed; a negative value stands for 1/n.
  double a = -1.0;
  double b = -1.0;

  // "ols", "gigg-mmle" or "gigg-fixed:A,B" where A and B are numbers or
  // "1/n". Throws InputError.
  static MethodSpec parse(const std::string& token);
  std::string label() const;
};

// Posterior mean (GIGG methods) or OLS estimate of beta. gigg-mmle fixes
// a = 1/n and starts b at 1/2.
Vector estimate_beta(const GroupedDesign& design, const MethodSpec& method, SamplerConfig config);

struct MethodResult {
  MethodSpec method;
  Matrix estimates;  // replicates x p; rows of failed replicates are NaN
  std::vector<std::string> failures;  // one entry per replicate, empty on success
};

struct SimulationResult {
  Matrix truths;  // replicates x p
  Vector sigma2;
  std::vector<MethodResult> methods;
};

// Runs every method on `replicates` datasets across `threads` workers.
// Sampler seeds derive from the replicate seed so the result does not depend
// on the thread count.
SimulationResult run_simulation(const SimulationScenario& s, const std::vector<MethodSpec>& methods,
                                int replicates, const SamplerConfig& config, int threads);

}  // namespace gigg
