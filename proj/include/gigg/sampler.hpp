#pragma once

#include <cstdint>
#include <optional>

#include "gigg/mmle.hpp"
#include "gigg/model.hpp"
#include "gigg/random.hpp"

namespace gigg {

// One configuration of every unknown in the hierarchy
//   beta_gj ~ N(0, tau2 gamma2_g lambda2_gj), gamma2_g ~ G(a_g, 1),
//   lambda2_gj ~ IG(b_g, 1), tau2 | nu ~ IG(1/2, 1/nu), nu ~ IG(1/2, 1/sigma2).
struct GiggState {
  Vector alpha;
  Vector beta;
  double tau2 = 1.0;
  double sigma2 = 1.0;
  double nu = 1.0;
  Vector gamma2;
  Vector lambda2;

  // Throws ParameterDomainError on a length mismatch or a scale that is not
  // positive and finite.
  void validate(const GroupedDesign& design) const;
};

enum class BetaStrategy { Auto, Direct, Woodbury };
enum class HyperMode { Fixed, MmleB };

// Inverse-gamma prior IG(shape, scale) on sigma2. The default (0, 0) is the
// improper reference prior 1/sigma2.
struct SigmaPrior {
  double shape = 0.0;
  double scale = 0.0;
};

struct SamplerConfig {
  int burn_in = 10000;
  int draws = 10000;
  int thin = 1;
  std::uint64_t seed = 1;
  BetaStrategy beta_strategy = BetaStrategy::Auto;
  HyperMode hyper_mode = HyperMode::Fixed;
  MmleSettings mmle;
  SigmaPrior sigma_prior;
  // Hold tau2 or sigma2 at a value instead of sampling it.
  std::optional<double> fixed_tau2;
  std::optional<double> fixed_sigma2;

  void validate() const;
};

struct PosteriorDraws {
  Matrix beta;    // draws x p
  Matrix alpha;   // draws x q
  Matrix scalar;  // draws x 3: tau2, sigma2, nu
  Matrix scales;  // draws x (G + p): gamma2 then lambda2
  std::vector<int> group_sizes;
  SamplerConfig config;
  Hyperparameters hyper;  // values in force after burn-in
  int mmle_updates = 0;
  bool mmle_converged = false;
  double wall_seconds = 0.0;

  int size() const { return static_cast<int>(beta.rows()); }
};

// Gibbs kernel over GiggState. Each update draws one block from its full
// conditional; sweep() runs them in the order alpha, beta, lambda2, gamma2,
// tau2, nu, sigma2.
class GiggSampler {
 public:
  GiggSampler(const GroupedDesign& design, Hyperparameters hyper, SamplerConfig config);

  // alpha = 0, beta = 0, unit scales, nu = 1, sigma2 = var(y) unless fixed.
  GiggState initial_state() const;

  void update_alpha(GiggState& s, Rng& rng) const;
  void update_beta(GiggState& s, Rng& rng) const;
  void update_beta_direct(GiggState& s, Rng& rng) const;
  void update_beta_woodbury(GiggState& s, Rng& rng) const;
  void update_lambda(GiggState& s, Rng& rng) const;
  void update_gamma(GiggState& s, Rng& rng) const;
  void update_local_scales(GiggState& s, Rng& rng) const;
  void update_tau2(GiggState& s, Rng& rng) const;
  void update_nu(GiggState& s, Rng& rng) const;
  void update_sigma2(GiggState& s, Rng& rng) const;
  void update_global(GiggState& s, Rng& rng) const;
  void sweep(GiggState& s, Rng& rng) const;

  // Replaces the response used by the conditionals (the design's X and C are
  // kept).
  void set_response(const Vector& y);
  const Vector& response() const { return y_; }

  const Hyperparameters& hyper() const { return hyper_; }
  void set_hyper(Hyperparameters hyper);
  const GroupedDesign& design() const { return design_; }
  const SamplerConfig& config() const { return config_; }
  bool uses_woodbury() const;

 private:
  Vector residual_without_beta(const GiggState& s) const;

  const GroupedDesign& design_;
  Hyperparameters hyper_;
  SamplerConfig config_;
  Vector y_;
  Matrix xtx_;
  Matrix xtc_;
  Vector xty_;
  Eigen::LLT<Matrix> ctc_llt_;
  Vector cty_;
};

// Scales are kept inside [kScaleFloor, kScaleCap].
inline constexpr double kScaleFloor = 1e-300;
inline constexpr double kScaleCap = 1e300;

// Runs burn_in + draws * thin sweeps from initial_state() and keeps every
// thin-th post-burn-in state. With HyperMode::MmleB the b_g are re-estimated
// every config.mmle.period burn-in sweeps from the last config.mmle.mc_draws
// sweeps and frozen afterwards. Errors from updates are rethrown with the
// sweep index in the message.
PosteriorDraws run_chain(const GroupedDesign& design, const Hyperparameters& hyper,
                         const SamplerConfig& config);

}  // namespace gigg
