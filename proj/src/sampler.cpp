#include "gigg/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <sstream>

#include "gigg/distributions.hpp"
#include "gigg/errors.hpp"

namespace gigg {
namespace {

double clamp_scale(double v) { return std::clamp(v, kScaleFloor, kScaleCap); }

Vector standard_normals(Rng& rng, Eigen::Index n) {
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
  return z;
}

// Prior variance tau2 gamma2_g lambda2_gj of every coefficient.
Vector prior_variances(const GiggState& s, const GroupedDesign& d) {
  Vector v(d.p());
  for (int k = 0; k < d.p(); ++k) {
    v[k] = clamp_scale(s.tau2 * s.gamma2[d.group_of(k)] * s.lambda2[k]);
  }
  return v;
}

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

void GiggState::validate(const GroupedDesign& design) const {
  if (alpha.size() != design.q() || beta.size() != design.p() ||
      gamma2.size() != design.groups() || lambda2.size() != design.p()) {
    throw ParameterDomainError("state: dimensions do not match the design");
  }
  if (!alpha.allFinite() || !beta.allFinite()) {
    throw ParameterDomainError("state: non-finite regression coefficient");
  }
  if (!positive_finite(tau2) || !positive_finite(sigma2) || !positive_finite(nu)) {
    throw ParameterDomainError("state: global scales must be positive and finite");
  }
  for (double v : gamma2) {
    if (!positive_finite(v)) throw ParameterDomainError("state: group scale not positive and finite");
  }
  for (double v : lambda2) {
    if (!positive_finite(v)) throw ParameterDomainError("state: local scale not positive and finite");
  }
}

void SamplerConfig::validate() const {
  if (burn_in < 0) throw ParameterDomainError("sampler: burn_in must be non-negative");
  if (draws < 1) throw ParameterDomainError("sampler: draws must be at least 1");
  if (thin < 1) throw ParameterDomainError("sampler: thin must be at least 1");
  if (sigma_prior.shape < 0.0 || sigma_prior.scale < 0.0) {
    throw ParameterDomainError("sampler: sigma2 prior parameters must be non-negative");
  }
  if (fixed_tau2 && !positive_finite(*fixed_tau2)) {
    throw ParameterDomainError("sampler: fixed tau2 must be positive");
  }
  if (fixed_sigma2 && !positive_finite(*fixed_sigma2)) {
    throw ParameterDomainError("sampler: fixed sigma2 must be positive");
  }
  if (hyper_mode == HyperMode::MmleB) mmle.validate();
}

GiggSampler::GiggSampler(const GroupedDesign& design, Hyperparameters hyper, SamplerConfig config)
    : design_(design), hyper_(std::move(hyper)), config_(std::move(config)) {
  config_.validate();
  hyper_.validate(design_.groups());
  const Matrix& X = design_.X();
  const Matrix& C = design_.C();
  xtx_ = X.transpose() * X;
  xtc_ = X.transpose() * C;
  if (design_.q() > 0) {
    ctc_llt_.compute(C.transpose() * C);
    if (ctc_llt_.info() != Eigen::Success) {
      throw LinearAlgebraError("sampler: C'C is not positive definite");
    }
  }
  set_response(design_.y());
}

void GiggSampler::set_response(const Vector& y) {
  if (y.size() != design_.n()) throw SchemaError("sampler: response length mismatch");
  y_ = y;
  xty_ = design_.X().transpose() * y_;
  cty_ = design_.C().transpose() * y_;
}

void GiggSampler::set_hyper(Hyperparameters hyper) {
  hyper.validate(design_.groups());
  hyper_ = std::move(hyper);
}

bool GiggSampler::uses_woodbury() const {
  switch (config_.beta_strategy) {
    case BetaStrategy::Direct:
      return false;
    case BetaStrategy::Woodbury:
      return true;
    case BetaStrategy::Auto:
      break;
  }
  return design_.p() > 2 * design_.n();
}

GiggState GiggSampler::initial_state() const {
  GiggState s;
  s.alpha = Vector::Zero(design_.q());
  s.beta = Vector::Zero(design_.p());
  s.gamma2 = Vector::Ones(design_.groups());
  s.lambda2 = Vector::Ones(design_.p());
  s.nu = 1.0;
  s.tau2 = config_.fixed_tau2.value_or(1.0);
  if (config_.fixed_sigma2) {
    s.sigma2 = *config_.fixed_sigma2;
  } else {
    const double n = static_cast<double>(y_.size());
    const double var = n > 1 ? (y_.array() - y_.mean()).square().sum() / (n - 1.0) : 0.0;
    s.sigma2 = var > 0.0 ? clamp_scale(var) : 1.0;
  }
  return s;
}

Vector GiggSampler::residual_without_beta(const GiggState& s) const {
  // X'(y - C alpha)
  if (design_.q() == 0) return xty_;
  return xty_ - xtc_ * s.alpha;
}

void GiggSampler::update_alpha(GiggState& s, Rng& rng) const {
  if (design_.q() == 0) return;
  // C'(y - X beta) = C'y - (X'C)' beta
  const Vector rhs = cty_ - xtc_.transpose() * s.beta;
  const Vector mean = ctc_llt_.solve(rhs);
  // Cov = sigma2 (C'C)^-1 = sigma2 L^-T L^-1
  const Vector z = standard_normals(rng, design_.q());
  const Vector noise = ctc_llt_.matrixU().solve(z) * std::sqrt(s.sigma2);
  s.alpha = mean + noise;
}

void GiggSampler::update_beta(GiggState& s, Rng& rng) const {
  if (uses_woodbury()) {
    update_beta_woodbury(s, rng);
  } else {
    update_beta_direct(s, rng);
  }
}

void GiggSampler::update_beta_direct(GiggState& s, Rng& rng) const {
  const Vector d = prior_variances(s, design_);
  Matrix Q = xtx_ / s.sigma2;
  Q.diagonal() += d.cwiseInverse();
  Eigen::LLT<Matrix> llt(Q);
  if (llt.info() != Eigen::Success) {
    throw LinearAlgebraError("update_beta: precision matrix is not positive definite");
  }
  // v ~ N(X'r / sigma2, Q), then beta = Q^-1 v.
  const Vector z = standard_normals(rng, design_.p());
  const Vector v = residual_without_beta(s) / s.sigma2 + llt.matrixL() * z;
  s.beta = llt.solve(v);
  if (!s.beta.allFinite()) throw NumericError("update_beta: non-finite draw");
}

void GiggSampler::update_beta_woodbury(GiggState& s, Rng& rng) const {
  // Phi = X / sigma, target mean uses alpha_t = (y - C alpha) / sigma.
  const Vector d = prior_variances(s, design_);
  const double sigma = std::sqrt(s.sigma2);
  const Matrix& X = design_.X();
  Vector resid = y_;
  if (design_.q() > 0) resid -= design_.C() * s.alpha;
  const Vector target = resid / sigma;

  const Vector u = d.cwiseSqrt().cwiseProduct(standard_normals(rng, design_.p()));
  const Vector delta = standard_normals(rng, design_.n());
  const Vector v = X * u / sigma + delta;
  // M = Phi D Phi' + I
  const Matrix xd = X * d.asDiagonal();
  Matrix M = xd * X.transpose() / s.sigma2;
  M.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw LinearAlgebraError("update_beta: Woodbury system is not positive definite");
  }
  const Vector w = llt.solve(target - v);
  s.beta = u + xd.transpose() * w / sigma;
  if (!s.beta.allFinite()) throw NumericError("update_beta: non-finite draw");
}

void GiggSampler::update_lambda(GiggState& s, Rng& rng) const {
  for (int k = 0; k < design_.p(); ++k) {
    const int g = design_.group_of(k);
    const double shape = hyper_.b[g] + 0.5;
    const double scale = 1.0 + s.beta[k] * s.beta[k] / (2.0 * s.tau2 * s.gamma2[g]);
    s.lambda2[k] = clamp_scale(sample_inverse_gamma(rng, shape, scale));
  }
}

void GiggSampler::update_gamma(GiggState& s, Rng& rng) const {
  for (int g = 0; g < design_.groups(); ++g) {
    const int pg = design_.group_sizes()[g];
    const int off = design_.offset(g);
    double ss = 0.0;
    for (int j = 0; j < pg; ++j) ss += s.beta[off + j] * s.beta[off + j] / s.lambda2[off + j];
    GigParams params{0.5 * pg - hyper_.a[g], ss / s.tau2, 2.0};
    params = params.floored(kScaleFloor);
    if (!params.proper() || !std::isfinite(params.psi)) {
      std::ostringstream msg;
      msg << "update_gamma: improper conditional for group " << g << " (lambda=" << params.lam
          << ", psi=" << params.psi << ")";
      throw NumericError(msg.str());
    }
    // The conditional is on gamma^-2.
    s.gamma2[g] = clamp_scale(1.0 / gig_sample(rng, params));
  }
}

void GiggSampler::update_local_scales(GiggState& s, Rng& rng) const {
  update_lambda(s, rng);
  update_gamma(s, rng);
}

void GiggSampler::update_tau2(GiggState& s, Rng& rng) const {
  if (config_.fixed_tau2) {
    s.tau2 = *config_.fixed_tau2;
    return;
  }
  double quad = 0.0;
  for (int k = 0; k < design_.p(); ++k) {
    quad += s.beta[k] * s.beta[k] / (s.gamma2[design_.group_of(k)] * s.lambda2[k]);
  }
  const double shape = 0.5 * (design_.p() + 1);
  s.tau2 = clamp_scale(sample_inverse_gamma(rng, shape, 0.5 * quad + 1.0 / s.nu));
}

void GiggSampler::update_nu(GiggState& s, Rng& rng) const {
  s.nu = clamp_scale(sample_inverse_gamma(rng, 1.0, 1.0 / s.tau2 + 1.0 / s.sigma2));
}

void GiggSampler::update_sigma2(GiggState& s, Rng& rng) const {
  if (config_.fixed_sigma2) {
    s.sigma2 = *config_.fixed_sigma2;
    return;
  }
  Vector r = y_ - design_.X() * s.beta;
  if (design_.q() > 0) r -= design_.C() * s.alpha;
  const double shape = config_.sigma_prior.shape + 0.5 * (design_.n() + 1);
  const double scale = config_.sigma_prior.scale + 0.5 * r.squaredNorm() + 1.0 / s.nu;
  s.sigma2 = clamp_scale(sample_inverse_gamma(rng, shape, scale));
}

void GiggSampler::update_global(GiggState& s, Rng& rng) const {
  update_tau2(s, rng);
  update_nu(s, rng);
  update_sigma2(s, rng);
}

void GiggSampler::sweep(GiggState& s, Rng& rng) const {
  update_alpha(s, rng);
  update_beta(s, rng);
  update_local_scales(s, rng);
  update_global(s, rng);
}

namespace {

[[noreturn]] void rethrow_at_sweep(long sweep) {
  const std::string prefix = "sweep " + std::to_string(sweep) + ": ";
  try {
    throw;
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what(), e.achieved());
  } catch (const LinearAlgebraError& e) {
    throw LinearAlgebraError(prefix + e.what());
  } catch (const ParameterDomainError& e) {
    throw ParameterDomainError(prefix + e.what());
  }
}

}  // namespace

PosteriorDraws run_chain(const GroupedDesign& design, const Hyperparameters& hyper,
                         const SamplerConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  GiggSampler sampler(design, hyper, config);
  Rng rng(config.seed);
  GiggState state = sampler.initial_state();

  PosteriorDraws out;
  out.config = config;
  out.group_sizes = design.group_sizes();
  const int p = design.p();
  const int q = design.q();
  const int G = design.groups();
  out.beta.resize(config.draws, p);
  out.alpha.resize(config.draws, q);
  out.scalar.resize(config.draws, 3);
  out.scales.resize(config.draws, G + p);

  const bool mmle = config.hyper_mode == HyperMode::MmleB;
  std::deque<Vector> log_gamma_window;
  std::deque<Vector> log_lambda_window;
  bool frozen = !mmle;

  const long total = static_cast<long>(config.burn_in) + static_cast<long>(config.draws) * config.thin;
  int kept = 0;
  for (long it = 0; it < total; ++it) {
    try {
      sampler.sweep(state, rng);
    } catch (const Error&) {
      rethrow_at_sweep(it);
    }
    if (it < config.burn_in && !frozen) {
      log_gamma_window.push_back(state.gamma2.array().log());
      log_lambda_window.push_back(state.lambda2.array().log());
      if (static_cast<int>(log_gamma_window.size()) > config.mmle.mc_draws) {
        log_gamma_window.pop_front();
        log_lambda_window.pop_front();
      }
      if ((it + 1) % config.mmle.period == 0) {
        auto provider = [&](const Hyperparameters&) {
          LogScaleExpectations e{Vector::Zero(G), Vector::Zero(p)};
          for (const auto& v : log_gamma_window) e.log_gamma2 += v;
          for (const auto& v : log_lambda_window) e.log_lambda2 += v;
          const double m = static_cast<double>(log_gamma_window.size());
          e.log_gamma2 /= m;
          e.log_lambda2 /= m;
          return e;
        };
        MmleStep step;
        try {
          step = mmle_iterate(provider, sampler.hyper(), design.group_sizes(), config.mmle);
        } catch (const Error&) {
          rethrow_at_sweep(it);
        }
        sampler.set_hyper(step.hyper);
        ++out.mmle_updates;
        out.mmle_converged = step.converged;
        if (step.converged || out.mmle_updates >= config.mmle.max_iters) frozen = true;
      }
    }
    if (it >= config.burn_in && (it - config.burn_in + 1) % config.thin == 0) {
      out.beta.row(kept) = state.beta.transpose();
      if (q > 0) out.alpha.row(kept) = state.alpha.transpose();
      out.scalar(kept, 0) = state.tau2;
      out.scalar(kept, 1) = state.sigma2;
      out.scalar(kept, 2) = state.nu;
      out.scales.row(kept).head(G) = state.gamma2.transpose();
      out.scales.row(kept).tail(p) = state.lambda2.transpose();
      ++kept;
    }
  }
  out.hyper = sampler.hyper();
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace gigg
