#include "gigg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "gigg/errors.hpp"

namespace gigg {
namespace {

double variance(const Eigen::Ref<const Vector>& x) {
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

}  // namespace

double psrf(std::span<const Vector> chains) {
  if (chains.size() < 2) throw ParameterDomainError("psrf: at least two chains are required");
  const Eigen::Index n = chains[0].size();
  for (const auto& c : chains) {
    if (c.size() != n) throw ParameterDomainError("psrf: chains must have equal length");
  }
  if (n < 10) throw ParameterDomainError("psrf: chains must have at least 10 draws");
  const Eigen::Index half = n / 2;
  std::vector<Vector> split;
  for (const auto& c : chains) {
    // With an odd length the middle draw is dropped.
    split.emplace_back(c.head(half));
    split.emplace_back(c.tail(half));
  }
  const double L = static_cast<double>(half);
  const double M = static_cast<double>(split.size());
  Vector means(split.size());
  double W = 0.0;
  for (std::size_t i = 0; i < split.size(); ++i) {
    means[static_cast<Eigen::Index>(i)] = split[i].mean();
    W += variance(split[i]);
  }
  W /= M;
  if (!(W > 0.0)) throw DegenerateChainError("psrf: zero within-chain variance");
  const double B = L * variance(means);
  return std::sqrt(((L - 1.0) / L * W + B / L) / W);
}

double ess(const Vector& draws) {
  const Eigen::Index n = draws.size();
  if (n < 10) throw ParameterDomainError("ess: at least 10 draws are required");
  const Vector x = draws.array() - draws.mean();
  const double c0 = x.squaredNorm() / static_cast<double>(n);
  if (!(c0 > 0.0)) throw DegenerateChainError("ess: constant sequence");
  auto rho = [&](Eigen::Index k) {
    return x.head(n - k).dot(x.tail(n - k)) / static_cast<double>(n) / c0;
  };
  // Geyer: pair sums Gamma_m = rho_2m + rho_2m+1 are positive and, after
  // enforcing monotonicity, summed while positive.
  double sum = 0.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; 2 * m + 1 < n; ++m) {
    double pair = rho(2 * m) + rho(2 * m + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    sum += pair;
    prev_pair = pair;
  }
  // tau = -1 + 2 sum Gamma_m
  const double tau = std::max(-1.0 + 2.0 * sum, 1.0 / std::log10(static_cast<double>(n)));
  return static_cast<double>(n) / tau;
}

double quantile(Vector values, double prob) {
  if (values.size() == 0) throw ParameterDomainError("quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<Eigen::Index>(std::floor(h));
  const auto hi = std::min<Eigen::Index>(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double fold_change(double beta) { return 100.0 * (std::exp2(beta) - 1.0); }

ChainSummary summarize(std::span<const PosteriorDraws> chains, double level, Transform transform) {
  if (chains.empty() || chains[0].size() == 0) {
    throw ParameterDomainError("summarize: no draws");
  }
  if (!(level > 0.0 && level < 1.0)) throw ParameterDomainError("summarize: level must lie in (0, 1)");
  const auto& sizes = chains[0].group_sizes;
  const int p = static_cast<int>(chains[0].beta.cols());
  const int G = static_cast<int>(sizes.size());
  std::vector<int> group_of;
  for (int g = 0; g < G; ++g) group_of.insert(group_of.end(), sizes[g], g);

  Eigen::Index total = 0;
  double seconds = 0.0;
  for (const auto& c : chains) {
    if (c.beta.cols() != p) throw ParameterDomainError("summarize: chains differ in dimension");
    total += c.size();
    seconds += c.wall_seconds;
  }

  ChainSummary out;
  out.mean.resize(p);
  out.ci_lower.resize(p);
  out.ci_upper.resize(p);
  out.ess.resize(p);
  out.ess_per_second.resize(p);
  out.kappa_mean.resize(p);
  if (chains.size() >= 2) out.psrf = Vector(p);

  const double tail = 0.5 * (1.0 - level);
  for (int k = 0; k < p; ++k) {
    std::vector<Vector> columns;
    Vector pooled(total);
    double kappa_sum = 0.0;
    Eigen::Index at = 0;
    for (const auto& c : chains) {
      Vector col = c.beta.col(k);
      if (transform == Transform::FoldChange) col = col.unaryExpr([](double b) { return fold_change(b); });
      pooled.segment(at, col.size()) = col;
      at += col.size();
      for (int t = 0; t < c.size(); ++t) {
        const double scale = c.scalar(t, 0) * c.scales(t, group_of[k]) * c.scales(t, G + k);
        kappa_sum += c.scalar(t, 1) / (c.scalar(t, 1) + scale);
      }
      columns.push_back(std::move(col));
    }
    out.mean[k] = pooled.mean();
    out.ci_lower[k] = quantile(pooled, tail);
    out.ci_upper[k] = quantile(pooled, 1.0 - tail);
    out.kappa_mean[k] = kappa_sum / static_cast<double>(total);
    double e = 0.0;
    try {
      for (const auto& col : columns) e += ess(col);
    } catch (const DegenerateChainError&) {
      e = std::numeric_limits<double>::quiet_NaN();
    } catch (const ParameterDomainError&) {
      e = std::numeric_limits<double>::quiet_NaN();
    }
    out.ess[k] = e;
    out.ess_per_second[k] = seconds > 0.0 ? e / seconds : std::numeric_limits<double>::quiet_NaN();
    if (out.psrf) {
      try {
        (*out.psrf)[k] = psrf(columns);
      } catch (const Error&) {
        (*out.psrf)[k] = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  return out;
}

ChainSummary summarize(const PosteriorDraws& draws, double level, Transform transform) {
  return summarize(std::span<const PosteriorDraws>(&draws, 1), level, transform);
}

double max_eigenvalue_gram(const Matrix& block) {
  if (block.size() == 0) throw ParameterDomainError("concentration_bound: empty block");
  const Matrix gram = block.transpose() * block;
  Rng rng(0x5eed);
  Vector v(gram.rows());
  for (auto& x : v) x = 1.0 + rng.uniform();
  v.normalize();
  double theta = v.dot(gram * v);
  for (int iter = 0; iter < 100000; ++iter) {
    Vector w = gram * v;
    const double norm = w.norm();
    if (!(norm > 0.0)) return 0.0;
    w /= norm;
    const double next = w.dot(gram * w);
    const double residual = (gram * w - next * w).norm();
    v = std::move(w);
    if (std::abs(next - theta) <= 1e-12 * next && residual <= 1e-6 * next) return next;
    theta = next;
  }
  std::ostringstream msg;
  msg << "power iteration did not converge; last estimate " << theta;
  throw NumericError(msg.str(), theta);
}

double concentration_bound(const Matrix& block, double tau2, double sigma2) {
  if (!(tau2 > 0.0) || !(sigma2 > 0.0)) {
    throw ParameterDomainError("concentration_bound: tau2 and sigma2 must be positive");
  }
  const double theta = max_eigenvalue_gram(block);
  return sigma2 / (sigma2 + theta * tau2);
}

}  // namespace gigg
