#include "gigg/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "gigg/errors.hpp"

namespace gigg {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ScenarioError("scenario: cannot parse " + what + " from '" + t + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(item, what));
  if (out.empty()) throw ScenarioError("scenario: empty list for " + what);
  return out;
}

bool is_standard_layout(const std::vector<int>& sizes) {
  return sizes == std::vector<int>{10, 10, 10, 10, 10};
}

}  // namespace

CoefficientPattern CoefficientPattern::parse(const std::string& name) {
  CoefficientPattern p;
  if (name == "concentrated") {
    p.kind = PatternKind::Concentrated;
  } else if (name == "distributed") {
    p.kind = PatternKind::Distributed;
  } else if (name == "random") {
    p.kind = PatternKind::Random;
  } else if (name == "explicit") {
    p.kind = PatternKind::Explicit;
  } else {
    throw ScenarioError("unknown coefficient pattern '" + name + "'");
  }
  return p;
}

std::string CoefficientPattern::name() const {
  switch (kind) {
    case PatternKind::Concentrated: return "concentrated";
    case PatternKind::Distributed: return "distributed";
    case PatternKind::Random: return "random";
    case PatternKind::Explicit: return "explicit";
  }
  return "";
}

int SimulationScenario::p() const {
  return std::accumulate(group_sizes.begin(), group_sizes.end(), 0);
}

Matrix SimulationScenario::covariance() const {
  const int dim = p();
  Matrix sigma = Matrix::Constant(dim, dim, rho_between);
  int at = 0;
  for (int size : group_sizes) {
    sigma.block(at, at, size, size).setConstant(rho_within);
    at += size;
  }
  sigma.diagonal().setOnes();
  return sigma;
}

void SimulationScenario::validate() const {
  if (n < 2) throw ScenarioError("scenario: n must be at least 2");
  if (group_sizes.empty()) throw ScenarioError("scenario: no groups");
  for (int s : group_sizes) {
    if (s < 1) throw ScenarioError("scenario: group sizes must be positive");
  }
  if (!(rho_within > -1.0 && rho_within < 1.0)) {
    throw ScenarioError("scenario: rho_within must lie in (-1, 1)");
  }
  if (!(rho_between > -1.0 && rho_between < 1.0)) {
    throw ScenarioError("scenario: rho_between must lie in (-1, 1)");
  }
  if (!(r_squared > 0.0 && r_squared < 1.0)) throw ScenarioError("scenario: r_squared must lie in (0, 1)");
  if (q_adjust < 0) throw ScenarioError("scenario: q_adjust must be non-negative");
  if (n <= p() + q_adjust + 1) {
    throw ScenarioError("scenario: n must exceed the number of regression columns");
  }
  if (pattern.kind == PatternKind::Explicit && pattern.values.size() != p()) {
    throw ScenarioError("scenario: explicit beta has the wrong length");
  }
  if ((pattern.kind == PatternKind::Concentrated || pattern.kind == PatternKind::Distributed) &&
      !is_standard_layout(group_sizes)) {
    throw ScenarioError("scenario: the " + pattern.name() + " pattern needs five groups of 10");
  }
  const Eigen::LLT<Matrix> llt(covariance());
  const double min_pivot =
      llt.info() == Eigen::Success ? llt.matrixLLT().diagonal().minCoeff() : 0.0;
  if (!(min_pivot * min_pivot > 1e-10)) {
    throw ScenarioError("scenario: correlation matrix is not positive definite");
  }
}

SimulationScenario SimulationScenario::parse(std::istream& in) {
  SimulationScenario s;
  std::optional<Vector> beta;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ScenarioError("scenario line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "n") {
      s.n = parse_number<int>(value, key);
    } else if (key == "group_sizes") {
      s.group_sizes = parse_list<int>(value, key);
    } else if (key == "rho_within") {
      s.rho_within = parse_number<double>(value, key);
    } else if (key == "rho_between") {
      s.rho_between = parse_number<double>(value, key);
    } else if (key == "pattern" || key == "coeff_pattern") {
      s.pattern = CoefficientPattern::parse(value);
    } else if (key == "beta") {
      const auto v = parse_list<double>(value, key);
      beta = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
    } else if (key == "r_squared") {
      s.r_squared = parse_number<double>(value, key);
    } else if (key == "q_adjust") {
      s.q_adjust = parse_number<int>(value, key);
    } else if (key == "seed") {
      s.seed = parse_number<std::uint64_t>(value, key);
    } else {
      throw ScenarioError("scenario line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (beta) {
    if (s.pattern.kind != PatternKind::Explicit) {
      throw ScenarioError("scenario: beta is only allowed with pattern = explicit");
    }
    s.pattern.values = *beta;
  } else if (s.pattern.kind == PatternKind::Explicit) {
    throw ScenarioError("scenario: pattern = explicit needs a beta list");
  }
  s.validate();
  return s;
}

SimulationScenario SimulationScenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file " + path);
  return parse(in);
}

Vector coefficient_vector(const CoefficientPattern& pattern, const std::vector<int>& group_sizes,
                          Rng& rng) {
  const int p = std::accumulate(group_sizes.begin(), group_sizes.end(), 0);
  Vector beta = Vector::Zero(p);
  switch (pattern.kind) {
    case PatternKind::Concentrated: {
      if (!is_standard_layout(group_sizes)) {
        throw ScenarioError("concentrated pattern needs five groups of 10");
      }
      const double values[] = {0.5, 1.0, 1.5, 2.0, 2.0};
      for (int g = 0; g < 5; ++g) beta[10 * g] = values[g];
      break;
    }
    case PatternKind::Distributed:
      if (!is_standard_layout(group_sizes)) {
        throw ScenarioError("distributed pattern needs five groups of 10");
      }
      beta.head(5).setConstant(0.5);
      beta.segment(5, 5).setConstant(1.0);
      break;
    case PatternKind::Random: {
      int at = 0;
      for (std::size_t g = 0; g < group_sizes.size(); ++g) {
        const int size = group_sizes[g];
        if (size < 1) throw ScenarioError("random pattern needs non-empty groups");
        const double u = rng.uniform();
        // The first group always carries a signal.
        const bool concentrated = g == 0 ? u < 0.5 : u < 0.2;
        const bool distributed = g == 0 ? !concentrated : (u >= 0.2 && u < 0.4);
        if (concentrated) beta[at] = 5.125;
        if (distributed) beta.segment(at, size).setConstant(0.25);
        at += size;
      }
      break;
    }
    case PatternKind::Explicit:
      if (pattern.values.size() != p) throw ScenarioError("explicit beta has the wrong length");
      beta = pattern.values;
      break;
  }
  return beta;
}

double calibrate_noise(const Vector& beta, const Matrix& sigma_x, double r2) {
  if (!(r2 > 0.0 && r2 < 1.0)) throw ParameterDomainError("calibrate_noise: r2 must lie in (0, 1)");
  if (beta.size() != sigma_x.rows() || sigma_x.rows() != sigma_x.cols()) {
    throw ParameterDomainError("calibrate_noise: dimension mismatch");
  }
  const double signal = beta.dot(sigma_x * beta);
  if (!(signal > 0.0)) throw CalibrationError("calibrate_noise: beta carries no signal");
  return signal * (1.0 - r2) / r2;
}

SimulatedData generate_dataset(const SimulationScenario& s, std::uint64_t replicate) {
  s.validate();
  Rng rng(derive_seed(s.seed, replicate));
  const int p = s.p();
  const Matrix sigma = s.covariance();
  const Eigen::LLT<Matrix> llt(sigma);

  SimulatedData out;
  out.beta = coefficient_vector(s.pattern, s.group_sizes, rng);
  out.sigma2 = calibrate_noise(out.beta, sigma, s.r_squared);

  Matrix Z(s.n, p);
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < p; ++j) Z(i, j) = rng.normal();
  }
  Matrix X = Z * llt.matrixU();
  Matrix C(s.n, s.q_adjust + 1);
  C.col(0).setOnes();
  for (int i = 0; i < s.n; ++i) {
    for (int j = 1; j <= s.q_adjust; ++j) C(i, j) = rng.normal();
  }
  out.alpha = Vector::Ones(s.q_adjust + 1);
  out.alpha[0] = 0.0;
  Vector y = C * out.alpha + X * out.beta;
  const double sd = std::sqrt(out.sigma2);
  for (int i = 0; i < s.n; ++i) y[i] += sd * rng.normal();
  out.design = GroupedDesign(std::move(y), std::move(C), std::move(X), s.group_sizes);
  return out;
}

Vector ols_estimate(const GroupedDesign& design) {
  Matrix full(design.n(), design.q() + design.p());
  full << design.C(), design.X();
  const Eigen::ColPivHouseholderQR<Matrix> qr(full);
  if (qr.rank() < full.cols()) throw LinearAlgebraError("ols: design matrix is rank deficient");
  const Vector coef = qr.solve(design.y());
  return coef.tail(design.p());
}

MseReport mse_report(const Matrix& estimates, const Matrix& truths, bool stratum_sums) {
  if (estimates.rows() != truths.rows() || estimates.cols() != truths.cols()) {
    throw ParameterDomainError("mse_report: estimate and truth shapes differ");
  }
  MseReport r;
  double null_sum = 0.0, nonnull_sum = 0.0;
  for (Eigen::Index i = 0; i < truths.rows(); ++i) {
    for (Eigen::Index j = 0; j < truths.cols(); ++j) {
      const double e = estimates(i, j) - truths(i, j);
      if (truths(i, j) == 0.0) {
        null_sum += e * e;
        ++r.null_count;
      } else {
        nonnull_sum += e * e;
        ++r.nonnull_count;
      }
    }
  }
  const double reps = static_cast<double>(truths.rows());
  if (r.null_count > 0) r.null_mse = null_sum / (stratum_sums ? reps : static_cast<double>(r.null_count));
  if (r.nonnull_count > 0) {
    r.nonnull_mse = nonnull_sum / (stratum_sums ? reps : static_cast<double>(r.nonnull_count));
  }
  return r;
}

MethodSpec MethodSpec::parse(const std::string& token) {
  MethodSpec m;
  if (token == "ols") {
    m.kind = Kind::Ols;
    return m;
  }
  if (token == "gigg-mmle") {
    m.kind = Kind::GiggMmle;
    return m;
  }
  const std::string prefix = "gigg-fixed:";
  if (token.rfind(prefix, 0) == 0) {
    m.kind = Kind::GiggFixed;
    const std::string rest = token.substr(prefix.size());
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw InputError("method '" + token + "': expected gigg-fixed:A,B");
    auto value = [&](const std::string& text) {
      const std::string t = trim(text);
      if (t == "1/n") return -1.0;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !(v > 0.0) || !std::isfinite(v)) {
        throw InputError("method '" + token + "': bad hyperparameter '" + t + "'");
      }
      return v;
    };
    m.a = value(rest.substr(0, comma));
    m.b = value(rest.substr(comma + 1));
    return m;
  }
  throw InputError("unknown method '" + token + "'");
}

std::string MethodSpec::label() const {
  switch (kind) {
    case Kind::Ols: return "ols";
    case Kind::GiggMmle: return "gigg-mmle";
    case Kind::GiggFixed: {
      auto text = [](double v) {
        if (v < 0.0) return std::string("1/n");
        std::ostringstream os;
        os << v;
        return os.str();
      };
      return "gigg-fixed:" + text(a) + "," + text(b);
    }
  }
  return "";
}

Vector estimate_beta(const GroupedDesign& design, const MethodSpec& method, SamplerConfig config) {
  if (method.kind == MethodSpec::Kind::Ols) return ols_estimate(design);
  const double inv_n = 1.0 / design.n();
  Hyperparameters hyper;
  if (method.kind == MethodSpec::Kind::GiggFixed) {
    hyper = Hyperparameters::uniform(design.groups(), method.a < 0 ? inv_n : method.a,
                                     method.b < 0 ? inv_n : method.b);
    config.hyper_mode = HyperMode::Fixed;
  } else {
    hyper = Hyperparameters::uniform(design.groups(), inv_n, 0.5);
    config.hyper_mode = HyperMode::MmleB;
  }
  const PosteriorDraws draws = run_chain(design, hyper, config);
  return draws.beta.colwise().mean().transpose();
}

SimulationResult run_simulation(const SimulationScenario& s, const std::vector<MethodSpec>& methods,
                                int replicates, const SamplerConfig& config, int threads) {
  s.validate();
  if (replicates < 1) throw ParameterDomainError("run_simulation: replicates must be positive");
  if (methods.empty()) throw ParameterDomainError("run_simulation: no methods");
  const int p = s.p();
  SimulationResult result;
  result.truths = Matrix::Zero(replicates, p);
  result.sigma2 = Vector::Zero(replicates);
  for (const auto& m : methods) {
    result.methods.push_back(
        {m, Matrix::Constant(replicates, p, std::numeric_limits<double>::quiet_NaN()),
         std::vector<std::string>(replicates)});
  }

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < replicates; r = next++) {
      // Each replicate writes only its own rows.
      const SimulatedData data = generate_dataset(s, static_cast<std::uint64_t>(r));
      result.truths.row(r) = data.beta.transpose();
      result.sigma2[r] = data.sigma2;
      for (std::size_t m = 0; m < methods.size(); ++m) {
        SamplerConfig cfg = config;
        cfg.seed = derive_seed(derive_seed(s.seed, static_cast<std::uint64_t>(r)), m + 1);
        try {
          result.methods[m].estimates.row(r) = estimate_beta(data.design, methods[m], cfg).transpose();
        } catch (const Error& e) {
          result.methods[m].failures[r] = e.what();
        }
      }
    }
  };
  const int workers = std::max(1, std::min(threads, replicates));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return result;
}

}  // namespace gigg
