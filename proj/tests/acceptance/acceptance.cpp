// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.
//
//   acceptance [--only 1,3,...] [--replicates N]

#include <CLI11.hpp>
#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "geweke.hpp"
#include "gigg/diagnostics.hpp"
#include "gigg/distributions.hpp"
#include "gigg/io.hpp"
#include "gigg/model.hpp"
#include "gigg/sampler.hpp"
#include "gigg/simulation.hpp"
#include "support.hpp"

using gigg::Matrix;
using gigg::Vector;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

// Non-decreasing and not constant.
bool monotone_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] >= v[i - 1])) return false;
  }
  return v.back() > v.front();
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::vector<const char*> argv{"gigg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  const int code = gigg::cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << e.str();
  return code;
}

// ---------------------------------------------------------------- 1 and 2

struct MseTable {
  // label -> (null, non-null) in stratum-sum units
  std::map<std::string, std::pair<double, double>> rows;
  int failed = 0;
};

MseTable simulate(gigg::PatternKind pattern, int replicates, const std::vector<std::string>& methods) {
  gigg::SimulationScenario s;
  s.pattern.kind = pattern;
  s.seed = pattern == gigg::PatternKind::Concentrated ? 2024 : 2025;
  std::vector<gigg::MethodSpec> specs;
  for (const auto& m : methods) specs.push_back(gigg::MethodSpec::parse(m));
  gigg::SamplerConfig cfg;
  cfg.burn_in = 10000;
  cfg.draws = 10000;
  const auto result = gigg::run_simulation(s, specs, replicates, cfg, gigg::cli::resolve_threads(std::nullopt));
  MseTable table;
  for (const auto& m : result.methods) {
    for (const auto& f : m.failures) table.failed += f.empty() ? 0 : 1;
    const auto r = gigg::mse_report(m.estimates, result.truths, true);
    table.rows[m.method.label()] = {r.null_mse.value_or(NAN), r.nonnull_mse.value_or(NAN)};
  }
  return table;
}

const std::vector<std::string> kMethods{"gigg-fixed:1/n,1/n", "gigg-fixed:1/n,0.5", "gigg-fixed:1/n,1",
                                        "gigg-mmle", "ols"};

struct Table1 {
  MseTable concentrated;
  MseTable distributed;
  bool ready = false;
};

Table1& table1(int replicates) {
  static Table1 t;
  if (!t.ready) {
    t.concentrated = simulate(gigg::PatternKind::Concentrated, replicates, kMethods);
    t.distributed = simulate(gigg::PatternKind::Distributed, replicates, kMethods);
    t.ready = true;
  }
  return t;
}

Outcome criterion1(int replicates) {
  const auto& t = table1(replicates).concentrated;
  const auto [gn, gnn] = t.rows.at("gigg-fixed:1/n,1/n");
  const double ols_null = t.rows.at("ols").first;
  const bool pass = t.failed == 0 && gn >= 0.07 && gn <= 0.16 && gnn >= 0.22 && gnn <= 0.40 &&
                    std::abs(ols_null - 3.74) <= 0.2 * 3.74;
  return {pass, "GIGG(1/n,1/n) null " + fmt(gn) + " in [0.07,0.16], non-null " + fmt(gnn) +
                    " in [0.22,0.40]; OLS null " + fmt(ols_null) + " vs 3.74 +-20%; " +
                    std::to_string(replicates) + " replicates, " + std::to_string(t.failed) + " failures"};
}

Outcome criterion2(int replicates) {
  const auto& t = table1(replicates);
  const auto& c = t.concentrated.rows;
  const auto& d = t.distributed.rows;
  const bool i = c.at("gigg-fixed:1/n,1/n").second < c.at("gigg-fixed:1/n,1").second;
  const bool ii = d.at("gigg-fixed:1/n,1").second < d.at("gigg-fixed:1/n,1/n").second;
  auto best_fixed = [](const std::map<std::string, std::pair<double, double>>& rows) {
    double best = INFINITY;
    for (const auto& [label, v] : rows) {
      if (label.rfind("gigg-fixed", 0) == 0) best = std::min(best, v.second);
    }
    return best;
  };
  const double bc = best_fixed(c), bd = best_fixed(d);
  const double mc = c.at("gigg-mmle").second, md = d.at("gigg-mmle").second;
  const bool iii = mc <= 1.25 * bc && md <= 1.25 * bd;
  std::ostringstream os;
  os << "(i) concentrated non-null b=1/n " << fmt(c.at("gigg-fixed:1/n,1/n").second) << " < b=1 "
     << fmt(c.at("gigg-fixed:1/n,1").second) << (i ? " ok" : " NO") << "; (ii) distributed non-null b=1 "
     << fmt(d.at("gigg-fixed:1/n,1").second) << " < b=1/n " << fmt(d.at("gigg-fixed:1/n,1/n").second)
     << (ii ? " ok" : " NO") << "; (iii) MMLE " << fmt(mc) << " vs best fixed " << fmt(bc) << ", " << fmt(md)
     << " vs " << fmt(bd) << (iii ? " ok" : " NO") << "; distributed null: b=1/n " << fmt(d.at("gigg-fixed:1/n,1/n").first)
     << ", MMLE " << fmt(d.at("gigg-mmle").first);
  return {t.concentrated.failed + t.distributed.failed == 0 && i && ii && iii, os.str()};
}

// ---------------------------------------------------------------- 3

Outcome criterion3() {
  testing::GewekeSetup setup;
  setup.sweeps = 100000;
  const auto good = testing::run_geweke(setup);
  const auto bad = testing::run_geweke(setup, testing::corrupted_lambda_sweep);
  const bool pass = good.max_abs_z() < 4.0 && bad.max_abs_z() >= 4.0;
  return {pass, "correct sampler max |z| " + fmt(good.max_abs_z()) + " over " + std::to_string(good.z.size()) +
                    " statistics (< 4); corrupted lambda update max |z| " + fmt(bad.max_abs_z()) + " (>= 4)"};
}

// ---------------------------------------------------------------- 4

Outcome criterion4() {
  bool pass = true;
  std::ostringstream os;
  for (double b : {0.25, 0.5, 1.0, 2.0}) {
    std::vector<double> lx, ly;
    for (int i = 0; i <= 40; ++i) {
      const double beta = std::pow(10.0, 2.0 + 2.0 * i / 40.0);
      lx.push_back(std::log(beta));
      ly.push_back(std::log(gigg::marginal_prior_pdf(beta, 1.0, 0.5, b)));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    const double slope = sxy / sxx;
    const double ratio = gigg::marginal_prior_pdf(1e3, 1.0, 0.5, b) / gigg::tail_rate(1e3, 1.0, 0.5, b);
    const bool ok = std::abs(slope + 1.0 + 2.0 * b) <= 0.05 && std::abs(ratio - 1.0) <= 0.02;
    pass = pass && ok;
    os << "b=" << b << ": slope " << fmt(slope, 6) << " (target " << -(1 + 2 * b) << "), ratio " << fmt(ratio, 6)
       << "; ";
  }
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 5, 6, 7

gigg::PosteriorDraws normal_means_chain(const Vector& y, std::vector<int> groups, double a, double b, double tau2,
                                        std::uint64_t seed) {
  const int n = static_cast<int>(y.size());
  gigg::GroupedDesign d(y, Matrix(), Matrix::Identity(n, n), std::move(groups));
  gigg::SamplerConfig cfg;
  cfg.burn_in = 10000;
  cfg.draws = 10000;
  cfg.seed = seed;
  cfg.fixed_tau2 = tau2;
  cfg.fixed_sigma2 = 1.0;
  return gigg::run_chain(d, gigg::Hyperparameters::uniform(static_cast<int>(d.groups()), a, b), cfg);
}

double kappa(const gigg::PosteriorDraws& d, int t, int k) {
  const int G = static_cast<int>(d.group_sizes.size());
  int g = 0;
  for (int acc = d.group_sizes[0]; k >= acc; acc += d.group_sizes[++g]) {
  }
  const double scale = d.scalar(t, 0) * d.scales(t, g) * d.scales(t, G + k);
  return d.scalar(t, 1) / (d.scalar(t, 1) + scale);
}

Outcome criterion5() {
  std::vector<double> prob;
  std::uint64_t seed = 50;
  for (double tau2 : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const auto d = normal_means_chain(Vector::Zero(10), {5, 5}, 0.5, 0.5, tau2, seed++);
    long hits = 0;
    for (int t = 0; t < d.size(); ++t) {
      for (int k = 0; k < 10; ++k) hits += kappa(d, t, k) >= 0.9;
    }
    prob.push_back(static_cast<double>(hits) / (10.0 * d.size()));
  }
  const bool pass = monotone_increasing(prob) && prob.back() > 0.99;
  return {pass, "P(kappa >= 0.9) at tau2 = 1e-1..1e-4: " + list(prob) + "; need non-decreasing and last > 0.99"};
}

Outcome criterion6() {
  std::vector<double> prob;
  std::uint64_t seed = 60;
  for (double y11 : {2.0, 5.0, 10.0, 20.0}) {
    Vector y = Vector::Zero(10);
    y[0] = y11;
    const auto d = normal_means_chain(y, {5, 5}, 0.5, 0.5, 0.1, seed++);
    long hits = 0;
    for (int t = 0; t < d.size(); ++t) hits += kappa(d, t, 0) <= 0.5;
    prob.push_back(static_cast<double>(hits) / d.size());
  }
  const bool pass = monotone_increasing(prob) && prob.back() > 0.95;
  return {pass, "P(kappa_11 <= 0.5) at y_11 = 2, 5, 10, 20: " + list(prob) + "; need non-decreasing and last > 0.95"};
}

Outcome criterion7() {
  const double tau2 = 0.1, sigma2 = 1.0;
  const double eps = 1.0 / 3.7;
  std::vector<double> prob;
  std::uint64_t seed = 70;
  for (double b : {1.0, 4.0, 16.0, 64.0}) {
    const auto d = normal_means_chain(Vector::Zero(3), {3}, 0.5, b, tau2, seed++);
    // kappa < eps iff lambda2 > (1/eps - 1) sigma2 / (tau2 gamma2); averaged
    // over the lambda2 full conditional IG(b + 1/2, 1 + beta^2 / (2 tau2 gamma2)).
    double sum = 0.0;
    for (int t = 0; t < d.size(); ++t) {
      const double gamma2 = d.scales(t, 0);
      for (int k = 0; k < 3; ++k) {
        const double beta = d.beta(t, k);
        const double rate = 1.0 + beta * beta / (2.0 * tau2 * gamma2);
        const double threshold = (1.0 / eps - 1.0) * sigma2 / (tau2 * gamma2);
        sum += boost::math::gamma_p(b + 0.5, rate / threshold);
      }
    }
    prob.push_back(sum / (3.0 * d.size()));
  }
  std::vector<double> neg(prob.size());
  std::transform(prob.begin(), prob.end(), neg.begin(), [](double p) { return -p; });
  const bool pass = monotone_increasing(neg);
  return {pass, "P(kappa < " + fmt(eps) + ") at b = 1, 4, 16, 64: " + list(prob) + "; need non-increasing"};
}

// ---------------------------------------------------------------- 8

double surface_value(const std::string& csv, double y1, double y2) {
  const auto rows = gigg::parse_csv(csv);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (std::stod(rows[i][0]) == y1 && std::stod(rows[i][1]) == y2) return std::stod(rows[i][2]);
  }
  return NAN;
}

Outcome criterion8() {
  std::string coupled, individual;
  const int c1 = run_cli({"prior", "posterior-mean-surface", "--a", "0.05", "--b", "2", "--tau2", "0.2", "--sigma2", "1",
                          "--grid", "0:10:3"},
                         &coupled);
  const int c2 = run_cli({"prior", "posterior-mean-surface", "--a", "0.05", "--b", "0.05", "--tau2", "0.2", "--sigma2",
                          "1", "--grid", "0:10:3"},
                         &individual);
  if (c1 != 0 || c2 != 0) return {false, "prior command failed"};
  const double lo = surface_value(coupled, 5, 0), hi = surface_value(coupled, 5, 10);
  const double ilo = surface_value(individual, 5, 0), ihi = surface_value(individual, 5, 10);
  const double rel = std::abs(ilo - ihi) / std::max(std::abs(ilo), std::abs(ihi));
  const bool pass = lo < 0.6 * hi && rel < 0.1;
  return {pass, "b=2: E[beta_g1|(5,0)] " + fmt(lo) + " < 0.6 * E[beta_g1|(5,10)] " + fmt(0.6 * hi) +
                    "; b=0.05: " + fmt(ilo) + " vs " + fmt(ihi) + " differ by " + fmt(100 * rel, 3) + "% (< 10%)"};
}

// ---------------------------------------------------------------- 9

Outcome criterion9() {
  double worst_ks = 0.0, worst_mass = 0.0;
  std::string worst_ks_case, worst_mass_case;
  auto ks_note = [&](double ks, const std::string& name) {
    if (ks > worst_ks) worst_ks = ks, worst_ks_case = name;
  };
  auto mass_note = [&](double mass, const std::string& name) {
    if (std::abs(mass - 1.0) >= worst_mass) worst_mass = std::abs(mass - 1.0), worst_mass_case = name;
  };
  auto draws = [](int n, const std::function<double()>& f) {
    std::vector<double> v(n);
    for (auto& x : v) x = f();
    return v;
  };
  gigg::Rng rng(9);
  for (double lam : {-2.0, -0.5, 0.5, 3.0}) {
    for (double psi : {0.1, 1.0, 10.0}) {
      for (double chi : {0.1, 1.0, 10.0}) {
        const gigg::GigParams p{lam, psi, chi};
        const std::string name = "GIG(" + fmt(lam) + "," + fmt(psi) + "," + fmt(chi) + ")";
        mass_note(testing::total_mass([&](double x) { return gigg::gig_pdf(x, p); }), name);
        const auto x = draws(100000, [&] { return gigg::gig_sample(rng, p); });
        ks_note(testing::ks_from_density(x, [&](double v) { return gigg::gig_pdf(v, p); }), name);
      }
    }
  }
  for (double a : {0.05, 0.5, 1.0, 2.0}) {
    for (double b : {0.05, 0.5, 1.0, 2.0}) {
      const std::string ab = fmt(a) + "," + fmt(b);
      mass_note(testing::total_mass([&](double x) { return gigg::beta_prime_pdf(x, a, b); }), "BetaPrime(" + ab + ")");
      mass_note(testing::total_mass([&](double x) { return gigg::gamma_pdf(x, a, b); }), "Gamma(" + ab + ")");
      mass_note(testing::total_mass([&](double x) { return gigg::inverse_gamma_pdf(x, a, b); }), "InvGamma(" + ab + ")");
      const auto g = draws(100000, [&] { return gigg::sample_gamma(rng, a, b); });
      ks_note(testing::ks_from_density(g, [&](double v) { return gigg::gamma_pdf(v, a, b); }), "Gamma(" + ab + ")");
      const auto ig = draws(100000, [&] { return gigg::sample_inverse_gamma(rng, a, b); });
      ks_note(testing::ks_from_density(ig, [&](double v) { return gigg::inverse_gamma_pdf(v, a, b); }),
              "InvGamma(" + ab + ")");
    }
  }
  for (double scale : {0.5, 1.0, 2.0}) {
    const std::string name = "HalfCauchy(" + fmt(scale) + ")";
    mass_note(testing::total_mass([&](double x) { return gigg::half_cauchy_pdf(x, scale); }), name);
    const auto hc = draws(100000, [&] { return gigg::basic_sample(rng, gigg::BasicKind::HalfCauchy, 1.0, scale); });
    ks_note(testing::ks_from_density(hc, [&](double v) { return gigg::half_cauchy_pdf(v, scale); }), name);
  }
  const bool pass = worst_ks < 0.01 && worst_mass <= 1e-6;
  return {pass, "worst KS " + fmt(worst_ks) + " (" + worst_ks_case + ", < 0.01); worst |mass - 1| " +
                    fmt(worst_mass, 3) + " (" + worst_mass_case + ", <= 1e-6)"};
}

// ---------------------------------------------------------------- 10

Outcome criterion10() {
  std::ostringstream os;
  bool pass = true;
  gigg::Rng rng(10);
  gigg::PosteriorMeanOptions quad;
  quad.method = gigg::PosteriorMeanOptions::Method::Quadrature;
  os << "normal means |z|:";
  for (int inst = 0; inst < 5; ++inst) {
    Vector y(6);
    for (auto& v : y) v = 3.0 * rng.normal();
    const double a = 0.1 + 0.9 * rng.uniform();
    const double b = 0.1 + 1.9 * rng.uniform();
    const double tau2 = 0.1 + 0.9 * rng.uniform();
    gigg::GroupedDesign d(y, Matrix(), Matrix::Identity(6, 6), {3, 3});
    gigg::SamplerConfig cfg;
    cfg.burn_in = 5000;
    cfg.draws = 200000;
    cfg.seed = 100 + inst;
    cfg.fixed_tau2 = tau2;
    cfg.fixed_sigma2 = 1.0;
    const auto out = gigg::run_chain(d, gigg::Hyperparameters::uniform(2, a, b), cfg);
    const std::vector<double> yg(y.data(), y.data() + 3);
    const double expected = gigg::normal_means_posterior_mean(yg, tau2, 1.0, a, b, 0, quad).value;
    const Vector col = out.beta.col(0);
    const double sd = std::sqrt((col.array() - col.mean()).square().sum() / (col.size() - 1.0));
    const double z = (col.mean() - expected) / (sd / std::sqrt(gigg::ess(col)));
    pass = pass && std::abs(z) < 3.0;
    os << " " << fmt(std::abs(z), 3);
  }

  // Direct and Woodbury beta updates from one fixed state.
  const int n = 20, p = 50, N = 100000;
  gigg::Rng setup(23);
  Matrix X(n, p);
  for (int i = 0; i < X.size(); ++i) X.data()[i] = setup.normal();
  Vector y(n);
  for (auto& v : y) v = 3.0 * setup.normal();
  gigg::GroupedDesign d(y, Matrix::Ones(n, 1), X, {10, 10, 10, 10, 10});
  gigg::GiggState base;
  base.alpha = Vector::Constant(1, 0.3);
  base.tau2 = 0.7;
  base.sigma2 = 1.3;
  base.nu = 1.0;
  base.gamma2 = Vector(5);
  for (auto& g : base.gamma2) g = 0.2 + setup.uniform();
  base.lambda2 = Vector(p);
  for (auto& l : base.lambda2) l = 0.1 + 2.0 * setup.uniform();
  base.beta = Vector::Zero(p);
  // Columns: E[beta], E[beta^2], E[beta^4].
  std::vector<Matrix> moments;
  for (bool woodbury : {false, true}) {
    gigg::GiggSampler s(d, gigg::Hyperparameters::uniform(5, 0.5, 0.5), gigg::SamplerConfig{});
    gigg::GiggState st = base;
    gigg::Rng r(woodbury ? 32 : 31);
    Matrix sum = Matrix::Zero(p, 3);
    for (int t = 0; t < N; ++t) {
      if (woodbury) {
        s.update_beta_woodbury(st, r);
      } else {
        s.update_beta_direct(st, r);
      }
      const auto b = st.beta.array();
      sum.col(0).array() += b;
      sum.col(1).array() += b.square();
      sum.col(2).array() += b.square().square();
    }
    moments.push_back(sum / N);
  }
  double worst = 0.0;
  for (int j = 0; j < p; ++j) {
    for (int k : {0, 1}) {
      auto var = [&](const Matrix& m) { return m(j, k + 1) - m(j, k) * m(j, k); };
      const double se = std::sqrt((var(moments[0]) + var(moments[1])) / N);
      worst = std::max(worst, std::abs(moments[0](j, k) - moments[1](j, k)) / se);
    }
  }
  pass = pass && worst < 4.0;
  os << " (< 3); direct vs Woodbury first/second moments max |z| " << fmt(worst, 3) << " over " << 2 * p
     << " moments (< 4)";
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 11

Outcome criterion11() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gigg_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  gigg::Rng rng(11);
  gigg::CsvWriter data;
  data.row({"y", "x1", "x2", "x3", "x4", "x5", "x6", "age"});
  for (int i = 0; i < 80; ++i) {
    std::vector<double> v(7);
    for (auto& x : v) x = rng.normal();
    const double y = 1.5 * v[0] - v[3] + 0.3 * v[6] + rng.normal();
    std::vector<std::string> row{gigg::format_double(y)};
    for (double x : v) row.push_back(gigg::format_double(x));
    data.row(row);
  }
  gigg::write_file_atomic((dir / "data.csv").string(), data.text);
  gigg::write_file_atomic((dir / "groups.csv").string(), "column,group\nx1,g1\nx2,g1\nx3,g1\nx4,g2\nx5,g2\nx6,g2\n");
  auto fit = [&](const std::string& out) {
    return run_cli({"fit", "--data", (dir / "data.csv").string(), "--response", "y", "--groups",
                    (dir / "groups.csv").string(), "--adjust", "age", "--out", (dir / out).string(), "--burnin",
                    "2000", "--draws", "2000", "--chains", "2", "--seed", "77"});
  };
  // Same output directory both times, so the manifests can match too.
  if (fit("run") != 0) return {false, "first fit failed"};
  auto snapshot = [&] {
    std::vector<std::string> files;
    for (const char* f : {"draws_chain1.bin", "draws_chain2.bin", "summary.csv", "manifest.txt"}) {
      files.push_back(gigg::read_file((dir / "run" / f).string()));
    }
    return files;
  };
  const auto first = snapshot();
  if (fit("run") != 0) return {false, "second fit failed"};
  const auto second = snapshot();
  const bool pass = first == second && first[0] != first[1];
  return {pass, std::string("draw files, summary and manifest ") + (first == second ? "byte-identical" : "DIFFER") +
                    " across two runs (" + std::to_string(first[0].size()) + " bytes per draw file)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::vector<int> only;
  int replicates = 200;
  app.add_option("--only", only, "Criteria to run")->delimiter(',');
  app.add_option("--replicates", replicates, "Replicates for the MSE criteria");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected(only.begin(), only.end());

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"simulation MSE at the reference scale (concentrated, rho = 0.8)", [&] { return criterion1(replicates); }},
      {"simulation MSE orderings across b", [&] { return criterion2(replicates); }},
      {"Geweke joint-distribution test and its sensitivity", criterion3},
      {"marginal prior tail law", criterion4},
      {"concentration of null shrinkage factors as tau2 -> 0", criterion5},
      {"tail robustness of a large observation", criterion6},
      {"group shrinkage decreases in b", criterion7},
      {"posterior mean surface coupling", criterion8},
      {"distribution samplers and densities", criterion9},
      {"quadrature vs Gibbs and direct vs Woodbury", criterion10},
      {"fit determinism", criterion11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << " | " << o.detail
              << " | " << fmt(secs, 3) << " s" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
