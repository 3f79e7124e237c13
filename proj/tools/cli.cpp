#include "cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "gigg/diagnostics.hpp"
#include "gigg/errors.hpp"
#include "gigg/io.hpp"
#include "gigg/model.hpp"
#include "gigg/sampler.hpp"
#include "gigg/simulation.hpp"

namespace gigg::cli {
namespace {

namespace fs = std::filesystem;

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

// key = value lines. The digest covers every line but itself.
class Manifest {
 public:
  void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }

  std::string render() const {
    std::string body;
    for (const auto& [k, v] : lines_) body += k + " = " + v + "\n";
    return body + "config_digest = " + hex(fnv1a(body)) + "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
};

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
// exception (lowest index) is rethrown after all workers finish.
template <typename Fn>
void parallel_for(int count, int threads, Fn fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::max(1, std::min(threads, count));
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string data;
  std::string response;
  std::string groups;
  std::string adjust;
  std::string out;
  int burn_in = 10000;
  int draws = 10000;
  int thin = 1;
  std::uint64_t seed = 1;
  int chains = 1;
  std::string hyper = "mmle";
  double ci = 0.95;
  std::string transform = "identity";
  std::string draws_format = "binary";
  std::optional<int> threads;
};

struct HyperChoice {
  bool mmle = true;
  double a = -1.0;  // negative: 1/n
  double b = -1.0;
};

HyperChoice parse_hyper(const std::string& text) {
  HyperChoice h;
  if (text == "mmle") return h;
  const std::string prefix = "fixed:";
  if (text.rfind(prefix, 0) != 0) throw InputError("--hyper must be 'mmle' or 'fixed:a=..,b=..'");
  h.mmle = false;
  bool have_a = false, have_b = false;
  for (const auto& part : split(text.substr(prefix.size()), ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw InputError("--hyper: expected key=value in '" + part + "'");
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    double v = -1.0;
    if (value != "1/n") {
      try {
        std::size_t used = 0;
        v = std::stod(value, &used);
        if (used != value.size() || !(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw InputError("--hyper: bad value '" + value + "'");
      }
    }
    if (key == "a") {
      h.a = v;
      have_a = true;
    } else if (key == "b") {
      h.b = v;
      have_b = true;
    } else {
      throw InputError("--hyper: unknown key '" + key + "'");
    }
  }
  if (!have_a || !have_b) throw InputError("--hyper fixed: needs both a and b");
  return h;
}

int fit_command(const FitArgs& args, std::ostream& out) {
  if (!(args.ci > 0.0 && args.ci < 1.0)) throw InputError("--ci must lie in (0, 1)");
  if (args.chains < 1) throw InputError("--chains must be at least 1");
  if (args.transform != "identity" && args.transform != "fold-change") {
    throw InputError("--transform must be identity or fold-change");
  }
  if (args.draws_format != "binary" && args.draws_format != "csv") {
    throw InputError("--draws-format must be binary or csv");
  }
  const HyperChoice choice = parse_hyper(args.hyper);
  const NumericTable table = read_numeric_csv(args.data);
  const auto map = read_group_map(args.groups);
  const int n = static_cast<int>(table.values.rows());
  if (n < 2) throw InputError(args.data + ": at least two data rows are required");

  std::map<std::string, int> column_index;
  for (std::size_t j = 0; j < table.names.size(); ++j) {
    if (!column_index.emplace(table.names[j], static_cast<int>(j)).second) {
      throw SchemaError(args.data + ": duplicate column '" + table.names[j] + "'");
    }
  }
  auto lookup = [&](const std::string& name, const std::string& role) {
    const auto it = column_index.find(name);
    if (it == column_index.end()) throw SchemaError(role + " column '" + name + "' not found in " + args.data);
    return it->second;
  };
  const int response = lookup(args.response, "response");

  // Groups in order of first appearance; columns keep map order within a group.
  std::vector<std::string> labels;
  std::map<std::string, std::vector<std::string>> members;
  std::set<std::string> seen;
  for (const auto& [col, label] : map) {
    lookup(col, "group map");
    if (col == args.response) throw SchemaError("group map assigns the response column '" + col + "'");
    if (!seen.insert(col).second) throw SchemaError("group map lists column '" + col + "' twice");
    if (!members.count(label)) labels.push_back(label);
    members[label].push_back(col);
  }
  const std::vector<std::string> adjust = split(args.adjust, ',');
  for (const auto& col : adjust) {
    lookup(col, "adjustment");
    if (seen.count(col) || col == args.response) {
      throw SchemaError("adjustment column '" + col + "' is also the response or a grouped column");
    }
  }

  Manifest manifest;
  manifest.add("command", "fit");
  manifest.add("version", kVersion);
  manifest.add("inputs", args.data + ";" + args.groups);
  manifest.add("output_dir", args.out);
  manifest.add("seed", std::to_string(args.seed));
  manifest.add("response", args.response);
  manifest.add("adjust", join(adjust, ","));
  manifest.add("burnin", std::to_string(args.burn_in));
  manifest.add("draws", std::to_string(args.draws));
  manifest.add("thin", std::to_string(args.thin));
  manifest.add("chains", std::to_string(args.chains));
  manifest.add("hyper", args.hyper);
  manifest.add("ci", format_double(args.ci));
  manifest.add("transform", args.transform);
  manifest.add("draws_format", args.draws_format);

  Vector y = table.values.col(response);
  const double y_center = y.mean();
  y.array() -= y_center;
  manifest.add("response_center", format_double(y_center));

  std::vector<int> sizes;
  std::vector<std::string> names, group_of_name;
  for (const auto& label : labels) {
    sizes.push_back(static_cast<int>(members[label].size()));
    for (const auto& col : members[label]) {
      names.push_back(col);
      group_of_name.push_back(label);
    }
  }
  const int p = static_cast<int>(names.size());
  Matrix X(n, p);
  for (int k = 0; k < p; ++k) {
    Vector col = table.values.col(column_index[names[k]]);
    const double m = col.mean();
    const double sd = std::sqrt((col.array() - m).square().sum() / (n - 1.0));
    if (!(sd > 0.0)) throw InputError("column '" + names[k] + "' is constant and cannot be standardized");
    X.col(k) = (col.array() - m) / sd;
    manifest.add("scale." + names[k], format_double(m) + "," + format_double(sd));
  }
  Matrix C(n, static_cast<int>(adjust.size()));
  for (std::size_t k = 0; k < adjust.size(); ++k) {
    Vector col = table.values.col(column_index[adjust[k]]);
    const double m = col.mean();
    C.col(static_cast<Eigen::Index>(k)) = col.array() - m;
    manifest.add("center." + adjust[k], format_double(m));
  }
  const GroupedDesign design(y, C, X, sizes);

  const double inv_n = 1.0 / n;
  Hyperparameters hyper =
      choice.mmle ? Hyperparameters::uniform(design.groups(), inv_n, 0.5)
                  : Hyperparameters::uniform(design.groups(), choice.a < 0 ? inv_n : choice.a,
                                             choice.b < 0 ? inv_n : choice.b);
  SamplerConfig cfg;
  cfg.burn_in = args.burn_in;
  cfg.draws = args.draws;
  cfg.thin = args.thin;
  cfg.hyper_mode = choice.mmle ? HyperMode::MmleB : HyperMode::Fixed;
  cfg.validate();

  std::vector<PosteriorDraws> chains(args.chains);
  parallel_for(args.chains, resolve_threads(args.threads), [&](int c) {
    SamplerConfig local = cfg;
    local.seed = derive_seed(args.seed, static_cast<std::uint64_t>(c));
    chains[c] = run_chain(design, hyper, local);
  });

  ensure_dir(args.out);
  std::vector<std::string> draw_names = names;
  for (const auto& col : adjust) draw_names.push_back("alpha." + col);
  for (const char* s : {"tau2", "sigma2", "nu"}) draw_names.push_back(s);
  for (const auto& label : labels) draw_names.push_back("gamma2." + label);
  for (const auto& col : names) draw_names.push_back("lambda2." + col);
  manifest.add("draw_columns", join(draw_names, ","));

  for (int c = 0; c < args.chains; ++c) {
    const auto& d = chains[c];
    Matrix all(d.size(), static_cast<Eigen::Index>(draw_names.size()));
    all << d.beta, d.alpha, d.scalar, d.scales;
    const std::string stem = "draws_chain" + std::to_string(c + 1);
    if (args.draws_format == "binary") {
      write_file_atomic(join_path(args.out, stem + ".bin"), encode_draws_binary(all));
    } else {
      CsvWriter w;
      w.row(draw_names);
      for (Eigen::Index i = 0; i < all.rows(); ++i) {
        std::vector<std::string> fields;
        for (Eigen::Index j = 0; j < all.cols(); ++j) fields.push_back(format_double(all(i, j)));
        w.row(fields);
      }
      write_file_atomic(join_path(args.out, stem + ".csv"), w.text);
    }
    std::vector<std::string> b;
    for (Eigen::Index g = 0; g < d.hyper.b.size(); ++g) b.push_back(format_double(d.hyper.b[g]));
    manifest.add("chain" + std::to_string(c + 1) + ".b", join(b, ","));
    manifest.add("chain" + std::to_string(c + 1) + ".mmle_updates", std::to_string(d.mmle_updates));
  }

  const auto summary = summarize(std::span<const PosteriorDraws>(chains), args.ci,
                                 args.transform == "fold-change" ? Transform::FoldChange : Transform::Identity);
  CsvWriter w;
  std::vector<std::string> header{"name", "group", "mean", "ci_lower", "ci_upper", "kappa_mean", "ess"};
  if (summary.psrf) header.push_back("psrf");
  w.row(header);
  for (int k = 0; k < p; ++k) {
    std::vector<std::string> row{names[k],
                                 group_of_name[k],
                                 format_double(summary.mean[k]),
                                 format_double(summary.ci_lower[k]),
                                 format_double(summary.ci_upper[k]),
                                 format_double(summary.kappa_mean[k]),
                                 format_double(summary.ess[k])};
    if (summary.psrf) row.push_back(format_double((*summary.psrf)[k]));
    w.row(row);
  }
  write_file_atomic(join_path(args.out, "summary.csv"), w.text);
  write_file_atomic(join_path(args.out, "manifest.txt"), manifest.render());
  out << "fit: " << p << " coefficients, " << args.chains << " chain(s), output in " << args.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string scenario;
  int replicates = 1;
  std::vector<std::string> methods;
  std::string out;
  int burn_in = 10000;
  int draws = 10000;
  std::optional<std::uint64_t> seed;
  bool stratum_sums = false;
  std::optional<int> threads;
};

int simulate_command(const SimulateArgs& args, std::ostream& out) {
  if (args.replicates < 1) throw InputError("--replicates must be at least 1");
  if (args.methods.empty()) throw InputError("--methods needs at least one method");
  SimulationScenario s = args.scenario.empty() ? SimulationScenario{} : SimulationScenario::load(args.scenario);
  if (args.seed) s.seed = *args.seed;
  s.validate();
  std::vector<MethodSpec> methods;
  for (const auto& m : args.methods) methods.push_back(MethodSpec::parse(m));
  SamplerConfig cfg;
  cfg.burn_in = args.burn_in;
  cfg.draws = args.draws;
  cfg.validate();

  const auto result = run_simulation(s, methods, args.replicates, cfg, resolve_threads(args.threads));
  ensure_dir(args.out);

  CsvWriter report;
  report.row({"method", "pattern", "stratum", "mse", "cells", "failed_replicates"});
  CsvWriter estimates;
  std::vector<std::string> header{"method", "replicate", "error"};
  for (int j = 0; j < s.p(); ++j) header.push_back("beta_" + std::to_string(j + 1));
  estimates.row(header);
  for (int r = 0; r < args.replicates; ++r) {
    std::vector<std::string> row{"truth", std::to_string(r), ""};
    for (int j = 0; j < s.p(); ++j) row.push_back(format_double(result.truths(r, j)));
    estimates.row(row);
  }
  for (const auto& m : result.methods) {
    // Strata use the replicates that succeeded.
    std::vector<int> ok;
    for (int r = 0; r < args.replicates; ++r) {
      if (m.failures[r].empty()) ok.push_back(r);
    }
    const int failed = args.replicates - static_cast<int>(ok.size());
    Matrix est(static_cast<Eigen::Index>(ok.size()), s.p()), truth(static_cast<Eigen::Index>(ok.size()), s.p());
    for (std::size_t i = 0; i < ok.size(); ++i) {
      est.row(static_cast<Eigen::Index>(i)) = m.estimates.row(ok[i]);
      truth.row(static_cast<Eigen::Index>(i)) = result.truths.row(ok[i]);
    }
    const std::string label = m.method.label();
    if (!ok.empty()) {
      const MseReport rep = mse_report(est, truth, args.stratum_sums);
      if (rep.null_mse) {
        report.row({label, s.pattern.name(), "null", format_double(*rep.null_mse), std::to_string(rep.null_count),
                    std::to_string(failed)});
      }
      if (rep.nonnull_mse) {
        report.row({label, s.pattern.name(), "non-null", format_double(*rep.nonnull_mse),
                    std::to_string(rep.nonnull_count), std::to_string(failed)});
      }
    }
    for (int r = 0; r < args.replicates; ++r) {
      std::vector<std::string> row{label, std::to_string(r), m.failures[r]};
      for (int j = 0; j < s.p(); ++j) row.push_back(format_double(m.estimates(r, j)));
      estimates.row(row);
    }
  }
  Manifest manifest;
  manifest.add("command", "simulate");
  manifest.add("version", kVersion);
  manifest.add("inputs", args.scenario.empty() ? "(default scenario)" : args.scenario);
  manifest.add("output_dir", args.out);
  manifest.add("seed", std::to_string(s.seed));
  manifest.add("replicates", std::to_string(args.replicates));
  manifest.add("methods", join(args.methods, " "));
  manifest.add("burnin", std::to_string(args.burn_in));
  manifest.add("draws", std::to_string(args.draws));
  manifest.add("pattern", s.pattern.name());
  manifest.add("units", args.stratum_sums ? "stratum-sum" : "per-cell");
  write_file_atomic(join_path(args.out, "mse_report.csv"), report.text);
  write_file_atomic(join_path(args.out, "estimates.csv"), estimates.text);
  write_file_atomic(join_path(args.out, "manifest.txt"), manifest.render());
  out << "simulate: " << args.replicates << " replicate(s), " << methods.size() << " method(s), output in "
      << args.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------- prior

struct PriorArgs {
  std::string what;
  double a = 0.5;
  double b = 0.5;
  double tau2 = 1.0;
  double sigma2 = 1.0;
  std::string grid;
  bool log_grid = false;
  std::string out;
};

std::vector<double> parse_grid(const std::string& spec, bool log_scale) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3 || spec.find("::") != std::string::npos) {
    throw InputError("grid '" + spec + "' must be lo:hi:count");
  }
  double lo = 0, hi = 0;
  long count = 0;
  try {
    std::size_t u1 = 0, u2 = 0, u3 = 0;
    lo = std::stod(parts[0], &u1);
    hi = std::stod(parts[1], &u2);
    count = std::stol(parts[2], &u3);
    if (u1 != parts[0].size() || u2 != parts[1].size() || u3 != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw InputError("grid '" + spec + "' must be lo:hi:count");
  }
  if (count < 1) throw InputError("grid '" + spec + "' has no points");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) throw InputError("grid '" + spec + "' needs lo <= hi");
  if (count == 1 && hi != lo) throw InputError("grid '" + spec + "': a single point needs lo == hi");
  if (log_scale && !(lo > 0.0)) throw InputError("log grid '" + spec + "' needs lo > 0");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    g[i] = log_scale ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

int prior_command(const PriorArgs& args, std::ostream& out) {
  CsvWriter w;
  if (args.what == "marginal") {
    const auto grid = parse_grid(args.grid.empty() ? "-5:5:101" : args.grid, args.log_grid);
    w.row({"beta", "pdf"});
    for (double x : grid) w.row({format_double(x), format_double(marginal_prior_pdf(x, args.tau2, args.a, args.b))});
  } else if (args.what == "tail") {
    const bool log_scale = args.grid.empty() || args.log_grid;
    const auto grid = parse_grid(args.grid.empty() ? "100:10000:41" : args.grid, log_scale);
    w.row({"beta", "tail_rate", "pdf"});
    for (double x : grid) {
      w.row({format_double(x), format_double(tail_rate(x, args.tau2, args.a, args.b)),
             format_double(marginal_prior_pdf(x, args.tau2, args.a, args.b))});
    }
  } else if (args.what == "kappa") {
    const auto grid = parse_grid(args.grid.empty() ? "0.05:0.95:19" : args.grid, args.log_grid);
    for (double k : grid) {
      if (!(k > 0.0 && k < 1.0)) throw InputError("kappa grid points must lie in (0, 1)");
    }
    w.row({"kappa1", "kappa2", "log_density"});
    for (double k1 : grid) {
      for (double k2 : grid) {
        const double k[] = {k1, k2};
        w.row({format_double(k1), format_double(k2),
               format_double(shrinkage_prior_logpdf(k, args.tau2, args.sigma2, args.a, args.b))});
      }
    }
  } else if (args.what == "posterior-mean-surface") {
    const auto grid = parse_grid(args.grid.empty() ? "0:10:21" : args.grid, args.log_grid);
    w.row({"y1", "y2", "mean1", "mean2"});
    for (double y1 : grid) {
      for (double y2 : grid) {
        const double y[] = {y1, y2};
        const double m1 = normal_means_posterior_mean(y, args.tau2, args.sigma2, args.a, args.b, 0).value;
        const double m2 = normal_means_posterior_mean(y, args.tau2, args.sigma2, args.a, args.b, 1).value;
        w.row({format_double(y1), format_double(y2), format_double(m1), format_double(m2)});
      }
    }
  } else {
    throw InputError("unknown prior table '" + args.what + "'");
  }
  if (args.out.empty()) {
    out << w.text;
  } else {
    write_file_atomic(args.out, w.text);
    Manifest manifest;
    manifest.add("command", "prior " + args.what);
    manifest.add("version", kVersion);
    manifest.add("inputs", "");
    manifest.add("output", args.out);
    manifest.add("seed", "0");
    manifest.add("a", format_double(args.a));
    manifest.add("b", format_double(args.b));
    manifest.add("tau2", format_double(args.tau2));
    manifest.add("sigma2", format_double(args.sigma2));
    manifest.add("grid", args.grid);
    write_file_atomic(args.out + ".manifest", manifest.render());
  }
  return kOk;
}

}  // namespace

int resolve_threads(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw InputError("--threads must be at least 1");
    return *flag;
  }
  if (const char* env = std::getenv("GIGG_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw InputError(std::string("GIGG_THREADS must be a positive integer, got '") + env + "'");
    return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian regression with group inverse-gamma gamma shrinkage", "gigg"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Sample the posterior for a CSV dataset");
  fit_cmd->add_option("--data", fit.data, "Input CSV with a header row")->required();
  fit_cmd->add_option("--response", fit.response, "Response column")->required();
  fit_cmd->add_option("--groups", fit.groups, "Group map CSV: column,group")->required();
  fit_cmd->add_option("--adjust", fit.adjust, "Comma-separated unpenalized columns");
  fit_cmd->add_option("--out", fit.out, "Output directory")->required();
  fit_cmd->add_option("--burnin", fit.burn_in, "Burn-in sweeps")->capture_default_str();
  fit_cmd->add_option("--draws", fit.draws, "Retained draws")->capture_default_str();
  fit_cmd->add_option("--thin", fit.thin, "Thinning interval")->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "Random seed")->capture_default_str();
  fit_cmd->add_option("--chains", fit.chains, "Number of chains")->capture_default_str();
  fit_cmd->add_option("--hyper", fit.hyper, "mmle or fixed:a=..,b=.. (values or 1/n)")->capture_default_str();
  fit_cmd->add_option("--ci", fit.ci, "Credible interval level")->capture_default_str();
  fit_cmd->add_option("--transform", fit.transform, "identity or fold-change")->capture_default_str();
  fit_cmd->add_option("--draws-format", fit.draws_format, "binary or csv")->capture_default_str();
  fit_cmd->add_option("--threads", fit.threads, "Worker threads");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the simulation benchmark");
  sim_cmd->add_option("--scenario", sim.scenario, "Scenario file (key = value); default scenario if omitted");
  sim_cmd->add_option("--replicates", sim.replicates, "Replicates")->capture_default_str();
  sim_cmd->add_option("--methods", sim.methods, "ols, gigg-mmle, gigg-fixed:A,B")->required();
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();
  sim_cmd->add_option("--burnin", sim.burn_in, "Burn-in sweeps")->capture_default_str();
  sim_cmd->add_option("--draws", sim.draws, "Retained draws")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Overrides the scenario seed");
  sim_cmd->add_flag("--stratum-sums", sim.stratum_sums, "Report per-replicate stratum sums");
  sim_cmd->add_option("--threads", sim.threads, "Worker threads");

  PriorArgs prior;
  auto* prior_cmd = app.add_subcommand("prior", "Tabulate prior and normal-means quantities");
  prior_cmd->add_option("table", prior.what, "marginal, tail, kappa or posterior-mean-surface")->required();
  prior_cmd->add_option("--a", prior.a, "a")->capture_default_str();
  prior_cmd->add_option("--b", prior.b, "b")->capture_default_str();
  prior_cmd->add_option("--tau2", prior.tau2, "tau2")->capture_default_str();
  prior_cmd->add_option("--sigma2", prior.sigma2, "sigma2")->capture_default_str();
  prior_cmd->add_option("--grid", prior.grid, "lo:hi:count");
  prior_cmd->add_flag("--log-grid", prior.log_grid, "Log-spaced grid");
  prior_cmd->add_option("--out", prior.out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests come through here with exit code 0.
    return app.exit(e, out, err) == 0 ? kOk : kInputInvalid;
  }

  try {
    if (*fit_cmd) return fit_command(fit, out);
    if (*sim_cmd) return simulate_command(sim, out);
    if (*prior_cmd) return prior_command(prior, out);
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return kSchemaMismatch;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputInvalid;
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << "\n";
    return kInputInvalid;
  } catch (const ParameterDomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInputInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kNumericFailure;
  }
  return kInputInvalid;
}

}  // namespace gigg::cli
