// Command-line front end: Omega tables, moment formulas, estimation from a
// CSV file, and Monte Carlo campaigns.
//
// Exit codes: 0 success, 2 numerical failure, 3 data precondition,
// 4 I/O or parse error.

#include <omp.h>

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rankmoments/binormal.hpp"
#include "rankmoments/contaminated.hpp"
#include "rankmoments/correlation.hpp"
#include "rankmoments/errors.hpp"
#include "rankmoments/estimators.hpp"
#include "rankmoments/grid.hpp"
#include "rankmoments/random.hpp"
#include "rankmoments/simulation.hpp"

namespace rm = rankmoments;

namespace {

constexpr int kExitNumerical = 2;
constexpr int kExitData = 3;
constexpr int kExitParse = 4;

struct Options {
  std::string grid = "0(0.01)1";
  std::string rho = "0";
  std::string n = "10";
  std::string seed = "0";
  std::string model = "binormal";
  std::string input;
  std::string out;
  std::uint64_t trials = 100000;
  double epsilon = 0.0;
  double rho_prime = 0.0;
  std::optional<double> lambda;
  double lambda_x = 1.0;
  double lambda_y = 1.0;
  double tol = 4.0;
  int precision = 10;
  bool strict = false;
};

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw rm::ParseError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close(const std::string& path) {
    if (!file_) return;
    file_->close();
    if (!*file_) throw rm::ParseError("write to '" + path + "' failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int env_threads() {
  const char* v = std::getenv("RANKMOMENTS_THREADS");
  if (!v || !*v) return 0;
  int t = 0;
  const std::string_view s(v);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), t);
  if (ec != std::errc{} || ptr != s.data() + s.size() || t < 1) {
    throw rm::ParseError("RANKMOMENTS_THREADS must be a positive integer");
  }
  return t;
}

std::int64_t single_n(const std::string& text) {
  const auto list = rm::parse_count_list(text);
  if (list.size() != 1) throw rm::ParseError("--n takes a single value here");
  return list.front();
}

double single_rho(const std::string& text) {
  const auto list = rm::parse_grid(text);
  if (list.size() != 1) throw rm::ParseError("--rho takes a single value here");
  return list.front();
}

int cmd_tables(const Options& o) {
  const auto grid = rm::parse_grid(o.grid);
  for (double r : grid)
    if (r < 0.0 || r > 1.0) throw rm::DomainError("table grid must lie in [0, 1]");
  const auto rows = rm::tabulate_omegas(grid);
  for (const auto& row : rows) {
    if (!row.ok) {
      std::cerr << "error: quadrature failed at rho=" << rm::format_grid_value(row.rho) << ": " << row.error << '\n';
      return kExitNumerical;
    }
  }
  Sink sink(o.out);
  rm::write_omega_table(sink.stream(), rows, o.precision);
  sink.close(o.out);
  return 0;
}

int cmd_moments(const Options& o) {
  const double rho = single_rho(o.rho);
  const std::int64_t n = single_n(o.n);
  if (n < 4) throw rm::SizeError("moments need n >= 4");
  const auto l2 = rm::lemma2_moments(rho, n);
  const auto f = [&](double v) { return rm::format_fixed(v, o.precision); };
  Sink sink(o.out);
  auto& out = sink.stream();
  out << "rho=" << rm::format_grid_value(rho) << "\nn=" << n << '\n';
  out << "mean_rp=" << f(l2.mean_rp) << "\nvar_rp=" << f(l2.var_rp) << '\n';
  out << "mean_rs=" << f(l2.mean_rs) << "\nmean_rs_asymptotic=" << f(l2.mean_rs_asymp) << '\n';
  out << "var_rs_exact=" << f(rm::var_rs_exact(rho, n)) << "\nvar_rs_asymptotic=" << f(rm::var_rs_asymptotic(rho, n))
      << '\n';
  out << "mean_rk=" << f(l2.mean_rk) << "\nvar_rk=" << f(l2.var_rk) << '\n';
  out << "cov_rs_rk_exact=" << f(rm::cov_rs_rk_exact(rho, n))
      << "\ncov_rs_rk_asymptotic=" << f(rm::cov_rs_rk_asymptotic(rho, n)) << '\n';
  for (auto kind : rm::kAllEstimators) {
    const auto r = rm::moment_report(kind, rho, n);
    const std::string k(rm::to_string(kind));
    out << "bias_" << k << '=' << f(r.bias) << "\nvar_" << k << '=' << f(r.variance) << "\nmse_" << k << '='
        << f(r.mse) << '\n';
  }
  out << "crlb=" << f(rm::crlb(rho, n)) << '\n';
  sink.close(o.out);
  return 0;
}

bool parse_double(std::string_view s, double& v) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(v);
}

rm::PairedSample read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rm::ParseError("cannot open '" + path + "'");
  std::vector<double> x, y;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    double a = 0.0, b = 0.0;
    const bool ok = comma != std::string::npos && line.find(',', comma + 1) == std::string::npos &&
                    parse_double(std::string_view(line).substr(0, comma), a) &&
                    parse_double(std::string_view(line).substr(comma + 1), b);
    if (!ok) {
      if (x.empty() && lineno == 1) continue;  // header
      throw rm::ParseError(path + ":" + std::to_string(lineno) + ": expected two numeric columns");
    }
    x.push_back(a);
    y.push_back(b);
  }
  if (x.size() < 4) throw rm::SizeError("need at least 4 data rows, got " + std::to_string(x.size()));
  return rm::PairedSample(std::move(x), std::move(y));
}

int cmd_estimate(const Options& o) {
  const auto sample = read_csv(o.input);
  const auto n = static_cast<std::int64_t>(sample.size());
  const double rp = rm::pearson(sample);
  const double rs = rm::spearman(sample);
  const double rk = rm::kendall(sample);
  const auto flags = rm::inequality_check(rs, rk, n);
  const auto f = [&](double v) { return rm::format_fixed(v, o.precision); };
  Sink sink(o.out);
  auto& out = sink.stream();
  out << "n=" << n << "\nr_P=" << f(rp) << "\nr_S=" << f(rs) << "\nr_K=" << f(rk) << '\n';
  for (auto kind : rm::kAllEstimators) {
    out << "rho_hat_" << rm::to_string(kind) << '=' << f(rm::estimate_from(kind, rp, rs, rk, n)) << '\n';
  }
  out << "daniel_ok=" << (flags.daniel_ok ? "true" : "false")
      << "\ndurbin_stuart_ok=" << (flags.durbin_stuart_ok ? "true" : "false") << '\n';
  sink.close(o.out);
  return 0;
}

int cmd_simulate(const Options& o) {
  rm::ExperimentConfig cfg;
  if (o.model == "binormal") {
    cfg.model = rm::BinormalModel{};
  } else if (o.model == "contaminated") {
    rm::ContaminationParams p;
    p.epsilon = o.epsilon;
    p.rho_prime = o.rho_prime;
    p.lambda_x = o.lambda.value_or(o.lambda_x);
    p.lambda_y = o.lambda.value_or(o.lambda_y);
    cfg.model = p;
  } else {
    throw rm::ParseError("unknown model '" + o.model + "' (binormal or contaminated)");
  }
  cfg.rho_grid = rm::parse_grid(o.rho);
  cfg.n_list = rm::parse_count_list(o.n);
  cfg.trials = o.trials;
  cfg.seed = rm::parse_seed(o.seed);
  cfg.threads = env_threads();

  const auto report = rm::run_experiment(cfg);
  auto rows = rm::report_rows(report);
  const auto s = rm::compare_report(rows, o.tol);
  Sink sink(o.out);
  rm::write_report_csv(sink.stream(), rows, o.precision);
  sink.close(o.out);

  auto& log = o.out.empty() ? std::cerr : std::cout;
  log << "PASS " << s.pass << "  FAIL " << s.fail << "  AGREE " << s.agree << "  DISAGREE " << s.disagree << "  NA "
      << s.untested << '\n';
  for (const auto& r : rows) {
    if (r.verdict == "FAIL" || r.verdict == "DISAGREE") {
      log << r.verdict << ' ' << r.kind << ' ' << r.metric << " rho=" << rm::format_grid_value(r.rho) << " n=" << r.n
          << " empirical=" << rm::format_fixed(r.empirical, 6) << " theory=" << rm::format_fixed(*r.theory, 6)
          << " se=" << rm::format_fixed(r.se, 6) << '\n';
    }
  }
  return (o.strict && s.fail > 0) ? kExitNumerical : 0;
}

int cmd_are(const Options& o) {
  const auto grid = rm::parse_grid(o.grid);
  Sink sink(o.out);
  auto& out = sink.stream();
  out << "rho,are_P,are_S,are_K,are_M\n";
  for (double r : grid) {
    out << rm::format_grid_value(r);
    for (auto kind : rm::kAllEstimators) out << ',' << rm::format_fixed(rm::are(kind, r), o.precision);
    out << '\n';
  }
  sink.close(o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moments of Pearson, Spearman and Kendall correlation for normal samples"};
  app.require_subcommand(1);
  Options o;

  auto add_precision = [&](CLI::App* sub) {
    sub->add_option("--precision", o.precision, "Decimal places (1-15)")->check(CLI::Range(1, 15));
    sub->add_option("--out", o.out, "Output file (default stdout)");
  };

  auto* tables = app.add_subcommand("tables", "Omega1..Omega3 over a rho grid as CSV");
  tables->add_option("--grid", o.grid, "Grid start(step)stop within [0, 1]");
  add_precision(tables);

  auto* moments = app.add_subcommand("moments", "Theoretical moments at one (rho, n)");
  moments->add_option("--rho", o.rho, "Correlation");
  moments->add_option("--n", o.n, "Sample size (>= 4)");
  add_precision(moments);

  auto* estimate = app.add_subcommand("estimate", "Coefficients and estimators from a two-column CSV");
  estimate->add_option("input", o.input, "CSV file (header optional)")->required();
  add_precision(estimate);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo campaign compared with theory");
  simulate->add_option("--model", o.model, "binormal or contaminated");
  simulate->add_option("--rho", o.rho, "Correlation grid, e.g. -0.9(0.3)0.9");
  simulate->add_option("--n", o.n, "Sample sizes, e.g. 10,20,40");
  simulate->add_option("--trials", o.trials, "Trials per cell");
  simulate->add_option("--seed", o.seed, "64-bit seed (decimal or 0x hex)");
  simulate->add_option("--epsilon", o.epsilon, "Contamination fraction");
  simulate->add_option("--rho-prime", o.rho_prime, "Outlier correlation");
  simulate->add_option("--lambda", o.lambda, "Outlier scale for both coordinates");
  simulate->add_option("--lambda-x", o.lambda_x, "Outlier scale of X");
  simulate->add_option("--lambda-y", o.lambda_y, "Outlier scale of Y");
  simulate->add_option("--tol", o.tol, "Tolerance in standard errors")->check(CLI::PositiveNumber);
  simulate->add_flag("--strict", o.strict, "Exit 2 when any exact comparison fails");
  add_precision(simulate);

  auto* are = app.add_subcommand("are", "Asymptotic relative efficiencies over a rho grid");
  are->add_option("--grid", o.grid, "Grid start(step)stop within [-1, 1]");
  add_precision(are);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (const int t = env_threads(); t > 0) omp_set_num_threads(t);
    if (*tables) return cmd_tables(o);
    if (*moments) return cmd_moments(o);
    if (*estimate) return cmd_estimate(o);
    if (*simulate) return cmd_simulate(o);
    if (*are) return cmd_are(o);
  } catch (const rm::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const rm::DerivationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const rm::NegativeVarianceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const rm::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const rm::SeedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const rm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
