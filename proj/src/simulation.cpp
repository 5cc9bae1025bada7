#include "rankmoments/simulation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "rankmoments/binormal.hpp"
#include "rankmoments/correlation.hpp"
#include "rankmoments/errors.hpp"

namespace rankmoments {

namespace {

struct Workspace {
  std::vector<double> x, y;
  std::vector<std::size_t> order;
  std::vector<std::int64_t> p, q;
};

void rank_into(const std::vector<double>& v, std::vector<std::size_t>& order, std::vector<std::int64_t>& rank) {
  order.resize(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  rank.resize(v.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && v[order[k]] == v[order[k - 1]]) throw TieError("tied value in simulated sample");
    rank[order[k]] = static_cast<std::int64_t>(k) + 1;
  }
}

struct Cell {
  std::size_t rho_index;
  std::size_t n_index;
};

CellStats run_block(const ExperimentConfig& cfg, const Cell& cell, std::uint64_t block, std::uint64_t first,
                    std::uint64_t last) {
  const double rho = cfg.rho_grid[cell.rho_index];
  const std::int64_t n = cfg.n_list[cell.n_index];
  const auto un = static_cast<std::size_t>(n);
  Philox4x32 stream(cfg.seed, static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(cell.n_index),
                    static_cast<std::uint32_t>(cell.rho_index));
  CellStats stats;
  stats.rho = rho;
  stats.n = n;
  for (auto k : cfg.estimators) stats.has_estimator[static_cast<std::size_t>(k)] = true;

  const ContaminationParams* mix = std::get_if<ContaminationParams>(&cfg.model);
  ContaminationParams params;
  if (mix) {
    params = *mix;
    params.rho = rho;
  }

  Workspace w;
  for (std::uint64_t t = first; t < last; ++t) {
    if (mix) {
      sample_contaminated(params, un, stream, w.x, w.y);
    } else {
      sample_binormal(rho, un, stream, w.x, w.y);
    }
    rank_into(w.x, w.order, w.p);
    rank_into(w.y, w.order, w.q);
    const double rp = pearson(w.x, w.y);
    const double rs = spearman_from_ranks(w.p, w.q);
    const double rk = kendall_from_ranks(w.p, w.q);
    stats.rp.add(rp);
    stats.rs.add(rs);
    stats.rk.add(rk);
    stats.rs_rk.add(rs, rk);
    for (auto k : cfg.estimators) {
      stats.error[static_cast<std::size_t>(k)].add(estimate_from(k, rp, rs, rk, n) - rho);
    }
  }
  return stats;
}

TrialReport run(const ExperimentConfig& cfg, bool parallel) {
  cfg.validate();
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < cfg.rho_grid.size(); ++i)
    for (std::size_t j = 0; j < cfg.n_list.size(); ++j) cells.push_back({i, j});

  const std::uint64_t blocks_per_cell = (cfg.trials + cfg.block_size - 1) / cfg.block_size;
  const auto units = static_cast<std::ptrdiff_t>(cells.size() * blocks_per_cell);
  std::vector<CellStats> partial(static_cast<std::size_t>(units));
  std::vector<std::string> errors(static_cast<std::size_t>(units));

  auto work = [&](std::ptrdiff_t u) {
    const auto uu = static_cast<std::uint64_t>(u);
    const Cell& cell = cells[uu / blocks_per_cell];
    const std::uint64_t block = uu % blocks_per_cell;
    const std::uint64_t first = block * cfg.block_size;
    const std::uint64_t last = std::min(cfg.trials, first + cfg.block_size);
    try {
      partial[uu] = run_block(cfg, cell, block, first, last);
    } catch (const std::exception& e) {
      errors[uu] = e.what();
    }
  };

  if (parallel) {
    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::ptrdiff_t u = 0; u < units; ++u) work(u);
  } else {
    for (std::ptrdiff_t u = 0; u < units; ++u) work(u);
  }

  for (const auto& e : errors)
    if (!e.empty()) throw Error("simulation block failed: " + e);

  TrialReport report;
  report.model = cfg.model;
  report.cells.resize(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto& out = report.cells[c];
    out.rho = cfg.rho_grid[cells[c].rho_index];
    out.n = cfg.n_list[cells[c].n_index];
    for (std::uint64_t b = 0; b < blocks_per_cell; ++b) out.merge(partial[c * blocks_per_cell + b]);
  }
  return report;
}

std::string model_label(const Model& m) { return std::holds_alternative<BinormalModel>(m) ? "binormal" : "contaminated"; }

void push(std::vector<ReportRow>& rows, const std::string& model, const CellStats& c, std::string kind,
          std::string metric, double empirical, double se, std::optional<double> theory, TheoryKind tk) {
  ReportRow r;
  r.model = model;
  r.rho = c.rho;
  r.n = c.n;
  r.kind = std::move(kind);
  r.metric = std::move(metric);
  r.empirical = empirical;
  r.se = se;
  r.theory = theory;
  r.theory_kind = theory ? tk : TheoryKind::none;
  rows.push_back(std::move(r));
}

}  // namespace

std::string model_name(const Model& model) { return model_label(model); }

void ExperimentConfig::validate() const {
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (block_size < 1) throw DomainError("block_size must be at least 1");
  if (rho_grid.empty() || n_list.empty()) throw DomainError("rho grid and n list must be nonempty");
  for (double r : rho_grid)
    if (!(std::abs(r) <= 1.0)) throw DomainError("rho outside [-1, 1] in grid");
  for (auto n : n_list)
    if (n < 4) throw SizeError("every n must be at least 4");
  if (rho_grid.size() > 0xFFFFFFFFu || n_list.size() > 0xFFFFFFFFu ||
      (trials + block_size - 1) / block_size > 0xFFFFFFFFu) {
    throw ResourceError("experiment too large for the stream layout");
  }
  if (const auto* p = std::get_if<ContaminationParams>(&model)) p->validate();
  double work = 0.0;
  for (auto n : n_list) work += static_cast<double>(trials) * static_cast<double>(n) * static_cast<double>(rho_grid.size());
  if (work > budget) {
    std::ostringstream msg;
    msg << "requested work " << work << " (trials x n summed over cells) exceeds the budget " << budget;
    throw ResourceError(msg.str());
  }
}

void CellStats::merge(const CellStats& o) {
  rp.merge(o.rp);
  rs.merge(o.rs);
  rk.merge(o.rk);
  rs_rk.merge(o.rs_rk);
  for (std::size_t k = 0; k < 4; ++k) {
    error[k].merge(o.error[k]);
    has_estimator[k] = has_estimator[k] || o.has_estimator[k];
  }
}

void sample_binormal(double rho, std::size_t n, Philox4x32& stream, std::vector<double>& x, std::vector<double>& y) {
  if (!(std::abs(rho) <= 1.0)) throw DomainError("rho outside [-1, 1]");
  std::normal_distribution<double> normal;
  const double c = std::sqrt(1.0 - rho * rho);
  x.resize(n);
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = normal(stream);
    const double v = normal(stream);
    x[i] = u;
    y[i] = rho * u + c * v;
  }
}

PairedSample sample_binormal(double rho, std::size_t n, std::uint64_t seed) {
  Philox4x32 stream(seed);
  std::vector<double> x, y;
  sample_binormal(rho, n, stream, x, y);
  return PairedSample(std::move(x), std::move(y));
}

TrialReport run_experiment(const ExperimentConfig& config) { return run(config, true); }
TrialReport run_experiment_serial(const ExperimentConfig& config) { return run(config, false); }

std::vector<ReportRow> report_rows(const TrialReport& report, const QuadratureSettings& settings) {
  std::vector<ReportRow> rows;
  const std::string model = model_label(report.model);
  const auto* mix = std::get_if<ContaminationParams>(&report.model);
  constexpr auto exact = TheoryKind::exact;
  constexpr auto approx = TheoryKind::approximate;
  const std::optional<double> none;

  for (const auto& c : report.cells) {
    if (mix) {
      ContaminationParams p = *mix;
      p.rho = c.rho;
      push(rows, model, c, "rP", "mean", c.rp.mean(), c.rp.se_mean(), none, approx);
      push(rows, model, c, "rS", "mean", c.rs.mean(), c.rs.se_mean(), expected_rs_contaminated(p, c.n), exact);
      push(rows, model, c, "rS", "mean_limit", c.rs.mean(), c.rs.se_mean(),
           expected_rs_contaminated(p, c.n, ExpectationMode::limit), approx);
      push(rows, model, c, "rS", "mean_rival", c.rs.mean(), c.rs.se_mean(), rival_formula_star(p), approx);
      push(rows, model, c, "rK", "mean", c.rk.mean(), c.rk.se_mean(), expected_rk_contaminated(p), exact);
      push(rows, model, c, "rK", "mean_limit", c.rk.mean(), c.rk.se_mean(),
           expected_rk_contaminated(p, ExpectationMode::limit), approx);
      push(rows, model, c, "rS", "variance", c.rs.variance(), c.rs.se_variance(), none, approx);
      push(rows, model, c, "rK", "variance", c.rk.variance(), c.rk.se_variance(), none, approx);
      push(rows, model, c, "rSrK", "cov", c.rs_rk.covariance(), c.rs_rk.se_covariance(), none, approx);
    } else {
      const auto l2 = lemma2_moments(c.rho, c.n);
      push(rows, model, c, "rP", "mean", c.rp.mean(), c.rp.se_mean(), l2.mean_rp, approx);
      push(rows, model, c, "rP", "variance", c.rp.variance(), c.rp.se_variance(), l2.var_rp, approx);
      push(rows, model, c, "rS", "mean", c.rs.mean(), c.rs.se_mean(), l2.mean_rs, exact);
      push(rows, model, c, "rS", "variance", c.rs.variance(), c.rs.se_variance(), var_rs_exact(c.rho, c.n, settings),
           exact);
      push(rows, model, c, "rK", "mean", c.rk.mean(), c.rk.se_mean(), l2.mean_rk, exact);
      push(rows, model, c, "rK", "variance", c.rk.variance(), c.rk.se_variance(), l2.var_rk, exact);
      push(rows, model, c, "rSrK", "cov", c.rs_rk.covariance(), c.rs_rk.se_covariance(),
           cov_rs_rk_exact(c.rho, c.n, settings), exact);
    }
    for (auto kind : kAllEstimators) {
      const auto k = static_cast<std::size_t>(kind);
      if (!c.has_estimator[k]) continue;
      const auto& e = c.error[k];
      const std::string name(to_string(kind));
      std::optional<double> bias, var, mse;
      if (!mix) {
        const auto th = moment_report(kind, c.rho, c.n, settings);
        bias = th.bias;
        var = th.variance;
        mse = th.mse;
      }
      push(rows, model, c, name, "bias", e.mean(), e.se_mean(), bias, approx);
      push(rows, model, c, name, "variance", e.variance(), e.se_variance(), var, approx);
      push(rows, model, c, name, "mse", e.mean_square(), e.se_mean_square(), mse, approx);
    }
  }
  return rows;
}

CompareSummary compare_report(std::vector<ReportRow>& rows, double tol_sigmas) {
  if (!(tol_sigmas > 0.0)) throw DomainError("tol_sigmas must be positive");
  CompareSummary s;
  for (auto& r : rows) {
    if (!r.theory || r.theory_kind == TheoryKind::none) {
      r.verdict = "NA";
      ++s.untested;
      continue;
    }
    const bool within = std::abs(r.empirical - *r.theory) <= tol_sigmas * r.se + 1e-12;
    if (r.theory_kind == TheoryKind::exact) {
      r.verdict = within ? "PASS" : "FAIL";
      ++(within ? s.pass : s.fail);
    } else {
      r.verdict = within ? "AGREE" : "DISAGREE";
      ++(within ? s.agree : s.disagree);
    }
  }
  return s;
}

void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows, int precision) {
  out << "model,rho,n,kind,metric,empirical,theory,se,verdict\n";
  for (const auto& r : rows) {
    out << r.model << ',' << format_grid_value(r.rho) << ',' << r.n << ',' << r.kind << ',' << r.metric << ','
        << format_fixed(r.empirical, precision) << ',' << (r.theory ? format_fixed(*r.theory, precision) : "")
        << ',' << format_fixed(r.se, precision) << ',' << r.verdict << '\n';
  }
}

}  // namespace rankmoments
