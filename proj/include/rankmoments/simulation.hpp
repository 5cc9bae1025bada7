#pragma once

// Monte Carlo engine for the binormal and contaminated models. Trials are
// split into fixed-size blocks; block b of cell (rho index i, n index j) draws
// from Philox stream (seed; b, j, i), and block summaries are merged in block
// order, so results do not depend on the thread count.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rankmoments/contaminated.hpp"
#include "rankmoments/estimators.hpp"
#include "rankmoments/moments.hpp"
#include "rankmoments/quadrature.hpp"
#include "rankmoments/random.hpp"

namespace rankmoments {

struct BinormalModel {};
using Model = std::variant<BinormalModel, ContaminationParams>;

std::string model_name(const Model& model);

struct ExperimentConfig {
  Model model = BinormalModel{};
  std::vector<double> rho_grid;
  std::vector<std::int64_t> n_list;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::vector<EstimatorKind> estimators{kAllEstimators.begin(), kAllEstimators.end()};
  std::uint64_t block_size = 1000;
  /// Upper limit on sum over cells of trials * n.
  double budget = 2e10;
  /// 0 leaves the OpenMP default.
  int threads = 0;

  void validate() const;
};

/// Accumulated summaries for one (rho, n) cell. Estimator summaries are of
/// the error (estimate - rho).
struct CellStats {
  double rho = 0.0;
  std::int64_t n = 0;
  Moments rp, rs, rk;
  CoMoments rs_rk;
  std::array<Moments, 4> error;
  std::array<bool, 4> has_estimator{};

  void merge(const CellStats& other);
};

struct TrialReport {
  Model model;
  std::vector<CellStats> cells;
};

void sample_binormal(double rho, std::size_t n, Philox4x32& stream, std::vector<double>& x, std::vector<double>& y);
PairedSample sample_binormal(double rho, std::size_t n, std::uint64_t seed);

/// Parallel over trial blocks.
TrialReport run_experiment(const ExperimentConfig& config);
/// Same computation on one thread; the reference for run_experiment.
TrialReport run_experiment_serial(const ExperimentConfig& config);

/// exact: a finite-sample identity, judged PASS/FAIL.
/// approximate: a large-sample or limiting formula, judged AGREE/DISAGREE and
/// never counted as a failure.
enum class TheoryKind { exact, approximate, none };

struct ReportRow {
  std::string model;
  double rho = 0.0;
  std::int64_t n = 0;
  std::string kind;    // rP, rS, rK, rSrK, P, S, K, M
  std::string metric;  // mean, variance, cov, bias, mse, mean_limit, mean_rival
  double empirical = 0.0;
  std::optional<double> theory;
  double se = 0.0;
  TheoryKind theory_kind = TheoryKind::none;
  std::string verdict;
};

/// Flattens a report into rows with the matching theoretical values.
std::vector<ReportRow> report_rows(const TrialReport& report, const QuadratureSettings& settings = {});

struct CompareSummary {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t agree = 0;
  std::size_t disagree = 0;
  std::size_t untested = 0;
};

/// Sets each row's verdict from |empirical - theory| <= tol_sigmas * se
/// (plus 1e-12 absolute slack for zero-variance cells).
CompareSummary compare_report(std::vector<ReportRow>& rows, double tol_sigmas);

/// "model,rho,n,kind,metric,empirical,theory,se,verdict", LF line endings.
void write_report_csv(std::ostream& out, const std::vector<ReportRow>& rows, int precision = 10);

}  // namespace rankmoments
