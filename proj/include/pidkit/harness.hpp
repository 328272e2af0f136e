#pragma once

// Edge-nomination experiments on simulated interaction networks:
// equal-width discretization, empirical joints, all-pairs PID scans,
// within-batch fractional ranks, and the three experiment pipelines.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pidkit/network.hpp"
#include "pidkit/pid.hpp"

namespace pidkit {

struct BinSpec {
  std::size_t n_bins = 0;
  std::vector<double> edges;  ///< n_bins + 1 strictly increasing values
};

struct Discretized {
  std::vector<std::uint32_t> symbols;
  BinSpec bins;
};

/// Bins are [e_k, e_{k+1}) except the last, which is closed, so the maximum
/// lands in bin n_bins - 1. Constant input is a DegenerateInput error.
Discretized discretize_equal_width(std::span<const double> samples, std::size_t n_bins);

/// Cell probabilities counts / N over index alphabets. An alphabet size of
/// zero means "largest observed symbol + 1".
DiscreteJoint3 empirical_joint3(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y,
                                std::span<const std::uint32_t> t, std::size_t nx = 0,
                                std::size_t ny = 0, std::size_t nt = 0);

/// Fractional ranks in [0, 1]: (#smaller + (#equal - 1) / 2) / (M - 1).
std::vector<double> rank_scores(std::span<const double> values);

struct PairResult {
  std::size_t batch = 0;
  std::size_t i = 0;  ///< source X (spoke, or lower index)
  std::size_t j = 0;  ///< source Y (hub of an edge, or higher index)
  bool is_interaction = false;
  BivariatePid imin;
  BivariatePid ipm;
  double mi_xy = 0.0;  ///< I(T; X_i, X_j)
};

/// Per-pair ranks of each statistic within one batch.
struct RankTable {
  struct Atoms {
    std::vector<double> r, u_x, u_y, s;
  };
  Atoms imin;
  Atoms ipm;
  std::vector<double> mi;
};

/// Every unordered node pair against the batch response. For an edge the
/// higher-degree endpoint plays Y; otherwise X is the lower index.
std::vector<PairResult> pairwise_pid_scan(const InteractionNetwork& network,
                                          const SampleBatch& batch, std::size_t n_bins,
                                          std::size_t batch_id = 0);

RankTable rank_pairs(std::span<const PairResult> pairs);

struct ExperimentConfig {
  std::size_t batches = 20;
  std::size_t n_per_batch = 200;
  std::size_t bins = 3;
  double rho = kDefaultNetworkRho;
  double alpha = 0.0;  ///< experiments 1 and 2
  std::size_t k = 1;   ///< experiment 2
  std::vector<double> beta_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> alpha_grid{-4.0, -2.0, 0.0, 2.0, 4.0};
  std::uint64_t seed = 0;
  unsigned workers = 0;
  /// Experiment 1 only: scan this network instead of network A.
  std::shared_ptr<const InteractionNetwork> network;
};

struct BatchScan {
  std::size_t grid_index = 0;
  double grid_value = 0.0;
  std::size_t batch = 0;
  std::uint64_t seed = 0;
  std::vector<PairResult> pairs;
  RankTable ranks;
};

struct StatSummary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  std::size_t count = 0;
};

/// Quartiles by linear interpolation between order statistics.
StatSummary summarize(std::vector<double> values);

struct SplitSummary {
  StatSummary interaction;
  StatSummary other;
};

struct NamedSplit {
  std::string statistic;
  SplitSummary split;
};

struct Exp2Point {
  double beta = 0.0;
  SplitSummary s_min;  ///< "other" here means the pairs (spoke of hub 2, hub 2)
  SplitSummary s_pm;
  SplitSummary mi;
};

struct Exp3Point {
  double alpha = 0.0;
  double mean_mi = 0.0;
  /// Mean atoms over interaction pairs divided by mean_mi.
  double r_min = 0.0, u_x_min = 0.0, u_y_min = 0.0, s_min = 0.0;
  double r_pm = 0.0, u_x_pm = 0.0, u_y_pm = 0.0, s_pm = 0.0;
  TaylorCoefficients taylor;
};

struct ExperimentResult {
  int id = 0;
  ExperimentConfig config;
  std::vector<BatchScan> scans;  ///< ordered by (grid_index, batch)

  std::vector<NamedSplit> exp1;  ///< ranked statistics, interaction vs other pairs
  std::vector<Exp2Point> exp2;
  std::vector<Exp3Point> exp3;
  double uy_min_taylor_pearson = 0.0;
  bool min_sum_increasing = false;
  double pm_sum_range = 0.0;
};

double pearson_correlation(std::span<const double> a, std::span<const double> b);

ExperimentResult run_experiment_1(const ExperimentConfig& config);
ExperimentResult run_experiment_2(const ExperimentConfig& config);
ExperimentResult run_experiment_3(const ExperimentConfig& config);
ExperimentResult run_experiment(int id, const ExperimentConfig& config);

/// Values are divided by unit_scale (ln 2 for bits); ranks are unitless.
void write_pairs_csv(const ExperimentResult& result, PidKind kind, std::ostream& out,
                     double unit_scale = 1.0);
nlohmann::ordered_json summary_json(const ExperimentResult& result, double unit_scale = 1.0);
/// pairs_imin.csv, pairs_ipm.csv and summary.json under dir.
std::vector<std::filesystem::path> write_experiment_outputs(const ExperimentResult& result,
                                                            const std::filesystem::path& dir,
                                                            double unit_scale = 1.0);

}  // namespace pidkit
