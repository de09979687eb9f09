#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pinchloc/estimator.hpp"

namespace pinchloc {

enum class EstimatorKind { ml, wls };

std::string_view estimator_name(EstimatorKind kind);
EstimatorKind parse_estimator(std::string_view name);

/// SplitMix64 finaliser.
std::uint64_t splitmix64(std::uint64_t x);

/// Stateless per-trial seed:
///   h = splitmix64(master); then h = splitmix64(h ^ k) for k in
///   (noise_index, pa_index, trial_index, node_index), in that order.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t noise_index, std::uint64_t pa_index,
                         std::uint64_t trial_index, std::uint64_t node_index);

/// Seed of the truth draw for a trial. It ignores the noise and antenna-count
/// indices so every sweep point sees the same user positions.
std::uint64_t truth_seed(std::uint64_t master, std::uint64_t trial_index);

/// Uniform point in `area` drawn from mt19937_64(seed): x first, then y.
Position sample_uniform(const Rect& area, std::uint64_t seed);

struct TruthSampler {
  std::optional<Position> fixed;  // empty: uniform over the deployment area
};

/// Everything an experiment shares: base configuration (its antenna list is
/// replaced by N uniform antennas per sweep point), estimator settings and
/// the estimators to run on each observation.
struct ExperimentSetup {
  SystemConfig base = SystemConfig::default_deployment(8, -40.0);
  GridSearchConfig grid;
  LmConfig lm;
  std::vector<EstimatorKind> estimators{EstimatorKind::ml, EstimatorKind::wls};
};

struct SweepSpec {
  std::vector<double> noise_dbm_list;
  std::vector<std::size_t> pa_counts;
  std::size_t trials = 1000;
  TruthSampler truth;
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct ErrorStats {
  std::size_t trials_ok = 0;
  std::size_t trials_failed = 0;
  double mean_err_m = 0.0;
  double rmse_m = 0.0;
  double median_err_m = 0.0;
};

/// Mean, RMSE and median of the finite entries of `errors`; non-finite
/// entries count as failures.
ErrorStats summarize_errors(const std::vector<double>& errors);

struct SweepCell {
  double noise_dbm = 0.0;
  std::size_t n_pas = 0;
  EstimatorKind estimator = EstimatorKind::ml;
  ErrorStats stats;
  double peb_mean_m = 0.0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // noise-major, then N, then estimator
};

SweepResult run_sweep(const SweepSpec& spec, const ExperimentSetup& setup);

struct MapSpec {
  double grid_spacing_m = 0.25;
  std::size_t trials_per_point = 100;
  double noise_dbm = -40.0;
  std::size_t n_pas = 8;
  std::uint64_t master_seed = 0;

  void validate() const;
};

struct MapResult {
  GridSpec grid;  // cell-centred over the deployment area
  std::vector<EstimatorKind> estimators;
  std::vector<double> peb;                      // per node
  std::vector<std::vector<ErrorStats>> errors;  // [estimator][node]
};

MapResult run_error_map(const MapSpec& spec, const ExperimentSetup& setup);

// Flat export. Numbers use 17 significant digits; infinities print as "inf".

std::string sweep_csv(const SweepResult& result);
SweepResult parse_sweep_csv(std::string_view text);

std::string map_csv(const MapResult& result);

}  // namespace pinchloc
