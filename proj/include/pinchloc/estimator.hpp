#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pinchloc/fisher.hpp"
#include "pinchloc/model_table.hpp"

namespace pinchloc {

/// Stage one: exhaustive residual scan over a regular grid.
struct GridSearchConfig {
  std::optional<double> spacing_m;         // default lambda / 4
  std::size_t num_candidates = 20;
  std::optional<double> min_separation_m;  // default lambda; 0 keeps the N_u smallest nodes verbatim
  std::optional<Rect> search_bounds;       // default deployment area

  double resolved_spacing(const SystemConfig& cfg) const;
  double resolved_min_separation(const SystemConfig& cfg) const;
  Rect resolved_bounds(const SystemConfig& cfg) const;
  /// Corner-aligned grid over the resolved bounds.
  GridSpec grid(const SystemConfig& cfg) const;
  void validate() const;
};

/// Stage two: Levenberg-Marquardt on ||r - s(u)||^2.
struct LmConfig {
  std::optional<double> initial_damping;  // default 1e-3 * mean diagonal of the first normal matrix
  double damping_up = 10.0;
  double damping_down = 10.0;
  std::size_t max_iterations = 100;
  double step_tolerance_m = 1e-9;

  void validate() const;
};

struct GridCandidates {
  std::vector<Position> positions;   // ascending residual
  std::vector<double> residuals;
  std::vector<std::size_t> node_indices;
  std::size_t nodes_evaluated = 0;
  bool truncated = false;            // fewer than num_candidates could be returned
};

GridCandidates coarse_grid_search(const ModelTable& table, std::span<const Complex> r, const GridSearchConfig& gcfg,
                                  double min_separation_m);
GridCandidates coarse_grid_search(const SystemConfig& cfg, std::span<const Complex> r, const GridSearchConfig& gcfg);

struct LmOutcome {
  Position position;
  double initial_residual = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;            // damped linear solves performed
  bool converged = false;                // step norm fell below tolerance
  std::vector<double> accepted_residuals;
};

/// Right-hand side of the damped normal equations, Re{Jac^H (r - s(u))}.
std::array<double, 2> lm_gradient_term(const SystemConfig& cfg, std::span<const Complex> r, const Position& u);

/// Gauss-Newton normal matrix Re{Jac^H Jac}.
Sym2 lm_normal_matrix(const SystemConfig& cfg, const Position& u);

LmOutcome lm_refine(const SystemConfig& cfg, std::span<const Complex> r, const Position& u0, const LmConfig& lcfg);

struct EstimationResult {
  Position position;
  double residual = 0.0;
  std::size_t candidates_evaluated = 0;
  std::size_t grid_nodes_evaluated = 0;
  std::size_t lm_iterations_total = 0;
  bool converged = false;
  bool out_of_bounds = false;
  bool grid_truncated = false;
  bool clipped = false;  // WLS only: the squared cross-track estimate was clipped at zero

  std::vector<std::string> flags() const;
};

/// Two-stage phase-aware ML: grid scan, LM refinement of every candidate,
/// keep the refined point with the smallest residual.
EstimationResult ml_estimate(const SystemConfig& cfg, const ModelTable& table, std::span<const Complex> r,
                             const GridSearchConfig& gcfg, const LmConfig& lcfg);
EstimationResult ml_estimate(const SystemConfig& cfg, std::span<const Complex> r, const GridSearchConfig& gcfg,
                             const LmConfig& lcfg);

/// Amplitude-only weighted least squares on range estimates inverted from
/// |r_n|. A reconstruction of the usual benchmark, not a reproduction.
EstimationResult wls_amplitude_baseline(const SystemConfig& cfg, std::span<const Complex> r);

}  // namespace pinchloc
