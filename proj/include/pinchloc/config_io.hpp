#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "pinchloc/estimator.hpp"
#include "pinchloc/montecarlo.hpp"

namespace pinchloc {

/// One `key = value` entry and the line it came from.
struct KeyValue {
  std::string value;
  std::size_t line = 0;
};

/// Flat key-value text: one `key = value` per line, `#` starts a comment,
/// blank lines ignored. Duplicate keys and malformed lines are errors.
std::map<std::string, KeyValue> parse_key_values(std::string_view text, const std::string& source);

/// A parsed configuration file before CLI overrides are applied.
///
/// Recognised keys (SI units, unit suffix in the name):
///   carrier_frequency_hz, transmit_power_w, pilot_phase_rad,
///   relative_permittivity, loss_tangent, waveguide_height_m, area_x_m,
///   area_y_m, waveguide_length_m, channel_gain,
///   antenna_positions_m (comma list) | num_antennas,
///   noise_dbm | noise_variance_w,
///   grid_spacing_m | grid_spacing_wavelengths, num_candidates,
///   min_separation_m, lm_max_iterations, lm_step_tolerance_m
struct ConfigFile {
  std::string source = "<built-in>";
  SystemParams params;
  bool explicit_antennas = false;
  std::optional<std::size_t> num_antennas;
  std::optional<double> noise_dbm;
  std::optional<double> noise_variance_w;
  GridSearchConfig grid;
  LmConfig lm;
  std::map<std::string, KeyValue> entries;
};

ConfigFile parse_config_text(std::string_view text, const std::string& source);
ConfigFile parse_config_file(const std::filesystem::path& path);

/// Applies overrides and validates. Noise: `noise_dbm_override` replaces a
/// config noise_dbm but conflicts with a config noise_variance_w. Antennas:
/// explicit positions win; otherwise `n_pas_override`, num_antennas, or
/// `fallback_n_pas` uniform antennas. Throws ConfigError naming the key and
/// line on failure. When `require_noise` is false and no noise is given the
/// SystemParams default is kept.
SystemConfig resolve_config(const ConfigFile& file, std::optional<std::size_t> n_pas_override,
                            std::optional<double> noise_dbm_override, bool require_noise,
                            std::size_t fallback_n_pas = 8);

/// Convenience: parse + resolve.
SystemConfig parse_config(const std::filesystem::path& path, bool require_noise = true);

/// Sorted `key = value` lines describing every field of the effective
/// configuration; the config hash is the SHA-256 of this text.
std::string canonical_config_text(const SystemConfig& cfg);
std::string config_hash(const SystemConfig& cfg);

std::string sha256_hex(std::string_view data);

/// Coarse-search settings a Monte-Carlo spec may impose on top of its config.
struct SearchOverrides {
  std::optional<double> grid_spacing_wavelengths;
  std::optional<std::size_t> num_candidates;
  std::optional<double> min_separation_m;

  void apply(GridSearchConfig& grid, const SystemConfig& cfg) const;
};

/// Monte-Carlo spec files share the key-value syntax.
///   sweep: config, noise_dbm_list, pa_counts, trials, truth (uniform | x,y),
///          master_seed, estimators
///   map:   config, grid_spacing_m, trials_per_point, noise_dbm, n_pas,
///          master_seed, estimators
/// Both also accept search_grid_spacing_wavelengths, search_num_candidates
/// and search_min_separation_m.
struct SweepSpecFile {
  SweepSpec spec;
  std::optional<std::filesystem::path> config;
  std::vector<EstimatorKind> estimators{EstimatorKind::ml, EstimatorKind::wls};
  SearchOverrides search;
};
struct MapSpecFile {
  MapSpec spec;
  std::optional<std::filesystem::path> config;
  std::vector<EstimatorKind> estimators{EstimatorKind::ml, EstimatorKind::wls};
  SearchOverrides search;
};

SweepSpecFile parse_sweep_spec(const std::filesystem::path& path);
MapSpecFile parse_map_spec(const std::filesystem::path& path);

}  // namespace pinchloc
