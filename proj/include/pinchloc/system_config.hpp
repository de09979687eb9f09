#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pinchloc {

using Complex = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact SI value
inline constexpr double kPi = 3.14159265358979323846;

/// Raised for any physically invalid or inconsistent configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// 2-D ground-plane coordinate of a user (z = 0), metres.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance_between(const Position& a, const Position& b);

/// Axis-aligned rectangle on the ground plane.
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(const Position& p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }
  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
};

/// Raw, unvalidated inputs of a SystemConfig. Derived quantities (wavelength,
/// attenuation and phase constants) are not part of this struct.
struct SystemParams {
  double carrier_frequency_hz = 2.8e9;
  double transmit_power_w = 0.1;
  double pilot_phase_rad = 0.0;
  double relative_permittivity = 2.08;
  double loss_tangent = 4e-4;
  double waveguide_height_m = 3.0;
  double area_x_m = 6.0;
  double area_y_m = 10.0;
  double waveguide_length_m = 10.0;
  std::vector<double> antenna_positions_m;
  double noise_variance_w = 1e-7;
  double channel_gain = 1.0;
};

/// Antennas evenly spread over the waveguide: v_n = (n - 1/2) * length / count.
std::vector<double> uniform_antenna_positions(std::size_t count, double waveguide_length_m);

/// dBm -> W.
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Validated, immutable description of one pinching-antenna deployment.
///
/// The waveguide runs along the y axis at height d with its feed at the
/// origin; antenna n sits at (0, v_n, d). The deployment area is the
/// rectangle [0, area_x] x [0, area_y] on the ground.
class SystemConfig {
 public:
  /// Throws ConfigError when any input is out of its physical domain.
  static SystemConfig create(const SystemParams& params);

  /// The default deployment with `antenna_count` uniform antennas and
  /// the given noise power.
  static SystemConfig default_deployment(std::size_t antenna_count, double noise_dbm);

  const SystemParams& params() const { return params_; }

  double carrier_frequency_hz() const { return params_.carrier_frequency_hz; }
  double wavelength_m() const { return wavelength_; }
  double wavenumber() const { return 2.0 * kPi / wavelength_; }
  double transmit_power_w() const { return params_.transmit_power_w; }
  Complex pilot_symbol() const { return pilot_; }
  double relative_permittivity() const { return params_.relative_permittivity; }
  double loss_tangent() const { return params_.loss_tangent; }
  double alpha_np_per_m() const { return alpha_; }
  double beta_rad_per_m() const { return beta_; }
  double waveguide_height_m() const { return params_.waveguide_height_m; }
  double waveguide_length_m() const { return params_.waveguide_length_m; }
  double noise_variance_w() const { return params_.noise_variance_w; }
  double channel_gain() const { return params_.channel_gain; }

  const std::vector<double>& antenna_positions_m() const { return params_.antenna_positions_m; }
  std::size_t antenna_count() const { return params_.antenna_positions_m.size(); }
  double antenna_position(std::size_t n) const;

  Rect area() const { return {0.0, params_.area_x_m, 0.0, params_.area_y_m}; }

  /// a_n = lambda * sqrt(p) * exp(-(alpha + j beta) v_n) / (4 pi), zero-based n.
  Complex antenna_amplitude(std::size_t n) const { return amplitudes_.at(n); }

  SystemConfig with_noise_variance(double noise_variance_w) const;
  SystemConfig with_noise_dbm(double noise_dbm) const;
  SystemConfig with_antennas(std::vector<double> positions_m) const;
  SystemConfig with_pilot_phase(double phase_rad) const;

 private:
  explicit SystemConfig(SystemParams params);

  SystemParams params_;
  double wavelength_ = 0.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  Complex pilot_{1.0, 0.0};
  std::vector<Complex> amplitudes_;
};

}  // namespace pinchloc
