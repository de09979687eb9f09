#include "pinchloc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pinchloc {

double distance_between(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

std::vector<double> uniform_antenna_positions(std::size_t count, double waveguide_length_m) {
  std::vector<double> v(count);
  for (std::size_t n = 0; n < count; ++n) {
    v[n] = (static_cast<double>(n) + 0.5) * waveguide_length_m / static_cast<double>(count);
  }
  return v;
}

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError(std::string(name) + " must be a positive finite number");
  }
}

}  // namespace

SystemConfig::SystemConfig(SystemParams params) : params_(std::move(params)) {
  require_positive(params_.carrier_frequency_hz, "carrier_frequency_hz");
  require_positive(params_.transmit_power_w, "transmit_power_w");
  require_positive(params_.relative_permittivity, "relative_permittivity");
  require_positive(params_.waveguide_height_m, "waveguide_height_m");
  require_positive(params_.area_x_m, "area_x_m");
  require_positive(params_.area_y_m, "area_y_m");
  require_positive(params_.waveguide_length_m, "waveguide_length_m");
  require_positive(params_.noise_variance_w, "noise_variance_w");
  require_positive(params_.channel_gain, "channel_gain");
  if (!(params_.loss_tangent >= 0.0) || !std::isfinite(params_.loss_tangent)) {
    throw ConfigError("loss_tangent must be non-negative");
  }
  if (!std::isfinite(params_.pilot_phase_rad)) throw ConfigError("pilot_phase_rad must be finite");
  if (params_.waveguide_length_m > params_.area_y_m) {
    throw ConfigError("waveguide_length_m must not exceed area_y_m");
  }
  const auto& v = params_.antenna_positions_m;
  if (v.empty()) throw ConfigError("at least one antenna position is required");
  for (std::size_t n = 0; n < v.size(); ++n) {
    if (!(v[n] >= 0.0 && v[n] <= params_.waveguide_length_m)) {
      std::ostringstream os;
      os << "antenna " << n + 1 << " at " << v[n] << " m lies outside the waveguide [0, "
         << params_.waveguide_length_m << "]";
      throw ConfigError(os.str());
    }
    if (n > 0 && !(v[n] > v[n - 1])) {
      std::ostringstream os;
      os << "antenna " << n + 1 << " position must be strictly greater than antenna " << n;
      throw ConfigError(os.str());
    }
  }

  wavelength_ = kSpeedOfLight / params_.carrier_frequency_hz;
  const double root_eps = std::sqrt(params_.relative_permittivity);
  alpha_ = kPi * root_eps * params_.loss_tangent / wavelength_;
  beta_ = 2.0 * kPi * root_eps / wavelength_;
  pilot_ = std::polar(1.0, params_.pilot_phase_rad);

  amplitudes_.resize(v.size());
  const double scale = wavelength_ * std::sqrt(params_.transmit_power_w) / (4.0 * kPi);
  for (std::size_t n = 0; n < v.size(); ++n) {
    amplitudes_[n] = scale * std::exp(Complex(-alpha_ * v[n], -beta_ * v[n]));
  }
}

SystemConfig SystemConfig::create(const SystemParams& params) { return SystemConfig(params); }

SystemConfig SystemConfig::default_deployment(std::size_t antenna_count, double noise_dbm) {
  SystemParams p;
  p.antenna_positions_m = uniform_antenna_positions(antenna_count, p.waveguide_length_m);
  p.noise_variance_w = dbm_to_watts(noise_dbm);
  return SystemConfig(std::move(p));
}

double SystemConfig::antenna_position(std::size_t n) const {
  if (n >= params_.antenna_positions_m.size()) {
    throw std::out_of_range("antenna index " + std::to_string(n + 1) + " out of range (N = " +
                            std::to_string(params_.antenna_positions_m.size()) + ")");
  }
  return params_.antenna_positions_m[n];
}

SystemConfig SystemConfig::with_noise_variance(double noise_variance_w) const {
  SystemParams p = params_;
  p.noise_variance_w = noise_variance_w;
  return SystemConfig(std::move(p));
}

SystemConfig SystemConfig::with_noise_dbm(double noise_dbm) const { return with_noise_variance(dbm_to_watts(noise_dbm)); }

SystemConfig SystemConfig::with_antennas(std::vector<double> positions_m) const {
  SystemParams p = params_;
  p.antenna_positions_m = std::move(positions_m);
  return SystemConfig(std::move(p));
}

SystemConfig SystemConfig::with_pilot_phase(double phase_rad) const {
  SystemParams p = params_;
  p.pilot_phase_rad = phase_rad;
  return SystemConfig(std::move(p));
}

double distance(const SystemConfig& cfg, const Position& u, std::size_t n) {
  const double dy = u.y - cfg.antenna_position(n);
  const double h = cfg.waveguide_height_m();
  return std::sqrt(u.x * u.x + dy * dy + h * h);
}

Complex waveguide_coefficient(const SystemConfig& cfg, std::size_t n) {
  const double v = cfg.antenna_position(n);
  return std::exp(Complex(-cfg.alpha_np_per_m() * v, -cfg.beta_rad_per_m() * v));
}

Complex model_sample(const SystemConfig& cfg, const Position& u, std::size_t n) {
  const double d = distance(cfg, u, n);
  const Complex rotation = std::polar(1.0, -cfg.wavenumber() * d);
  return cfg.channel_gain() * cfg.antenna_amplitude(n) / d * rotation * cfg.pilot_symbol();
}

SignalVector model_signal(const SystemConfig& cfg, const Position& u) {
  SignalVector s(cfg.antenna_count());
  for (std::size_t n = 0; n < s.size(); ++n) s[n] = model_sample(cfg, u, n);
  return s;
}

SignalVector synthesize_observation(const SystemConfig& cfg, const Position& u, std::uint64_t seed) {
  SignalVector r = model_signal(cfg, u);
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(cfg.noise_variance_w() / 2.0));
  for (auto& sample : r) {
    const double re = gauss(engine);
    const double im = gauss(engine);
    sample += Complex(re, im);
  }
  return r;
}

double residual(const SystemConfig& cfg, std::span<const Complex> r, const Position& u) {
  if (r.size() != cfg.antenna_count()) {
    throw std::invalid_argument("observation length " + std::to_string(r.size()) + " does not match antenna count " +
                                std::to_string(cfg.antenna_count()));
  }
  double acc = 0.0;
  for (std::size_t n = 0; n < r.size(); ++n) acc += std::norm(r[n] - model_sample(cfg, u, n));
  return acc;
}

}  // namespace pinchloc
