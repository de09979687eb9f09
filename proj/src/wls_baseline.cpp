#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pinchloc/estimator.hpp"

namespace pinchloc {

// Range inversion from the magnitude law |s_n| = gamma |a_n| / d_n, followed by
// a linearised range system. With rho = u_x^2 + u_y^2 each squared range obeys
//
//   q_n = dh_n^2 - d^2 - v_n^2 = rho - 2 v_n u_y,
//
// which is linear in (u_y, rho). The weighted fit is solved with v centred on
// its weighted mean, where the two unknowns decouple, and u_x = sqrt(rho - u_y^2)
// on the x >= 0 side.
EstimationResult wls_amplitude_baseline(const SystemConfig& cfg, std::span<const Complex> r) {
  const std::size_t count = cfg.antenna_count();
  if (r.size() != count) throw std::invalid_argument("observation length does not match antenna count");
  if (count < 3) throw std::invalid_argument("the amplitude-only baseline needs at least 3 antennas");

  const double h = cfg.waveguide_height_m();
  std::vector<double> w(count), q(count);
  double w_sum = 0.0;
  double v_mean = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    const double mag = std::abs(r[n]);
    w[n] = mag * mag;
    if (!(w[n] > 0.0)) continue;  // no range information from a zero sample
    const double range = std::max(cfg.channel_gain() * std::abs(cfg.antenna_amplitude(n)) / mag, h);
    const double v = cfg.antenna_position(n);
    q[n] = range * range - h * h - v * v;
    w_sum += w[n];
    v_mean += w[n] * v;
  }
  if (!(w_sum > 0.0)) throw std::domain_error("all received samples are zero");
  v_mean /= w_sum;

  double q_mean = 0.0;
  double svv = 0.0;
  double svq = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    if (!(w[n] > 0.0)) continue;
    const double dv = cfg.antenna_position(n) - v_mean;
    q_mean += w[n] * q[n];
    svv += w[n] * dv * dv;
    svq += w[n] * dv * q[n];
  }
  q_mean /= w_sum;
  if (!(svv > 0.0)) throw std::domain_error("degenerate range system");

  EstimationResult out;
  out.position.y = -svq / (2.0 * svv);
  const double rho = q_mean + 2.0 * v_mean * out.position.y;
  const double x2 = rho - out.position.y * out.position.y;
  // Values within round-off of zero come from users on the waveguide axis.
  if (x2 <= 1e-12 * std::max(std::abs(rho), h * h)) {
    out.clipped = x2 < 0.0;
    out.position.x = 0.0;
  } else {
    out.position.x = std::sqrt(x2);
  }

  out.residual = residual(cfg, r, out.position);
  out.converged = true;
  out.candidates_evaluated = 1;
  out.out_of_bounds = !cfg.area().contains(out.position);
  return out;
}

}  // namespace pinchloc
