#include "pinchloc/fisher.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pinchloc/parallel.hpp"

namespace pinchloc {

Complex sensitivity_scalar(const SystemConfig& cfg, const Position& u, std::size_t n) {
  const double d = distance(cfg, u, n);
  const double k = cfg.wavenumber();
  const Complex rotation = std::polar(1.0, -k * d);
  const Complex radial(1.0 / (d * d * d), k / (d * d));
  return cfg.channel_gain() * cfg.antenna_amplitude(n) * cfg.pilot_symbol() * rotation * radial;
}

Jacobian jacobian(const SystemConfig& cfg, const Position& u) {
  Jacobian jac;
  jac.rows.resize(cfg.antenna_count());
  for (std::size_t n = 0; n < jac.rows.size(); ++n) {
    const Complex m = sensitivity_scalar(cfg, u, n);
    jac.rows[n] = {-m * u.x, -m * (u.y - cfg.antenna_position(n))};
  }
  return jac;
}

Sym2 fim(const SystemConfig& cfg, const Position& u) {
  Sym2 J;
  for (std::size_t n = 0; n < cfg.antenna_count(); ++n) {
    const double m2 = std::norm(sensitivity_scalar(cfg, u, n));
    const double gx = u.x;
    const double gy = u.y - cfg.antenna_position(n);
    J.xx += m2 * gx * gx;
    J.xy += m2 * gx * gy;
    J.yy += m2 * gy * gy;
  }
  const double scale = 2.0 / cfg.noise_variance_w();
  J.xx *= scale;
  J.xy *= scale;
  J.yy *= scale;
  return J;
}

FisherSummary crlb_from_fim(const Sym2& J) {
  FisherSummary out;
  out.fim = J;
  const double det = J.det();
  const double largest = std::max(J.xx, J.yy);
  if (!(largest > 0.0) || !(det > kSingularDetRatio * largest * largest)) {
    out.singular = true;
    out.var_x_bound = std::numeric_limits<double>::infinity();
    out.var_y_bound = std::numeric_limits<double>::infinity();
    out.peb = std::numeric_limits<double>::infinity();
    return out;
  }
  out.cov_bound = {J.yy / det, -J.xy / det, J.xx / det};
  out.var_x_bound = J.yy / det;
  out.var_y_bound = J.xx / det;
  out.peb = std::sqrt((J.xx + J.yy) / det);
  return out;
}

FisherSummary crlb(const SystemConfig& cfg, const Position& u) { return crlb_from_fim(fim(cfg, u)); }

namespace {

std::size_t cell_count(double extent, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (!(extent >= 0.0)) throw std::invalid_argument("grid extent must be non-negative");
  // Tolerate round-off in extent/spacing so that 10 / 0.25 yields exactly 40.
  return static_cast<std::size_t>(std::floor(extent / spacing + 1e-9));
}

}  // namespace

GridSpec GridSpec::cell_centred(const Rect& area, double spacing) {
  GridSpec g;
  g.spacing = spacing;
  g.nx = std::max<std::size_t>(1, cell_count(area.width(), spacing));
  g.ny = std::max<std::size_t>(1, cell_count(area.height(), spacing));
  g.x0 = area.x_min + 0.5 * spacing;
  g.y0 = area.y_min + 0.5 * spacing;
  return g;
}

GridSpec GridSpec::corner_aligned(const Rect& area, double spacing) {
  GridSpec g;
  g.spacing = spacing;
  g.nx = cell_count(area.width(), spacing) + 1;
  g.ny = cell_count(area.height(), spacing) + 1;
  g.x0 = area.x_min;
  g.y0 = area.y_min;
  return g;
}

PebMap peb_map(const SystemConfig& cfg, const GridSpec& grid) {
  if (!(grid.spacing > 0.0) || grid.nx == 0 || grid.ny == 0) throw std::invalid_argument("empty or degenerate grid");
  PebMap out{grid, std::vector<double>(grid.size())};
  parallel_for(grid.size(), [&](std::size_t i) { out.peb[i] = crlb(cfg, grid.node(i)).peb; });
  return out;
}

}  // namespace pinchloc
