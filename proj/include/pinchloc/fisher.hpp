#pragma once

#include <array>
#include <vector>

#include "pinchloc/channel.hpp"

namespace pinchloc {

/// Real symmetric 2x2 matrix stored as (xx, xy, yy).
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }
};

/// d s / d u: row n holds (ds_n/du_x, ds_n/du_y).
struct Jacobian {
  std::vector<std::array<Complex, 2>> rows;
};

/// Distance sensitivity m_n = a_n s e^{-j 2 pi d_n / lambda} (1/d_n^3 + j (2 pi / lambda) / d_n^2),
/// so that ds_n/du = -m_n [u_x, u_y - v_n].
Complex sensitivity_scalar(const SystemConfig& cfg, const Position& u, std::size_t n);

Jacobian jacobian(const SystemConfig& cfg, const Position& u);

/// J = (2/sigma^2) Re{G^T diag(|m_n|^2) G}, accumulated entry by entry.
Sym2 fim(const SystemConfig& cfg, const Position& u);

/// Relative determinant floor below which the FIM is treated as singular.
inline constexpr double kSingularDetRatio = 1e-12;

struct FisherSummary {
  Sym2 fim;
  Sym2 cov_bound;  // zero when singular
  double var_x_bound = 0.0;
  double var_y_bound = 0.0;
  double peb = 0.0;  // +inf when singular
  bool singular = false;
};

/// Closed-form 2x2 inverse of the FIM, per-axis variance bounds and PEB.
FisherSummary crlb(const SystemConfig& cfg, const Position& u);

/// Same, from an already computed FIM.
FisherSummary crlb_from_fim(const Sym2& J);

/// Regular lattice of ground points: node (i, j) is (x0 + i*spacing, y0 + j*spacing).
/// Row-major order in this library means x varies fastest.
struct GridSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  double spacing = 0.25;
  std::size_t nx = 1;
  std::size_t ny = 1;

  std::size_t size() const { return nx * ny; }
  Position node(std::size_t index) const {
    return {x0 + static_cast<double>(index % nx) * spacing, y0 + static_cast<double>(index / nx) * spacing};
  }

  /// Nodes at the centres of the spacing x spacing cells tiling `area`.
  static GridSpec cell_centred(const Rect& area, double spacing);
  /// Nodes from the lower-left corner to the upper-right corner inclusive.
  static GridSpec corner_aligned(const Rect& area, double spacing);
};

struct PebMap {
  GridSpec grid;
  std::vector<double> peb;  // row-major, +inf at singular nodes
};

/// Evaluates crlb(...).peb at every node; parallel over nodes, deterministic.
PebMap peb_map(const SystemConfig& cfg, const GridSpec& grid);

}  // namespace pinchloc
