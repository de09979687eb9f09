#pragma once

#include <span>
#include <vector>

#include "pinchloc/fisher.hpp"
#include "pinchloc/residual_kernels.hpp"

namespace pinchloc {

/// Noiseless model signals s(u) precomputed at every node of a search grid.
///
/// The table depends only on the deployment geometry and RF constants, not
/// on the noise level or the observation, so one table serves every trial
/// that shares a configuration. Residual evaluation against an observation
/// then reduces to the SIMD kernels in residual_kernels.hpp.
class ModelTable {
 public:
  ModelTable(const SystemConfig& cfg, const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::size_t antennas() const { return antennas_; }
  std::size_t size() const { return grid_.size(); }

  /// True when `cfg` produces the same model signals as the table's source
  /// configuration (noise variance is irrelevant and ignored).
  bool compatible_with(const SystemConfig& cfg) const;

  /// out[i] = ||r - s(node i)||^2 for every node; out.size() must equal size().
  void residuals(std::span<const Complex> r, std::span<double> out, KernelIsa isa) const;
  void residuals(std::span<const Complex> r, std::span<double> out) const { residuals(r, out, active_isa()); }

  ResidualTableView view() const { return {re_.data(), im_.data(), stride_, antennas_}; }

 private:
  GridSpec grid_;
  SystemParams source_;
  std::size_t antennas_ = 0;
  std::size_t stride_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

}  // namespace pinchloc
