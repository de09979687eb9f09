#include "pinchloc/model_table.hpp"

#include <stdexcept>
#include <string>

#include "pinchloc/channel.hpp"
#include "pinchloc/parallel.hpp"

namespace pinchloc {

ModelTable::ModelTable(const SystemConfig& cfg, const GridSpec& grid)
    : grid_(grid), source_(cfg.params()), antennas_(cfg.antenna_count()) {
  if (!(grid.spacing > 0.0) || grid.size() == 0) throw std::invalid_argument("model table needs a non-empty grid");
  stride_ = (grid.size() + 3) & ~std::size_t{3};
  re_.assign(antennas_ * stride_, 0.0);
  im_.assign(antennas_ * stride_, 0.0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const Position u = grid_.node(i);
    for (std::size_t n = 0; n < antennas_; ++n) {
      const Complex s = model_sample(cfg, u, n);
      re_[n * stride_ + i] = s.real();
      im_[n * stride_ + i] = s.imag();
    }
  });
}

bool ModelTable::compatible_with(const SystemConfig& cfg) const {
  const SystemParams& p = cfg.params();
  return p.carrier_frequency_hz == source_.carrier_frequency_hz && p.transmit_power_w == source_.transmit_power_w &&
         p.pilot_phase_rad == source_.pilot_phase_rad && p.relative_permittivity == source_.relative_permittivity &&
         p.loss_tangent == source_.loss_tangent && p.waveguide_height_m == source_.waveguide_height_m &&
         p.channel_gain == source_.channel_gain && p.antenna_positions_m == source_.antenna_positions_m;
}

void ModelTable::residuals(std::span<const Complex> r, std::span<double> out, KernelIsa isa) const {
  if (r.size() != antennas_) {
    throw std::invalid_argument("observation length " + std::to_string(r.size()) + " does not match table antennas " +
                                std::to_string(antennas_));
  }
  if (out.size() != size()) throw std::invalid_argument("residual output span has the wrong size");
  std::vector<double> obs_re(antennas_), obs_im(antennas_);
  for (std::size_t n = 0; n < antennas_; ++n) {
    obs_re[n] = r[n].real();
    obs_im[n] = r[n].imag();
  }
  residual_kernel(isa)(view(), obs_re.data(), obs_im.data(), 0, size(), out.data());
}

}  // namespace pinchloc
