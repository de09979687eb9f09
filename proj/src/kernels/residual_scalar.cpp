#include <algorithm>
#include <array>

#include "pinchloc/residual_kernels.hpp"

namespace pinchloc::kernels {

namespace {
constexpr std::size_t kBlock = 256;
}

void residuals_scalar(const ResidualTableView& table, const double* obs_re, const double* obs_im, std::size_t begin,
                      std::size_t end, double* out) {
  std::array<double, kBlock> acc;
  for (std::size_t block = begin; block < end; block += kBlock) {
    const std::size_t len = std::min(kBlock, end - block);
    std::fill_n(acc.begin(), len, 0.0);
    for (std::size_t n = 0; n < table.antennas; ++n) {
      const double rr = obs_re[n];
      const double ri = obs_im[n];
      const double* re = table.model_re + n * table.stride + block;
      const double* im = table.model_im + n * table.stride + block;
      for (std::size_t i = 0; i < len; ++i) {
        const double dr = rr - re[i];
        const double di = ri - im[i];
        const double sq_r = dr * dr;
        const double sq_i = di * di;
        acc[i] = acc[i] + (sq_r + sq_i);
      }
    }
    std::copy_n(acc.begin(), len, out + block);
  }
}

}  // namespace pinchloc::kernels
