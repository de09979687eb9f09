#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <algorithm>

#include "pinchloc/residual_kernels.hpp"

namespace pinchloc::kernels {

namespace {
constexpr std::size_t kBlock = 256;
}

// Compiled for AVX2 regardless of the baseline target; only reached after a
// runtime CPU check in dispatch.cpp.
__attribute__((target("avx2"))) void residuals_avx2(const ResidualTableView& table, const double* obs_re,
                                                    const double* obs_im, std::size_t begin, std::size_t end,
                                                    double* out) {
  alignas(32) double acc[kBlock];
  for (std::size_t block = begin; block < end; block += kBlock) {
    const std::size_t len = std::min(kBlock, end - block);
    const std::size_t vec_len = len & ~std::size_t{3};
    std::fill_n(acc, len, 0.0);
    for (std::size_t n = 0; n < table.antennas; ++n) {
      const double* re = table.model_re + n * table.stride + block;
      const double* im = table.model_im + n * table.stride + block;
      const __m256d rr = _mm256_set1_pd(obs_re[n]);
      const __m256d ri = _mm256_set1_pd(obs_im[n]);
      std::size_t i = 0;
      for (; i < vec_len; i += 4) {
        const __m256d dr = _mm256_sub_pd(rr, _mm256_loadu_pd(re + i));
        const __m256d di = _mm256_sub_pd(ri, _mm256_loadu_pd(im + i));
        const __m256d sq = _mm256_add_pd(_mm256_mul_pd(dr, dr), _mm256_mul_pd(di, di));
        _mm256_store_pd(acc + i, _mm256_add_pd(_mm256_load_pd(acc + i), sq));
      }
      for (; i < len; ++i) {
        const double dr = obs_re[n] - re[i];
        const double di = obs_im[n] - im[i];
        const double sq_r = dr * dr;
        const double sq_i = di * di;
        acc[i] = acc[i] + (sq_r + sq_i);
      }
    }
    std::copy_n(acc, len, out + block);
  }
}

}  // namespace pinchloc::kernels

#endif
