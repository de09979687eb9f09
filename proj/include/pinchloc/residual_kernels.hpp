#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace pinchloc {

/// Batched residual evaluation over a precomputed table of model signals.
///
/// The table is structure-of-arrays: for antenna n the real parts of s_n at
/// every node are model_re[n * stride + i], likewise for the imaginary parts.
/// Each kernel writes, for every node i in [begin, end),
///
///   out[i] = sum_n ((obs_re[n] - re)^2 + (obs_im[n] - im)^2)
///
/// accumulating antennas in increasing n with separate multiplies and adds
/// (no FMA), so every variant produces bit-identical results.
struct ResidualTableView {
  const double* model_re = nullptr;
  const double* model_im = nullptr;
  std::size_t stride = 0;
  std::size_t antennas = 0;
};

using ResidualKernelFn = void (*)(const ResidualTableView& table, const double* obs_re, const double* obs_im,
                                  std::size_t begin, std::size_t end, double* out);

enum class KernelIsa { scalar, avx2 };

std::string_view isa_name(KernelIsa isa);

namespace kernels {

void residuals_scalar(const ResidualTableView& table, const double* obs_re, const double* obs_im, std::size_t begin,
                      std::size_t end, double* out);

#if defined(__x86_64__) || defined(__i386__)
void residuals_avx2(const ResidualTableView& table, const double* obs_re, const double* obs_im, std::size_t begin,
                    std::size_t end, double* out);
#endif

}  // namespace kernels

/// ISAs both compiled in and supported by the running CPU, scalar first.
std::vector<KernelIsa> available_isas();

ResidualKernelFn residual_kernel(KernelIsa isa);

/// The ISA picked at first use: the widest available one, unless
/// PINCHLOC_SIMD=scalar|avx2 requests a specific (available) variant.
KernelIsa active_isa();

}  // namespace pinchloc
