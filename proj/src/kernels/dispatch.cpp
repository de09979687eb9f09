#include <cstdlib>
#include <stdexcept>
#include <string>

#include "pinchloc/residual_kernels.hpp"

namespace pinchloc {

std::string_view isa_name(KernelIsa isa) {
  switch (isa) {
    case KernelIsa::scalar:
      return "scalar";
    case KernelIsa::avx2:
      return "avx2";
  }
  return "unknown";
}

std::vector<KernelIsa> available_isas() {
  std::vector<KernelIsa> out{KernelIsa::scalar};
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) out.push_back(KernelIsa::avx2);
#endif
  return out;
}

ResidualKernelFn residual_kernel(KernelIsa isa) {
  switch (isa) {
    case KernelIsa::scalar:
      return &kernels::residuals_scalar;
    case KernelIsa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      for (KernelIsa a : available_isas()) {
        if (a == KernelIsa::avx2) return &kernels::residuals_avx2;
      }
#endif
      throw std::runtime_error("avx2 residual kernel is not available on this CPU");
  }
  throw std::invalid_argument("unknown kernel ISA");
}

namespace {

KernelIsa pick_isa() {
  const auto isas = available_isas();
  if (const char* env = std::getenv("PINCHLOC_SIMD")) {
    const std::string want(env);
    for (KernelIsa isa : isas) {
      if (isa_name(isa) == want) return isa;
    }
  }
  return isas.back();
}

}  // namespace

KernelIsa active_isa() {
  static const KernelIsa isa = pick_isa();
  return isa;
}

}  // namespace pinchloc
