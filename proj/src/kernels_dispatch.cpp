// Runtime lane selection. The AVX2 table is only referenced when this binary
// was built with AVX2 support and the host CPU reports the feature.

#include <stdexcept>
#include <string>

#include "sedmr/kernels.hpp"

namespace sedmr::kernels {

#if defined(SEDMR_BUILD_AVX2)
const Ops& avx2_ops_impl();  // defined in kernels_avx2.cpp
#endif

const Ops* avx2_ops() {
#if defined(SEDMR_BUILD_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  if (supported) return &avx2_ops_impl();
#endif
  return nullptr;
}

namespace {
const Ops* g_active = nullptr;

const Ops* auto_select() {
  if (const Ops* fast = avx2_ops()) return fast;
  return &scalar_ops();
}
}  // namespace

const Ops& ops() {
  if (!g_active) g_active = auto_select();
  return *g_active;
}

void select(std::string_view name) {
  if (name == "auto") {
    g_active = auto_select();
  } else if (name == "scalar") {
    g_active = &scalar_ops();
  } else if (name == "avx2") {
    const Ops* fast = avx2_ops();
    if (!fast)
      throw std::runtime_error("kernel lane 'avx2' unavailable on this host");
    g_active = fast;
  } else {
    throw std::invalid_argument("unknown kernel lane '" + std::string(name) +
                                "' (expected auto|scalar|avx2)");
  }
}

}  // namespace sedmr::kernels
