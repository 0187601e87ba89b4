#include <atomic>
#include <cstdlib>
#include <string>

#include "walkplan/nn/simd.hpp"

namespace walkplan::nn::simd {

#if defined(WALKPLAN_WITH_AVX2)
const KernelTable& avx2_table();
#endif

const KernelTable* avx2_kernels() {
#if defined(WALKPLAN_WITH_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* auto_select() {
  if (const char* env = std::getenv("WALKPLAN_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && avx2_kernels()) return avx2_kernels();
  }
  if (const auto* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{auto_select()};
  return table;
}

}  // namespace

const KernelTable& kernels() { return *active().load(std::memory_order_relaxed); }

bool select_kernels(std::string_view name) {
  if (name == "scalar") {
    active().store(&scalar_kernels());
    return true;
  }
  if (name == "avx2") {
    if (!avx2_kernels()) return false;
    active().store(avx2_kernels());
    return true;
  }
  if (name == "auto") {
    active().store(auto_select());
    return true;
  }
  return false;
}

}  // namespace walkplan::nn::simd
