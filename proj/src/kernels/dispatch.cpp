#include <atomic>
#include <cstdlib>
#include <cstring>

#include "shortck/kernels.hpp"

namespace shortck::kernels {

namespace {

// -1: no override, otherwise the Isa value.
std::atomic<int> g_override{-1};

}  // namespace

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool avx2 = __builtin_cpu_supports("avx2");
  return avx2 ? Isa::avx2 : Isa::scalar;
#else
  return Isa::scalar;
#endif
}

Isa active_isa() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return static_cast<Isa>(o);
  if (const char* env = std::getenv("SHORTCK_ISA")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
  }
  return detected_isa();
}

void set_isa_override(std::optional<Isa> isa) {
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void iterate(std::span<const StepCoeffs> coeffs, double bail2, double tiny2, Lanes lanes, Isa isa) {
  if (isa == Isa::avx2 && detected_isa() == Isa::avx2)
    iterate_avx2(coeffs, bail2, tiny2, lanes);
  else
    iterate_scalar(coeffs, bail2, tiny2, lanes);
}

void iterate(std::span<const StepCoeffs> coeffs, double bail2, double tiny2, Lanes lanes) {
  iterate(coeffs, bail2, tiny2, lanes, active_isa());
}

}  // namespace shortck::kernels
