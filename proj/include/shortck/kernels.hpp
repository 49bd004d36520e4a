#pragma once

// Binary64 batch iteration of two-dimensional maps
//
//   z' = p(z) + alpha w,   w' = beta z,   p(z) = z^d + sum c_j z^j,
//
// used as a cheap prefix before extended-exponent arithmetic takes over.
// The scalar and AVX2 variants perform the same operations in the same
// order and produce bit-identical lanes.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace shortck::kernels {

inline constexpr int kMaxKernelDegree = 8;

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

// Best variant the CPU supports.
Isa detected_isa();
// Variant used by iterate(): explicit override, then SHORTCK_ISA, then detected.
Isa active_isa();
void set_isa_override(std::optional<Isa> isa);

struct StepCoeffs {
  int d = 2;
  std::array<double, kMaxKernelDegree> c_re{};
  std::array<double, kMaxKernelDegree> c_im{};
  double a_re = 0.0, a_im = 0.0;
  double b_re = 1.0, b_im = 0.0;
};

enum LaneStatus : std::uint8_t { kActive = 0, kHigh = 1, kLow = 2 };

// Structure-of-arrays view over n lanes. Lanes entering with a nonzero status
// are left untouched.
struct Lanes {
  double* zr;
  double* zi;
  double* wr;
  double* wi;
  std::int32_t* steps;
  std::uint8_t* status;
  std::size_t n;
};

// A lane stops with kHigh once max(|z|^2, |w|^2) >= bail2, with kLow once it
// drops below tiny2; steps counts the maps applied.
void iterate(std::span<const StepCoeffs> coeffs, double bail2, double tiny2, Lanes lanes, Isa isa);
void iterate(std::span<const StepCoeffs> coeffs, double bail2, double tiny2, Lanes lanes);

void iterate_scalar(std::span<const StepCoeffs> coeffs, double bail2, double tiny2, Lanes lanes);
void iterate_avx2(std::span<const StepCoeffs> coeffs, double bail2, double tiny2, Lanes lanes);

}  // namespace shortck::kernels
