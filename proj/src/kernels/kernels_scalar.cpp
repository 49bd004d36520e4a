#include "shortck/kernels.hpp"

namespace shortck::kernels {

namespace {

inline std::uint8_t lane_test(double zr, double zi, double wr, double wi, double bail2, double tiny2) {
  const double mz = zr * zr + zi * zi;
  const double mw = wr * wr + wi * wi;
  if (mz >= bail2 || mw >= bail2) return kHigh;
  if (mz < tiny2 && mw < tiny2) return kLow;
  return kActive;
}

}  // namespace

void iterate_scalar(std::span<const StepCoeffs> coeffs, double bail2, double tiny2, Lanes lanes) {
  for (std::size_t i = 0; i < lanes.n; ++i) {
    if (lanes.status[i] != kActive) continue;
    double zr = lanes.zr[i], zi = lanes.zi[i], wr = lanes.wr[i], wi = lanes.wi[i];
    std::int32_t steps = 0;
    std::uint8_t st = lane_test(zr, zi, wr, wi, bail2, tiny2);
    for (const StepCoeffs& s : coeffs) {
      if (st != kActive) break;
      double pr = 1.0, pi = 0.0;
      for (int j = s.d - 1; j >= 0; --j) {
        const double nr = (pr * zr - pi * zi) + s.c_re[static_cast<std::size_t>(j)];
        const double ni = (pr * zi + pi * zr) + s.c_im[static_cast<std::size_t>(j)];
        pr = nr;
        pi = ni;
      }
      const double nzr = pr + (s.a_re * wr - s.a_im * wi);
      const double nzi = pi + (s.a_re * wi + s.a_im * wr);
      const double nwr = s.b_re * zr - s.b_im * zi;
      const double nwi = s.b_re * zi + s.b_im * zr;
      zr = nzr;
      zi = nzi;
      wr = nwr;
      wi = nwi;
      ++steps;
      st = lane_test(zr, zi, wr, wi, bail2, tiny2);
    }
    lanes.zr[i] = zr;
    lanes.zi[i] = zi;
    lanes.wr[i] = wr;
    lanes.wi[i] = wi;
    lanes.steps[i] = steps;
    lanes.status[i] = st;
  }
}

}  // namespace shortck::kernels
