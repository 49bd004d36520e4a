#include "shortck/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define SHORTCK_HAVE_AVX2_TARGET 1
#endif

namespace shortck::kernels {

#ifdef SHORTCK_HAVE_AVX2_TARGET

namespace {

struct alignas(32) Block {
  double zr[4], zi[4], wr[4], wi[4];
};

// hi: some coordinate reached the bail radius; lo: both fell below tiny.
__attribute__((target("avx2"))) inline void test4(__m256d zr, __m256d zi, __m256d wr, __m256d wi,
                                                  __m256d vb, __m256d vt, __m256d& hi, __m256d& lo) {
  const __m256d mz = _mm256_add_pd(_mm256_mul_pd(zr, zr), _mm256_mul_pd(zi, zi));
  const __m256d mw = _mm256_add_pd(_mm256_mul_pd(wr, wr), _mm256_mul_pd(wi, wi));
  hi = _mm256_or_pd(_mm256_cmp_pd(mz, vb, _CMP_GE_OQ), _mm256_cmp_pd(mw, vb, _CMP_GE_OQ));
  lo = _mm256_and_pd(_mm256_cmp_pd(mz, vt, _CMP_LT_OQ), _mm256_cmp_pd(mw, vt, _CMP_LT_OQ));
  lo = _mm256_andnot_pd(hi, lo);
}

__attribute__((target("avx2"))) void run_block(std::span<const StepCoeffs> coeffs, double bail2,
                                               double tiny2, Block& b, std::int32_t* steps,
                                               std::uint8_t* status) {
  __m256d zr = _mm256_load_pd(b.zr), zi = _mm256_load_pd(b.zi);
  __m256d wr = _mm256_load_pd(b.wr), wi = _mm256_load_pd(b.wi);
  const __m256d vb = _mm256_set1_pd(bail2), vt = _mm256_set1_pd(tiny2);
  const __m256d one = _mm256_set1_pd(1.0), zero = _mm256_setzero_pd();

  __m256d hi, lo;
  test4(zr, zi, wr, wi, vb, vt, hi, lo);
  __m256d active = _mm256_andnot_pd(_mm256_or_pd(hi, lo), _mm256_castsi256_pd(_mm256_set1_epi64x(-1)));
  __m256d hi_acc = hi, lo_acc = lo;
  __m256i cnt = _mm256_setzero_si256();

  for (const StepCoeffs& s : coeffs) {
    if (_mm256_movemask_pd(active) == 0) break;
    __m256d pr = one, pi = zero;
    for (int j = s.d - 1; j >= 0; --j) {
      const __m256d cr = _mm256_set1_pd(s.c_re[static_cast<std::size_t>(j)]);
      const __m256d ci = _mm256_set1_pd(s.c_im[static_cast<std::size_t>(j)]);
      const __m256d nr = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(pr, zr), _mm256_mul_pd(pi, zi)), cr);
      const __m256d ni = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(pr, zi), _mm256_mul_pd(pi, zr)), ci);
      pr = nr;
      pi = ni;
    }
    const __m256d ar = _mm256_set1_pd(s.a_re), ai = _mm256_set1_pd(s.a_im);
    const __m256d br = _mm256_set1_pd(s.b_re), bi = _mm256_set1_pd(s.b_im);
    const __m256d nzr = _mm256_add_pd(pr, _mm256_sub_pd(_mm256_mul_pd(ar, wr), _mm256_mul_pd(ai, wi)));
    const __m256d nzi = _mm256_add_pd(pi, _mm256_add_pd(_mm256_mul_pd(ar, wi), _mm256_mul_pd(ai, wr)));
    const __m256d nwr = _mm256_sub_pd(_mm256_mul_pd(br, zr), _mm256_mul_pd(bi, zi));
    const __m256d nwi = _mm256_add_pd(_mm256_mul_pd(br, zi), _mm256_mul_pd(bi, zr));
    zr = _mm256_blendv_pd(zr, nzr, active);
    zi = _mm256_blendv_pd(zi, nzi, active);
    wr = _mm256_blendv_pd(wr, nwr, active);
    wi = _mm256_blendv_pd(wi, nwi, active);
    cnt = _mm256_sub_epi64(cnt, _mm256_castpd_si256(active));
    test4(zr, zi, wr, wi, vb, vt, hi, lo);
    hi_acc = _mm256_or_pd(hi_acc, _mm256_and_pd(hi, active));
    lo_acc = _mm256_or_pd(lo_acc, _mm256_and_pd(lo, active));
    active = _mm256_andnot_pd(_mm256_or_pd(hi, lo), active);
  }

  _mm256_store_pd(b.zr, zr);
  _mm256_store_pd(b.zi, zi);
  _mm256_store_pd(b.wr, wr);
  _mm256_store_pd(b.wi, wi);
  alignas(32) std::int64_t c[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(c), cnt);
  const int hm = _mm256_movemask_pd(hi_acc), lm = _mm256_movemask_pd(lo_acc);
  for (int l = 0; l < 4; ++l) {
    steps[l] = static_cast<std::int32_t>(c[l]);
    status[l] = (hm >> l) & 1 ? kHigh : ((lm >> l) & 1 ? kLow : kActive);
  }
}

}  // namespace

void iterate_avx2(std::span<const StepCoeffs> coeffs, double bail2, double tiny2, Lanes lanes) {
  std::size_t i = 0;
  for (; i + 4 <= lanes.n; i += 4) {
    bool any = false;
    for (int l = 0; l < 4; ++l) any = any || lanes.status[i + static_cast<std::size_t>(l)] == kActive;
    if (!any) continue;
    Block b;
    std::int32_t steps[4];
    std::uint8_t status[4];
    for (std::size_t l = 0; l < 4; ++l) {
      // Finished lanes ride along as zeros and drop out at once.
      if (lanes.status[i + l] != kActive) {
        b.zr[l] = b.zi[l] = b.wr[l] = b.wi[l] = 0.0;
        continue;
      }
      b.zr[l] = lanes.zr[i + l];
      b.zi[l] = lanes.zi[i + l];
      b.wr[l] = lanes.wr[i + l];
      b.wi[l] = lanes.wi[i + l];
    }
    run_block(coeffs, bail2, tiny2, b, steps, status);
    for (std::size_t l = 0; l < 4; ++l) {
      if (lanes.status[i + l] != kActive) continue;
      lanes.zr[i + l] = b.zr[l];
      lanes.zi[i + l] = b.zi[l];
      lanes.wr[i + l] = b.wr[l];
      lanes.wi[i + l] = b.wi[l];
      lanes.steps[i + l] = steps[l];
      lanes.status[i + l] = status[l];
    }
  }
  if (i < lanes.n) {
    Lanes tail{lanes.zr + i, lanes.zi + i, lanes.wr + i, lanes.wi + i, lanes.steps + i, lanes.status + i,
               lanes.n - i};
    iterate_scalar(coeffs, bail2, tiny2, tail);
  }
}

#else

void iterate_avx2(std::span<const StepCoeffs> coeffs, double bail2, double tiny2, Lanes lanes) {
  iterate_scalar(coeffs, bail2, tiny2, lanes);
}

#endif

}  // namespace shortck::kernels
