#include "shortck/xarith.hpp"

#include <algorithm>
#include <stdexcept>

#include "shortck/error.hpp"

namespace shortck {

LogMag::LogMag(double v) : v_(v) {
  if (std::isnan(v)) throw Error("LogMag: NaN");
}

namespace {

void check_budget(std::int64_t e2) {
  if (e2 > kExponentBudget || e2 < -kExponentBudget) throw ExponentBudgetError();
}

}  // namespace

ExtComplex ExtComplex::normalize(double re, double im, std::int64_t e2) {
  if (!std::isfinite(re) || !std::isfinite(im)) throw Error("non-finite mantissa");
  if (re == 0.0 && im == 0.0) return ExtComplex{};
  check_budget(e2);
  double h = std::hypot(re, im);
  if (!std::isfinite(h)) {
    re = std::ldexp(re, -2);
    im = std::ldexp(im, -2);
    e2 += 2;
    h = std::hypot(re, im);
  }
  int e = 0;
  std::frexp(h, &e);  // h = f * 2^e, f in [0.5, 1)
  const int shift = e - 1;
  re = std::ldexp(re, -shift);
  im = std::ldexp(im, -shift);
  e2 += shift;
  // hypot rounding can land on the wrong side of [1, 2)
  h = std::hypot(re, im);
  if (h >= 2.0) {
    re *= 0.5;
    im *= 0.5;
    ++e2;
  } else if (h < 1.0) {
    re *= 2.0;
    im *= 2.0;
    --e2;
  }
  if (re == 0.0 && im == 0.0) return ExtComplex{};
  check_budget(e2);
  // +0.0 turns a negative zero component into a positive one
  return ExtComplex(re + 0.0, im + 0.0, e2);
}

ExtComplex ExtComplex::from_log2(double log2_mag, double phase) {
  if (std::isnan(log2_mag) || std::isnan(phase)) throw Error("non-finite mantissa");
  if (std::isinf(log2_mag)) {
    if (log2_mag < 0) return ExtComplex{};
    throw ExponentBudgetError();
  }
  const double fl = std::floor(log2_mag);
  if (std::abs(fl) > static_cast<double>(kExponentBudget)) throw ExponentBudgetError();
  const double m = std::exp2(log2_mag - fl);
  if (phase == 0.0) return normalize(m, 0.0, static_cast<std::int64_t>(fl));
  return normalize(m * std::cos(phase), m * std::sin(phase), static_cast<std::int64_t>(fl));
}

std::complex<double> ExtComplex::to_complex() const {
  if (is_zero()) return {0.0, 0.0};
  const std::int64_t e = std::clamp<std::int64_t>(e2_, -4000, 4000);
  return {std::ldexp(re_, static_cast<int>(e)), std::ldexp(im_, static_cast<int>(e))};
}

double ExtComplex::abs() const {
  if (is_zero()) return 0.0;
  const std::int64_t e = std::clamp<std::int64_t>(e2_, -4000, 4000);
  return std::ldexp(std::hypot(re_, im_), static_cast<int>(e));
}

ExtComplex ext_normalize(double raw_re, double raw_im, std::int64_t raw_e2) {
  return ExtComplex::normalize(raw_re, raw_im, raw_e2);
}

ExtComplex ext_mul(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_zero() || b.is_zero()) return ExtComplex{};
  const double re = a.m_re() * b.m_re() - a.m_im() * b.m_im();
  const double im = a.m_re() * b.m_im() + a.m_im() * b.m_re();
  return ExtComplex::normalize(re, im, a.e2() + b.e2());
}

ExtComplex ext_add(const ExtComplex& a, const ExtComplex& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const std::int64_t diff = a.e2() - b.e2();
  if (diff > kSwampBits) return a;
  if (diff < -kSwampBits) return b;
  if (diff >= 0) {
    const int s = static_cast<int>(-diff);
    return ExtComplex::normalize(a.m_re() + std::ldexp(b.m_re(), s),
                                 a.m_im() + std::ldexp(b.m_im(), s), a.e2());
  }
  const int s = static_cast<int>(diff);
  return ExtComplex::normalize(std::ldexp(a.m_re(), s) + b.m_re(),
                               std::ldexp(a.m_im(), s) + b.m_im(), b.e2());
}

ExtComplex ext_neg(const ExtComplex& a) {
  if (a.is_zero()) return a;
  return ExtComplex::normalize(-a.m_re(), -a.m_im(), a.e2());
}

ExtComplex ext_sub(const ExtComplex& a, const ExtComplex& b) { return ext_add(a, ext_neg(b)); }

ExtComplex ext_conj(const ExtComplex& a) {
  if (a.is_zero()) return a;
  return ExtComplex::normalize(a.m_re(), -a.m_im(), a.e2());
}

ExtComplex ext_div(const ExtComplex& a, const ExtComplex& b) {
  if (b.is_zero()) throw Error("division by zero");
  if (a.is_zero()) return a;
  const double n = b.m_re() * b.m_re() + b.m_im() * b.m_im();
  const double re = (a.m_re() * b.m_re() + a.m_im() * b.m_im()) / n;
  const double im = (a.m_im() * b.m_re() - a.m_re() * b.m_im()) / n;
  return ExtComplex::normalize(re, im, a.e2() - b.e2());
}

LogMag ext_abs_log(const ExtComplex& a) {
  if (a.is_zero()) return LogMag::neg_inf();
  return LogMag(std::log(std::hypot(a.m_re(), a.m_im())) + static_cast<double>(a.e2()) * kLn2);
}

PointK::PointK(int k) : k_(k) {
  if (k < 1 || k > kMaxDim) throw UsageError("point dimension out of range");
}

PointK::PointK(std::initializer_list<ExtComplex> coords) : PointK(static_cast<int>(coords.size())) {
  std::copy(coords.begin(), coords.end(), c_.begin());
}

PointK PointK::from_complex(std::span<const std::complex<double>> coords) {
  PointK p(static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) p.c_[i] = ExtComplex::from_complex(coords[i]);
  return p;
}

PointK PointK::of(std::complex<double> z, std::complex<double> w) {
  return PointK{ExtComplex::from_complex(z), ExtComplex::from_complex(w)};
}

LogMag PointK::norm1_ln() const {
  LogMag best = LogMag::neg_inf();
  for (int i = 0; i < k_; ++i) best = std::max(best, ext_abs_log(c_[static_cast<std::size_t>(i)]));
  return best;
}

bool operator==(const PointK& a, const PointK& b) {
  if (a.k_ != b.k_) return false;
  for (int i = 0; i < a.k_; ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

}  // namespace shortck
