#pragma once

// Extended-exponent complex arithmetic.
//
// An ExtComplex holds (m_re + i m_im) * 2^e2 with a binary64 mantissa and a
// 64-bit exponent. Nonzero values keep 1 <= |m| < 2 (complex modulus), so
// log|x| is one hypot and one log away. Orbits that grow like d^n or
// coefficients like c^(2^n) stay representable long after binary64 would
// have overflowed or flushed to zero.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

namespace shortck {

inline constexpr double kLn2 = 0.693147180559945309417232121458176568;
inline constexpr std::int64_t kExponentBudget = std::int64_t{1} << 62;

// Natural-log magnitude. Zero magnitude is represented by -infinity; NaN is
// never stored.
class LogMag {
 public:
  constexpr LogMag() = default;
  explicit LogMag(double v);

  static LogMag neg_inf() { return LogMag(-std::numeric_limits<double>::infinity()); }

  double value() const { return v_; }
  bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }
  // log+ = max(log x, 0)
  double plus() const { return v_ > 0 ? v_ : 0.0; }

  friend bool operator==(const LogMag&, const LogMag&) = default;
  friend auto operator<=>(const LogMag& a, const LogMag& b) { return a.v_ <=> b.v_; }

 private:
  double v_ = 0.0;
};

class ExtComplex {
 public:
  constexpr ExtComplex() = default;

  // Normalizes an arbitrary finite (re + i im) * 2^e2.
  static ExtComplex normalize(double re, double im, std::int64_t e2);
  static ExtComplex from_double(double re, double im = 0.0) { return normalize(re, im, 0); }
  static ExtComplex from_complex(std::complex<double> z) { return normalize(z.real(), z.imag(), 0); }
  // |x| = 2^log2_mag, arg x = phase.
  static ExtComplex from_log2(double log2_mag, double phase = 0.0);
  // |x| = e^ln_mag, arg x = phase.
  static ExtComplex from_ln(double ln_mag, double phase = 0.0) {
    return from_log2(ln_mag / kLn2, phase);
  }
  static ExtComplex one() { return ExtComplex(1.0, 0.0, 0); }

  double m_re() const { return re_; }
  double m_im() const { return im_; }
  std::int64_t e2() const { return e2_; }
  bool is_zero() const { return re_ == 0.0 && im_ == 0.0; }

  // May overflow to inf or flush to zero; only for moderate values.
  std::complex<double> to_complex() const;
  double abs() const;

  friend bool operator==(const ExtComplex&, const ExtComplex&) = default;

 private:
  constexpr ExtComplex(double re, double im, std::int64_t e2) : re_(re), im_(im), e2_(e2) {}

  double re_ = 0.0;
  double im_ = 0.0;
  std::int64_t e2_ = 0;
};

ExtComplex ext_normalize(double raw_re, double raw_im, std::int64_t raw_e2);
ExtComplex ext_mul(const ExtComplex& a, const ExtComplex& b);
// Operands whose exponents differ by more than kSwampBits leave the larger
// one unchanged.
ExtComplex ext_add(const ExtComplex& a, const ExtComplex& b);
ExtComplex ext_neg(const ExtComplex& a);
ExtComplex ext_sub(const ExtComplex& a, const ExtComplex& b);
ExtComplex ext_div(const ExtComplex& a, const ExtComplex& b);
ExtComplex ext_conj(const ExtComplex& a);
LogMag ext_abs_log(const ExtComplex& a);

inline constexpr std::int64_t kSwampBits = 120;

inline ExtComplex operator*(const ExtComplex& a, const ExtComplex& b) { return ext_mul(a, b); }
inline ExtComplex operator+(const ExtComplex& a, const ExtComplex& b) { return ext_add(a, b); }
inline ExtComplex operator-(const ExtComplex& a, const ExtComplex& b) { return ext_sub(a, b); }
inline ExtComplex operator-(const ExtComplex& a) { return ext_neg(a); }
inline ExtComplex operator/(const ExtComplex& a, const ExtComplex& b) { return ext_div(a, b); }

inline constexpr int kMaxDim = 8;

// A point of C^k, 2 <= k <= kMaxDim.
class PointK {
 public:
  PointK() = default;
  explicit PointK(int k);
  PointK(std::initializer_list<ExtComplex> coords);
  static PointK from_complex(std::span<const std::complex<double>> coords);
  static PointK of(std::complex<double> z, std::complex<double> w);

  int dim() const { return k_; }
  ExtComplex& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  const ExtComplex& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::span<const ExtComplex> coords() const { return {c_.data(), static_cast<std::size_t>(k_)}; }

  // ln ||x||_1 where ||x||_1 is the max coordinate modulus.
  LogMag norm1_ln() const;
  friend bool operator==(const PointK& a, const PointK& b);

 private:
  std::array<ExtComplex, kMaxDim> c_{};
  int k_ = 0;
};

}  // namespace shortck
