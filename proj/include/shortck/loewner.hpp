#pragma once

// Deformation families
//
//   F_t(z, w) = ((1 - t) P(z) + (a + sigma t) w, a z),   0 <= t <= 1,
//
// on the bidiscs D_t = D(0; (1+t) r, (1+2t) r), with
//   quadratic test:  P(z) = z^2,           sigma = r,
//   general:         P(z) = p(e^{i theta} z), sigma = M r^(d-1),
// and the sublevel decomposition of a single Henon map.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shortck/dynsys.hpp"
#include "shortck/report.hpp"

namespace shortck {

using cplx = std::complex<double>;

struct Bidisc {
  double r1 = 1.0;
  double r2 = 1.0;
  bool contains(cplx z, cplx w) const { return std::abs(z) < r1 && std::abs(w) < r2; }
  bool contains_closed(cplx z, cplx w, double slack) const {
    return std::abs(z) <= r1 + slack && std::abs(w) <= r2 + slack;
  }
};

enum class FamilyVariant { quadratic_test, general };

const char* to_string(FamilyVariant v);

class DeformationFamily {
 public:
  static DeformationFamily quadratic(double a, double r);
  // p is the polynomial of F(z, w) = (p(z) + delta w, delta z); a = |delta|
  // and theta = -arg delta make the coupling real and positive.
  static DeformationFamily general(const PolyOneVar& p, cplx delta, double r, double M);
  // Skips the M floor; for exercising degenerate configurations only.
  static DeformationFamily general_unchecked(const PolyOneVar& p, cplx delta, double r, double M);
  static double min_M(int d, double r);

  FamilyVariant variant() const { return variant_; }
  double a() const { return a_; }
  double r() const { return r_; }
  double M() const { return M_; }
  double theta() const { return theta_; }
  int degree() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<cplx>& low() const { return coeffs_; }
  double sigma() const { return sigma_; }

  cplx P(cplx z) const;
  // Upper bound for |P| on the closed disc of radius rho.
  double P_sup(double rho) const;
  Bidisc domain(double t) const { return {(1.0 + t) * r_, (1.0 + 2.0 * t) * r_}; }

 private:
  FamilyVariant variant_ = FamilyVariant::quadratic_test;
  double a_ = 0.0, r_ = 0.0, M_ = 0.0, theta_ = 0.0, sigma_ = 0.0;
  // Low coefficients c_0..c_{d-1} of p; size d (zeros for the quadratic test).
  std::vector<cplx> coeffs_;
};

void check_t(double t);

std::pair<cplx, cplx> family_map(const DeformationFamily& fam, double t, cplx z, cplx w);
PointK family_map(const DeformationFamily& fam, double t, const PointK& x);
// Unique preimage (z, w) of a target under F_t (no domain check).
std::pair<cplx, cplx> family_preimage(const DeformationFamily& fam, double t, cplx z0, cplx w0);
// target in F_t(D_t)
bool in_family_image(const DeformationFamily& fam, double t, cplx z0, cplx w0);

struct HorizontalDisc {
  cplx height;
  cplx center;
  double radius = 0.0;
};

HorizontalDisc slice_image(const DeformationFamily& fam, double t, cplx z0);

// Analytic margin sigma r (1 + 2s + 2t) - sup |P| on |z0| = (1+t) r.
double monotone_margin(const DeformationFamily& fam, double t, double s);
CertReport certify_monotone(const DeformationFamily& fam, double t, double s, int samples = 1000,
                            std::uint64_t seed = 1);
// Sampled image points of F_t(D_t) tested against F_s(D_s) through the preimage.
long sample_image_inclusion(const DeformationFamily& fam, double t, double s, long samples, std::uint64_t seed);

struct UnionWitness {
  double t_prime = 0.0;
  cplx z;
  cplx w_prime;
  CertReport cert;
};

UnionWitness certify_union(const DeformationFamily& fam, double t, cplx z0, cplx w0);

struct IntersectionResult {
  cplx z;
  cplx w_limit;
  // |w_{t'} - w_t| along the supplied t' sequence.
  std::vector<double> gaps;
  double residual = 0.0;
  CertReport cert;
};

IntersectionResult certify_intersection(const DeformationFamily& fam, double t, cplx z0, cplx w0,
                                        std::span<const double> t_steps);

// Smallest m(n) per n = 1..len(r_seq)-2 with (r_{n+2} - r_{n+1}) d^m > ln(n / delta)
// and m(n) >= n. Strict mode adds m(n) > m(n-1) and (r_{n+2} - r_{n+1}) d^m >= L'.
std::vector<int> choose_m(int d, std::span<const double> r_seq, double delta, bool strict = false,
                          double L_prime = 0.0);

struct SublevelDecomposition {
  MapSpec henon;
  double r = 0.0;
  double delta = 0.0;
  double bidisc_c = 0.0;
  double L_prime = 0.0;
  // r_seq[i] = r_{i+1}; m_seq[i] = m(i+1).
  std::vector<double> r_seq;
  std::vector<int> m_seq;
  // Interpolated exponents rho_j, j = 0..m(N); scales s_j = e^{-rho_j d^j}.
  std::vector<double> exponents;
  std::vector<ExtComplex> scales;
  std::vector<ExtComplex> inv_scales;
  double factorization_max_rel = 0.0;

  int N() const { return static_cast<int>(m_seq.size()); }
  int m(int n) const { return n == 0 ? 0 : m_seq[static_cast<std::size_t>(n - 1)]; }
  double r_at(int n) const { return r_seq[static_cast<std::size_t>(n - 1)]; }
};

SublevelDecomposition build_decomposition(const MapSpec& henon, double r, int N, double delta, double c);

// L_j(x) = s_j H(x / s_{j-1})
PointK factor_apply(const SublevelDecomposition& dec, int j, const PointK& x);
// Phi_n(x) = s_{m(n)} H^{m(n)}(x)
PointK Phi(const SublevelDecomposition& dec, int n, const PointK& x);
// ln ||H^{m(n)} x|| < r_{n+1} d^{m(n)}
bool in_omega(const SublevelDecomposition& dec, int n, const PointK& x);
// Block composition L_{m(n)} o ... o L_{m(n-1)+1} against Phi_n o Phi_{n-1}^{-1}.
double factorization_error(const SublevelDecomposition& dec, int n, const PointK& x);

struct NestingReport {
  long samples = 0;
  long violations = 0;
  std::vector<long> members;
};

NestingReport check_nesting(const SublevelDecomposition& dec, long samples, double box_radius,
                            std::uint64_t seed, int threads);

struct ChainReport {
  CertReport cert;
  double a = 0.0;
  double r = 0.0;
  std::vector<double> t_grid;
  long endpoint_mismatches = 0;
};

// Level n of a scheduled shift-like sequence with d = 2, q = 0 and real
// positive coefficients; r <= 0 selects the default radius.
ChainReport certify_chain(const MapSequence& seq, int n, std::span<const double> t_grid, double r = 0.0,
                          long samples = 1000, std::uint64_t seed = 1);

}  // namespace shortck
