#pragma once

// Coefficient schedules a_n = c^(t_n^n) and the inequality chains that
// separate the short regime from the Fatou-Bieberbach regime.
//
// t_n^n is carried as its base-2 exponent (n - eps_n for the short and fb
// regimes), so doubling and increment conditions compare exponents, never
// overflowing values.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "shortck/report.hpp"
#include "shortck/xarith.hpp"

namespace shortck {

enum class Regime { short_c2, fb, geometric };

const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);

class Schedule {
 public:
  // eps holds eps_1..eps_N (short, fb); geometric uses a constant t.
  static Schedule from_eps(Regime regime, double c, std::vector<double> eps);
  static Schedule geometric(double c, double t, int N);

  Regime regime() const { return regime_; }
  double c() const { return c_; }
  int horizon() const { return N_; }
  // Constant t of the geometric regime.
  double t_const() const { return t_; }

  const std::vector<double>& eps() const { return eps_; }
  double eps(int n) const;
  // log2 t_n, n = 1..N.
  double log2_t(int n) const;
  std::vector<double> log2_t_array() const;
  // log2(t_n^n): n - eps_n, or n log2 t; 0 at n = 0 (t^0 = 1).
  double log2_tpow(int n) const;
  double tpow(int n) const;
  // ln a_n = t_n^n ln c.
  double ln_a(int n) const;
  double log2_a(int n) const;
  ExtComplex a(int n) const;

 private:
  Regime regime_ = Regime::geometric;
  double c_ = 0.5;
  int N_ = 0;
  double t_ = 2.0;
  std::vector<double> eps_;
};

Schedule gen_short_schedule(double c, std::span<const double> eps);
Schedule gen_short_schedule(double c, double eps_const, int N);
Schedule gen_fb_schedule(double c, int N);
Schedule gen_geometric_schedule(double c, double t, int N);

struct Fb2Window {
  int n = 0;
  int k = 0;
};

struct ScheduleReport {
  bool valid = true;
  // Tn doubling t_n^n >= 2 t_{n-1}^{n-1}: margin in log2 units, n = 2..N.
  bool tn_ok = true;
  double tn_min_margin = 0.0;
  int tn_first_violation = 0;
  // FB3 increments eps_{n+1} >= eps_n + 1/(2^{n/2} ln 2).
  bool fb3_ok = true;
  double fb3_min_margin = 0.0;
  int fb3_first_violation = 0;
  // eps_n nonincreasing (short) / nondecreasing (fb).
  bool eps_monotone_ok = true;
  // eps_n >= log2(n+1) (fb only).
  bool eps_floor_ok = true;
  // Smallest n0 after which eps_n / n strictly decreases through N.
  int eps_ratio_decreasing_from = 0;
  // 1 < t_n < 2.
  bool t_range_ok = true;
  std::vector<int> t_range_violations;
  // (n, k(n)) with eps_{n+k+1} >= n + 1, smallest k per n.
  std::vector<Fb2Window> fb2_windows;
};

ScheduleReport validate_schedule(const Schedule& s);

struct ClaimReport {
  double t = 0.0;
  int l_max = 0;
  bool pass = true;
  int first_failure = 0;
  std::vector<int> failures;
  // Margins t^l - (l+1)/2.
  std::vector<double> margins;
  // For t > 1.9: the inductive step t (l+1)/2 > (l+2)/2 replayed for each l.
  std::optional<bool> inductive_ok;
};

ClaimReport verify_claim_tl(double t, int l_max);

struct InclusionReport {
  CertReport cert;
  // Analytic margins ln(r(1-r) r'^(l+1)) - t_{n+l}^{n+l} ln c, l = 0..l_max.
  std::vector<double> margins;
  std::optional<int> minimal_n;
};

// F_{n+l}(bidisc r_l) inside bidisc r_{l+1}, r_l = r r'^l. Margins cover
// l = 0..l_max; boundary sampling covers l = 1..l_max. With find_minimal
// the level n is the scan start and the result carries the first level whose
// analytic check passes for every l <= l_max.
InclusionReport verify_inclusion_delta(const Schedule& s, double r, double r_prime, int n, int l_max,
                                       bool find_minimal = false, int boundary_samples = 100);

struct GrowthSeries {
  int n_max = 0;
  // Index i holds n = i + 1.
  std::vector<double> G;
  std::vector<double> ls;
  std::vector<double> rs;
  std::vector<double> lower_bound;
  // log2 of t_n^n (exact domain for comparisons).
  std::vector<double> log2_tpow;
  // First n from which ls_m >= rs_m holds for every m through n_max.
  std::optional<int> crossover;
};

GrowthSeries growth_series(const Schedule& s, int n_max);

}  // namespace shortck
