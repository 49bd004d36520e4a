#include "shortck/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shortck/dynsys.hpp"
#include "shortck/error.hpp"

namespace shortck {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::short_c2: return "short";
    case Regime::fb: return "fb";
    case Regime::geometric: return "geometric";
  }
  return "geometric";
}

Regime regime_from_string(const std::string& s) {
  if (s == "short") return Regime::short_c2;
  if (s == "fb") return Regime::fb;
  if (s == "geometric") return Regime::geometric;
  throw UsageError("unknown regime: " + s);
}

namespace {

void check_c(double c) {
  if (!(c > 0.0 && c < 1.0)) throw UsageError("schedule constant c must lie in (0,1)");
}

// Forced FB3 increment after eps_n.
double fb3_increment(int n) { return std::exp2(-static_cast<double>(n) / 2.0) / kLn2; }

}  // namespace

Schedule Schedule::from_eps(Regime regime, double c, std::vector<double> eps) {
  check_c(c);
  if (regime == Regime::geometric) throw UsageError("geometric schedules take a constant t");
  if (eps.empty()) throw UsageError("schedule horizon must be at least 1");
  for (double e : eps)
    if (!std::isfinite(e)) throw UsageError("non-finite eps");
  Schedule s;
  s.regime_ = regime;
  s.c_ = c;
  s.N_ = static_cast<int>(eps.size());
  s.eps_ = std::move(eps);
  return s;
}

Schedule Schedule::geometric(double c, double t, int N) {
  check_c(c);
  if (!(t > 1.0) || !std::isfinite(t)) throw UsageError("geometric t must exceed 1");
  if (N < 1) throw UsageError("schedule horizon must be at least 1");
  Schedule s;
  s.regime_ = Regime::geometric;
  s.c_ = c;
  s.N_ = N;
  s.t_ = t;
  return s;
}

double Schedule::eps(int n) const {
  if (regime_ == Regime::geometric) return n * (1.0 - std::log2(t_));
  if (n < 1 || n > N_) throw UsageError("schedule index beyond horizon");
  return eps_[static_cast<std::size_t>(n - 1)];
}

double Schedule::log2_t(int n) const {
  if (n < 1 || n > N_) throw UsageError("schedule index beyond horizon");
  if (regime_ == Regime::geometric) return std::log2(t_);
  return 1.0 - eps(n) / n;
}

std::vector<double> Schedule::log2_t_array() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(N_));
  for (int n = 1; n <= N_; ++n) out.push_back(log2_t(n));
  return out;
}

double Schedule::log2_tpow(int n) const {
  if (n == 0) return 0.0;
  if (n < 0 || n > N_) throw UsageError("schedule index beyond horizon");
  if (regime_ == Regime::geometric) return n * std::log2(t_);
  return n - eps(n);
}

double Schedule::tpow(int n) const { return std::exp2(log2_tpow(n)); }

double Schedule::ln_a(int n) const { return tpow(n) * std::log(c_); }

double Schedule::log2_a(int n) const { return tpow(n) * std::log2(c_); }

ExtComplex Schedule::a(int n) const { return ExtComplex::from_log2(log2_a(n)); }

Schedule gen_short_schedule(double c, std::span<const double> eps) {
  if (eps.empty()) throw UsageError("schedule horizon must be at least 1");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0 && eps[i] < 1.0)) throw UsageError("short schedule needs 0 < eps_n < 1");
    if (i > 0 && eps[i] > eps[i - 1]) throw UsageError("short schedule needs eps nonincreasing");
  }
  return Schedule::from_eps(Regime::short_c2, c, std::vector<double>(eps.begin(), eps.end()));
}

Schedule gen_short_schedule(double c, double eps_const, int N) {
  if (N < 1) throw UsageError("schedule horizon must be at least 1");
  const std::vector<double> eps(static_cast<std::size_t>(N), eps_const);
  return gen_short_schedule(c, eps);
}

Schedule gen_fb_schedule(double c, int N) {
  if (N < 1) throw UsageError("schedule horizon must be at least 1");
  std::vector<double> eps(static_cast<std::size_t>(N));
  eps[0] = 1.0;
  for (int n = 2; n <= N; ++n) {
    const double prev = eps[static_cast<std::size_t>(n - 2)];
    eps[static_cast<std::size_t>(n - 1)] = std::max(std::log2(n + 1.0), prev + fb3_increment(n - 1));
  }
  return Schedule::from_eps(Regime::fb, c, std::move(eps));
}

Schedule gen_geometric_schedule(double c, double t, int N) { return Schedule::geometric(c, t, N); }

ScheduleReport validate_schedule(const Schedule& s) {
  ScheduleReport rep;
  const int N = s.horizon();
  const bool geo = s.regime() == Regime::geometric;

  rep.tn_min_margin = std::numeric_limits<double>::infinity();
  for (int n = 2; n <= N; ++n) {
    const double m = geo ? std::log2(s.t_const()) - 1.0 : s.eps(n - 1) - s.eps(n);
    if (m < rep.tn_min_margin) rep.tn_min_margin = m;
    if (m < 0.0 && rep.tn_ok) {
      rep.tn_ok = false;
      rep.tn_first_violation = n;
    }
  }
  if (N < 2) rep.tn_min_margin = 0.0;

  if (!geo) {
    rep.fb3_min_margin = std::numeric_limits<double>::infinity();
    for (int n = 1; n < N; ++n) {
      const double m = s.eps(n + 1) - (s.eps(n) + fb3_increment(n));
      if (m < rep.fb3_min_margin) rep.fb3_min_margin = m;
      if (m < 0.0 && rep.fb3_ok) {
        rep.fb3_ok = false;
        rep.fb3_first_violation = n + 1;
      }
    }
    if (N < 2) rep.fb3_min_margin = 0.0;

    for (int n = 2; n <= N; ++n) {
      const bool bad = s.regime() == Regime::fb ? s.eps(n) < s.eps(n - 1) : s.eps(n) > s.eps(n - 1);
      if (bad) rep.eps_monotone_ok = false;
    }
    if (s.regime() == Regime::fb)
      for (int n = 1; n <= N; ++n)
        if (s.eps(n) < std::log2(n + 1.0)) rep.eps_floor_ok = false;

    int from = N;
    while (from > 1 && s.eps(from) / from < s.eps(from - 1) / (from - 1)) --from;
    rep.eps_ratio_decreasing_from = from;

    for (int n = 1; n <= N; ++n) {
      const double e = s.eps(n);
      if (!(e > 0.0 && e < n)) rep.t_range_violations.push_back(n);
    }
    rep.t_range_ok = rep.t_range_violations.empty();

    for (int n = 1; n <= N; ++n) {
      for (int k = 1; n + k + 1 <= N; ++k) {
        if (s.eps(n + k + 1) >= n + 1) {
          rep.fb2_windows.push_back({n, k});
          break;
        }
      }
    }
  } else {
    rep.fb3_ok = false;
  }

  switch (s.regime()) {
    case Regime::short_c2: {
      bool in_range = true;
      for (int n = 1; n <= N; ++n)
        if (!(s.eps(n) > 0.0 && s.eps(n) < 1.0)) in_range = false;
      rep.valid = rep.tn_ok && rep.eps_monotone_ok && in_range;
      break;
    }
    case Regime::fb:
      rep.valid = rep.fb3_ok && rep.eps_monotone_ok && rep.eps_floor_ok;
      break;
    case Regime::geometric:
      rep.valid = s.t_const() > 1.0;
      break;
  }
  return rep;
}

ClaimReport verify_claim_tl(double t, int l_max) {
  if (!(t > 1.0 && t < 2.0)) throw UsageError("claim t^l > (l+1)/2 needs 1 < t < 2");
  if (l_max < 1) throw UsageError("l_max must be at least 1");
  ClaimReport rep;
  rep.t = t;
  rep.l_max = l_max;
  double tl = 1.0;
  for (int l = 1; l <= l_max; ++l) {
    tl *= t;
    const double m = tl - (l + 1) / 2.0;
    rep.margins.push_back(m);
    if (!(m > 0.0)) {
      if (rep.pass) rep.first_failure = l;
      rep.pass = false;
      rep.failures.push_back(l);
    }
  }
  if (t > 1.9) {
    bool ok = true;
    for (int l = 1; l < l_max; ++l)
      if (!(t * (l + 1) / 2.0 > (l + 2) / 2.0)) ok = false;
    rep.inductive_ok = ok;
  }
  return rep;
}

namespace {

// ln(r(1-r) r'^(l+1)) - ln a_{n+l}
std::vector<double> inclusion_margins(const Schedule& s, double r, double rp, int n, int l_max) {
  std::vector<double> m;
  m.reserve(static_cast<std::size_t>(l_max + 1));
  const double base = std::log(r * (1.0 - r));
  for (int l = 0; l <= l_max; ++l) m.push_back(base + (l + 1) * std::log(rp) - s.ln_a(n + l));
  return m;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

InclusionReport verify_inclusion_delta(const Schedule& s, double r, double r_prime, int n, int l_max,
                                       bool find_minimal, int boundary_samples) {
  if (!(r_prime > 0.0 && r_prime < r && r < 1.0)) throw UsageError("need 0 < r' < r < 1");
  if (n < 1 || l_max < 0) throw UsageError("need n >= 1 and l_max >= 0");
  if (n + l_max > s.horizon()) throw UsageError("n + l_max beyond schedule horizon");
  if (boundary_samples < 1) throw UsageError("boundary_samples must be positive");

  InclusionReport rep;
  int level = n;
  rep.margins = inclusion_margins(s, r, r_prime, level, l_max);
  if (find_minimal) {
    for (int m = n; m + l_max <= s.horizon(); ++m) {
      auto mg = inclusion_margins(s, r, r_prime, m, l_max);
      if (min_of(mg) > 0.0) {
        rep.minimal_n = m;
        level = m;
        rep.margins = std::move(mg);
        break;
      }
    }
  }

  // Boundary oracle: F_{level+l} on the torus of radius r_l must land in the
  // closed bidisc of radius r_{l+1}. At l = 0 this needs r <= r', so the
  // set inclusion is only sampled from l = 1.
  long samples = 0;
  long violations = 0;
  const int g = std::max(1, static_cast<int>(std::lround(std::sqrt(boundary_samples))));
  for (int l = 1; l <= l_max; ++l) {
    const double rl = r * std::pow(r_prime, l);
    const double rl1 = rl * r_prime;
    const MapSpec f = MapSpec::shiftlike(PolyOneVar::monomial(2), s.a(level + l));
    const double lim = std::log(rl1) + 1e-12;
    int count = 0;
    for (int i = 0; i < g && count < boundary_samples; ++i) {
      for (int j = 0; j < g && count < boundary_samples; ++j, ++count) {
        const double th1 = 2.0 * M_PI * i / g;
        const double th2 = 2.0 * M_PI * j / g;
        const PointK x = PointK::of(std::polar(rl, th1), std::polar(rl, th2));
        ++samples;
        if (apply(f, x).norm1_ln().value() > lim) ++violations;
      }
    }
  }

  auto& c = rep.cert;
  c.condition = "inclusion_delta";
  c.params = {{"c", s.c()}, {"r", r}, {"r_prime", r_prime}, {"n", static_cast<double>(level)},
              {"l_max", static_cast<double>(l_max)}};
  c.margin = min_of(rep.margins);
  c.samples = samples;
  c.violations = violations;
  c.verdict = decide(c.margin, violations);
  return rep;
}

GrowthSeries growth_series(const Schedule& s, int n_max) {
  if (s.regime() != Regime::fb) throw UsageError("growth series needs an fb schedule");
  if (n_max < 1 || n_max + 2 > s.horizon()) throw UsageError("n_max + 2 beyond schedule horizon");
  if (n_max > 1000) throw UsageError("n_max too large for binary64 growth values");
  GrowthSeries g;
  g.n_max = n_max;
  double ls = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    ls += s.tpow(n);
    g.log2_tpow.push_back(s.log2_tpow(n));
    g.G.push_back(2.0 * s.tpow(n + 1) - s.tpow(n + 2) - 0.5);
    g.ls.push_back(ls);
    g.rs.push_back(n / 2.0 + s.tpow(n + 1));
    g.lower_bound.push_back(std::exp2(3.0 * (n + 2) / 4.0 - (n + 1) / 2.0) - 0.5);
  }
  for (int n = n_max; n >= 1; --n) {
    if (g.ls[static_cast<std::size_t>(n - 1)] >= g.rs[static_cast<std::size_t>(n - 1)])
      g.crossover = n;
    else
      break;
  }
  return g;
}

}  // namespace shortck
