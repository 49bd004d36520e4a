#include "shortck/shortfb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shortck/error.hpp"
#include "shortck/parallel.hpp"

namespace shortck {

const char* to_string(EnvelopeSign s) {
  switch (s) {
    case EnvelopeSign::negative: return "negative";
    case EnvelopeSign::positive: return "positive";
    case EnvelopeSign::undecided: return "undecided";
  }
  return "undecided";
}

std::vector<LogMag> phi_series(const MapSequence& seq, const PointK& x, int n_max) {
  const Schedule* s = seq.schedule();
  if (s == nullptr) throw UsageError("envelope needs a schedule-driven sequence");
  if (n_max < 1) throw UsageError("envelope level must be at least 1");
  std::vector<LogMag> out;
  out.reserve(static_cast<std::size_t>(n_max));
  PointK y = x;
  bool collapsed = false;
  for (int n = 1; n <= n_max; ++n) {
    if (!collapsed) {
      try {
        y = apply(seq.at(n), y);
      } catch (const ExponentBudgetError&) {
        if (y.norm1_ln().value() >= 0.0) throw;
        collapsed = true;
      }
    }
    const LogMag floor_term(s->ln_a(static_cast<int>(seq.offset()) + n - 1));
    const LogMag orbit_term = collapsed ? LogMag::neg_inf() : y.norm1_ln();
    out.push_back(std::max(orbit_term, floor_term));
  }
  return out;
}

namespace {

EnvelopeSample make_sample(const PointK& x, int n, LogMag phi) {
  EnvelopeSample e;
  e.point = x;
  e.n = n;
  e.phi_n_ln = phi;
  e.tail = kLn2 * std::ldexp(1.0, -n);
  e.limit_est = std::ldexp(phi.value(), -n);
  e.u_n = e.limit_est + e.tail;
  return e;
}

}  // namespace

EnvelopeSample phi_u(const MapSequence& seq, const PointK& x, int n) {
  const auto phi = phi_series(seq, x, n);
  EnvelopeSample e = make_sample(x, n, phi.back());
  if (n >= 2) e.u_prev = make_sample(x, n - 1, phi[static_cast<std::size_t>(n - 2)]).u_n;
  return e;
}

EnvelopeSign envelope_sign(const EnvelopeSample& s, double slack) {
  if (s.u_n < -slack) return EnvelopeSign::negative;
  if (s.limit_est > slack) return EnvelopeSign::positive;
  return EnvelopeSign::undecided;
}

EnvelopeMembership envelope_membership(const MapSequence& seq, const PointK& x, const EstimatorConfig& cfg, int n,
                                       double slack) {
  EnvelopeMembership m;
  m.sample = phi_u(seq, x, n);
  m.sign = envelope_sign(m.sample, slack);
  m.classify_status = classify(seq, x, cfg).status;
  m.consistent = m.sign == EnvelopeSign::undecided || m.classify_status == PointStatus::undecided ||
                 (m.sign == EnvelopeSign::negative) == (m.classify_status == PointStatus::converged);
  return m;
}

std::vector<double> orbit_sup(const MapSequence& seq, double rho, int n_max, int grid, int threads) {
  if (!(rho >= 0.0)) throw UsageError("K radius must be nonnegative");
  if (grid < 1 || n_max < 0) throw UsageError("grid and n_max must be positive");
  if (seq.dim() != 2) throw UsageError("orbit suprema need a two-dimensional sequence");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> best(static_cast<std::size_t>(n_max + 1), kNegInf);
  if (rho == 0.0) return best;
  const std::size_t cells = static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid);
  std::vector<std::vector<double>> per(cells);
  parallel_for(cells, threads, [&](std::size_t idx) {
    const double th1 = 2.0 * M_PI * static_cast<double>(idx / static_cast<std::size_t>(grid)) / grid;
    const double th2 = 2.0 * M_PI * static_cast<double>(idx % static_cast<std::size_t>(grid)) / grid;
    PointK y = PointK::of(std::polar(rho, th1), std::polar(rho, th2));
    auto& v = per[idx];
    v.assign(static_cast<std::size_t>(n_max + 1), kNegInf);
    v[0] = y.norm1_ln().value();
    for (int n = 1; n <= n_max; ++n) {
      try {
        y = apply(seq.at(n), y);
      } catch (const ExponentBudgetError&) {
        const double fill = y.norm1_ln().value() < 0.0 ? kNegInf : std::numeric_limits<double>::infinity();
        for (int k = n; k <= n_max; ++k) v[static_cast<std::size_t>(k)] = fill;
        return;
      }
      v[static_cast<std::size_t>(n)] = y.norm1_ln().value();
    }
  });
  for (const auto& v : per)
    for (std::size_t n = 0; n < v.size(); ++n) best[n] = std::max(best[n], v[n]);
  return best;
}

namespace {

void check_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) throw UsageError(std::string(what) + " must lie in (0,1)");
}

void check_range(int n_lo, int n_hi, int k_max) {
  if (n_lo < 1 || n_hi < n_lo) throw UsageError("n_range must satisfy 1 <= lo <= hi");
  if (k_max < 0) throw UsageError("k_max must be nonnegative");
}

MapSequence quadratic_sequence(const Schedule& s) {
  SequenceTemplate t;
  t.kind = MapKind::shiftlike;
  t.k = 2;
  t.d = 2;
  return MapSequence::scheduled(s, t);
}

}  // namespace

FBReport verify_fb1(double c, double t, double b, int n_lo, int n_hi, int k_max, double K_radius, int grid,
                    int threads) {
  check_unit(c, "c");
  check_unit(b, "b");
  if (!(t > 1.0 && t < 2.0)) throw UsageError("t must lie in (1,2)");
  check_range(n_lo, n_hi, k_max);
  const Schedule s = gen_geometric_schedule(c, t, n_hi + k_max + 2);
  const MapSequence seq = quadratic_sequence(s);
  FBReport rep;
  rep.lemma = "FB1";
  rep.params = {{"c", c}, {"t", t}, {"b", b}, {"k_max", static_cast<double>(k_max)}, {"K_radius", K_radius}};
  rep.orbit_sup_ln = orbit_sup(seq, K_radius, n_hi + k_max, grid, threads);
  const double lb = std::log(b), lc = std::log(c);
  for (int n = n_lo; n <= n_hi; ++n) {
    std::vector<double> m;
    for (int k = 0; k <= k_max; ++k)
      m.push_back(lb - std::log(std::pow(b, k) + 1.0) - (2.0 - t) * std::pow(t, n + k + 1) * lc);
    const bool ineq = *std::min_element(m.begin(), m.end()) > 0.0;
    const bool seeded = rep.orbit_sup_ln[static_cast<std::size_t>(n)] <= s.ln_a(n + 1);
    rep.per_k_margins = std::move(m);
    if (ineq && seeded) {
      rep.minimal_n = n;
      rep.seed_ok = true;
      break;
    }
  }
  if (!rep.minimal_n) throw NoAdmissibleError("FB1: no admissible n in range");
  const int n = *rep.minimal_n;
  for (int k = 0; k <= k_max; ++k) {
    ++rep.direct_checks;
    if (rep.orbit_sup_ln[static_cast<std::size_t>(n + k)] > s.ln_a(n + k + 1) + k * lb) ++rep.direct_violations;
  }
  return rep;
}

FBReport verify_fb3(const Schedule& s, double b, int n_lo, int n_hi, int k_max, double K_radius, int grid,
                    int threads) {
  if (s.regime() != Regime::fb) throw UsageError("FB3 needs an fb schedule");
  check_unit(b, "b");
  check_range(n_lo, n_hi, k_max);
  if (n_hi + k_max + 2 > s.horizon()) throw UsageError("n_range + k_max beyond schedule horizon");
  FBReport rep;
  rep.lemma = "FB3";
  rep.params = {{"c", s.c()}, {"b", b}, {"k_max", static_cast<double>(k_max)}, {"K_radius", K_radius}};
  const double lb = std::log(b), lc = std::log(s.c());
  for (int n = n_lo; n <= n_hi; ++n) {
    std::vector<double> m;
    for (int k = 0; k <= k_max; ++k) {
      const double rhs = lb - std::log(1.0 + std::pow(b, k));
      const double e1 = s.eps(n + k + 1), e2 = s.eps(n + k + 2);
      const double head = n + k + 2 - e2;
      const double final_form = std::exp2(head - (n + k + 1) / 2.0);
      const double form_c = std::exp2(head) * kLn2 * (e2 - e1);
      const double form_a = std::exp2(head) * std::expm1((e2 - e1) * kLn2);
      const double mf = rhs - final_form * lc;
      m.push_back(mf);
      if (mf > 0.0) {
        ++rep.chain_checks;
        if (!(rhs - form_c * lc > 0.0) || !(rhs - form_a * lc > 0.0)) ++rep.chain_counterexamples;
      }
    }
    const bool ok = *std::min_element(m.begin(), m.end()) > 0.0;
    if (!rep.minimal_n) rep.per_k_margins = std::move(m);
    if (ok && !rep.minimal_n) rep.minimal_n = n;
  }
  if (!rep.minimal_n) throw NoAdmissibleError("FB3: no admissible n in range");
  const int n = *rep.minimal_n;
  const MapSequence seq = quadratic_sequence(s);
  rep.orbit_sup_ln = orbit_sup(seq, K_radius, n + k_max, grid, threads);
  rep.seed_ok = rep.orbit_sup_ln[static_cast<std::size_t>(n)] <= s.ln_a(n + 1);
  for (int k = 0; k <= k_max; ++k) {
    ++rep.direct_checks;
    if (rep.orbit_sup_ln[static_cast<std::size_t>(n + k)] > s.ln_a(n + k + 1) + k * lb) ++rep.direct_violations;
  }
  return rep;
}

}  // namespace shortck
