#include "shortck/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shortck/error.hpp"
#include "shortck/green.hpp"
#include "shortck/parallel.hpp"
#include "shortck/rng.hpp"

namespace shortck {

const char* to_string(FamilyVariant v) { return v == FamilyVariant::quadratic_test ? "quadratic_test" : "general"; }

namespace {

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(std::string(what) + " must be positive");
}

cplx sample_disc(SplitMix64& rng, double radius) {
  return std::polar(radius * std::sqrt(rng.uniform()), 2.0 * M_PI * rng.uniform());
}

}  // namespace

DeformationFamily DeformationFamily::quadratic(double a, double r) {
  check_positive(a, "a");
  check_positive(r, "r");
  DeformationFamily f;
  f.variant_ = FamilyVariant::quadratic_test;
  f.a_ = a;
  f.r_ = r;
  f.sigma_ = r;
  f.coeffs_.assign(2, cplx{});
  return f;
}

double DeformationFamily::min_M(int d, double r) { return 4.0 * (std::pow(2.0 * r, d) + d) / std::pow(r, d); }

DeformationFamily DeformationFamily::general_unchecked(const PolyOneVar& p, cplx delta, double r, double M) {
  check_positive(r, "r");
  if (delta == cplx{}) throw UsageError("delta must be nonzero");
  DeformationFamily f;
  f.variant_ = FamilyVariant::general;
  f.a_ = std::abs(delta);
  f.theta_ = -std::arg(delta);
  f.r_ = r;
  f.M_ = M;
  f.sigma_ = M * std::pow(r, p.degree() - 1);
  for (const auto& c : p.low()) f.coeffs_.push_back(c.to_complex());
  return f;
}

DeformationFamily DeformationFamily::general(const PolyOneVar& p, cplx delta, double r, double M) {
  check_positive(r, "r");
  if (!(M >= min_M(p.degree(), r))) throw UsageError("M below the floor 4 (2^d r^d + d) / r^d");
  return general_unchecked(p, delta, r, M);
}

cplx DeformationFamily::P(cplx z) const {
  if (variant_ == FamilyVariant::quadratic_test) return z * z;
  const cplx u = theta_ == 0.0 ? z : z * std::polar(1.0, theta_);
  cplx acc(1.0, 0.0);
  for (int j = degree() - 1; j >= 0; --j) acc = acc * u + coeffs_[static_cast<std::size_t>(j)];
  return acc;
}

double DeformationFamily::P_sup(double rho) const {
  double s = std::pow(rho, degree());
  for (int j = 0; j < degree(); ++j) s += std::abs(coeffs_[static_cast<std::size_t>(j)]) * std::pow(rho, j);
  return s;
}

void check_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw UsageError("t out of range [0,1]");
}

std::pair<cplx, cplx> family_map(const DeformationFamily& fam, double t, cplx z, cplx w) {
  check_t(t);
  return {(1.0 - t) * fam.P(z) + (fam.a() + fam.sigma() * t) * w, fam.a() * z};
}

PointK family_map(const DeformationFamily& fam, double t, const PointK& x) {
  if (x.dim() != 2) throw UsageError("dimension mismatch");
  const auto [z, w] = family_map(fam, t, x[0].to_complex(), x[1].to_complex());
  return PointK::of(z, w);
}

std::pair<cplx, cplx> family_preimage(const DeformationFamily& fam, double t, cplx z0, cplx w0) {
  check_t(t);
  const cplx z = w0 / fam.a();
  return {z, (z0 - (1.0 - t) * fam.P(z)) / (fam.a() + fam.sigma() * t)};
}

bool in_family_image(const DeformationFamily& fam, double t, cplx z0, cplx w0) {
  const auto [z, w] = family_preimage(fam, t, z0, w0);
  return fam.domain(t).contains(z, w);
}

HorizontalDisc slice_image(const DeformationFamily& fam, double t, cplx z0) {
  check_t(t);
  if (std::abs(z0) > (1.0 + t) * fam.r() * (1.0 + 1e-12)) throw UsageError("z0 outside the slice domain");
  return {fam.a() * z0, (1.0 - t) * fam.P(z0), (fam.a() + fam.sigma() * t) * (1.0 + 2.0 * t) * fam.r()};
}

double monotone_margin(const DeformationFamily& fam, double t, double s) {
  return fam.sigma() * fam.r() * (1.0 + 2.0 * s + 2.0 * t) - fam.P_sup((1.0 + t) * fam.r());
}

CertReport certify_monotone(const DeformationFamily& fam, double t, double s, int samples, std::uint64_t seed) {
  check_t(t);
  check_t(s);
  if (!(t < s)) throw UsageError("monotonicity needs t < s");
  CertReport rep;
  rep.condition = "monotone";
  rep.params = {{"t", t}, {"s", s}, {"a", fam.a()}, {"r", fam.r()}, {"sigma", fam.sigma()}};
  rep.margin = monotone_margin(fam, t, s);
  SplitMix64 rng(seed, 0);
  for (int i = 0; i < samples; ++i) {
    const cplx z0 = sample_disc(rng, (1.0 + t) * fam.r());
    const auto dt = slice_image(fam, t, z0);
    const auto ds = slice_image(fam, s, z0);
    if (!(std::abs(dt.center - ds.center) + dt.radius < ds.radius)) ++rep.violations;
    ++rep.samples;
  }
  rep.verdict = decide(rep.margin, rep.violations);
  return rep;
}

long sample_image_inclusion(const DeformationFamily& fam, double t, double s, long samples, std::uint64_t seed) {
  SplitMix64 rng(seed, 1);
  const Bidisc D = fam.domain(t);
  long bad = 0;
  for (long i = 0; i < samples; ++i) {
    const cplx z = sample_disc(rng, D.r1);
    const cplx w = sample_disc(rng, D.r2);
    const auto [z0, w0] = family_map(fam, t, z, w);
    if (!in_family_image(fam, s, z0, w0)) ++bad;
  }
  return bad;
}

namespace {

double max_abs_diff(cplx a0, cplx a1, cplx b0, cplx b1) { return std::max(std::abs(a0 - b0), std::abs(a1 - b1)); }

}  // namespace

UnionWitness certify_union(const DeformationFamily& fam, double t, cplx z0, cplx w0) {
  check_t(t);
  if (!(t > 0.0)) throw UsageError("union witness needs t > 0");
  const auto [z, w] = family_preimage(fam, t, z0, w0);
  if (!fam.domain(t).contains(z, w)) throw Error("target not in Omega_t");

  auto w_at = [&](double tp) { return w + (t - tp) * (fam.sigma() * w - fam.P(z)) / (fam.a() + fam.sigma() * tp); };
  auto ok = [&](double gap) {
    const double tp = t - gap;
    return tp < t && fam.domain(tp).contains(z, w_at(tp));
  };

  UnionWitness out;
  out.z = z;
  out.cert.condition = "union";
  out.cert.params = {{"t", t}, {"a", fam.a()}, {"r", fam.r()}};
  double lo = t / 2.0;
  bool found = ok(lo);
  if (!found) {
    double hi = lo;
    for (int i = 0; i < 1100 && !found; ++i) {
      hi = lo;
      lo /= 2.0;
      if (lo == 0.0) break;
      found = ok(lo);
    }
    if (found) {
      for (int i = 0; i < 200 && hi - lo > lo * 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid))
          lo = mid;
        else
          hi = mid;
      }
    }
  }
  if (!found) {
    out.t_prime = t;
    out.w_prime = w;
    out.cert.verdict = Verdict::refuted;
    out.cert.margin = -1.0;
    return out;
  }
  out.t_prime = t - lo;
  out.w_prime = w_at(out.t_prime);
  const auto [x0, x1] = family_map(fam, out.t_prime, z, out.w_prime);
  const double resid = max_abs_diff(x0, x1, z0, w0);
  const Bidisc D = fam.domain(out.t_prime);
  out.cert.params.push_back({"t_prime", out.t_prime});
  out.cert.params.push_back({"residual", resid});
  out.cert.margin = std::min(D.r1 - std::abs(z), D.r2 - std::abs(out.w_prime));
  out.cert.samples = 1;
  out.cert.violations = resid <= 1e-12 * std::max(1.0, std::max(std::abs(z0), std::abs(w0))) ? 0 : 1;
  out.cert.verdict = decide(out.cert.margin, out.cert.violations);
  return out;
}

IntersectionResult certify_intersection(const DeformationFamily& fam, double t, cplx z0, cplx w0,
                                        std::span<const double> t_steps) {
  check_t(t);
  if (t_steps.empty()) throw UsageError("t_steps is empty");
  IntersectionResult out;
  const auto [z, wt] = family_preimage(fam, t, z0, w0);
  out.z = z;
  out.w_limit = wt;
  double prev_tp = std::numeric_limits<double>::infinity();
  for (double tp : t_steps) {
    check_t(tp);
    if (!(tp > t) || !(tp < prev_tp)) throw UsageError("t_steps must decrease towards t from above");
    prev_tp = tp;
    const auto [zz, wp] = family_preimage(fam, tp, z0, w0);
    if (!fam.domain(tp).contains(zz, wp)) throw Error("target outside Omega_t' at t' = " + std::to_string(tp));
    out.gaps.push_back(std::abs(wp - wt));
  }
  long bad = 0;
  for (std::size_t i = 1; i < out.gaps.size(); ++i)
    if (out.gaps[i] > out.gaps[i - 1] + 1e-15) ++bad;
  const auto [x0, x1] = family_map(fam, t, z, wt);
  out.residual = max_abs_diff(x0, x1, z0, w0);
  if (out.residual > 1e-12 * std::max(1.0, std::max(std::abs(z0), std::abs(w0)))) ++bad;
  const Bidisc D = fam.domain(t);
  constexpr double kSlack = 1e-12;
  auto& c = out.cert;
  c.condition = "intersection";
  c.params = {{"t", t}, {"a", fam.a()}, {"r", fam.r()}, {"residual", out.residual}};
  c.margin = std::min(D.r1 + kSlack - std::abs(z), D.r2 + kSlack - std::abs(wt));
  c.samples = static_cast<long>(t_steps.size());
  c.violations = bad;
  c.verdict = decide(c.margin, bad);
  return out;
}

std::vector<int> choose_m(int d, std::span<const double> r_seq, double delta, bool strict, double L_prime) {
  if (d < 2) throw UsageError("degree must be at least 2");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("margin delta must lie in (0,1)");
  if (r_seq.size() < 3) throw UsageError("r_seq needs at least three entries");
  for (std::size_t i = 1; i < r_seq.size(); ++i)
    if (!(r_seq[i] > r_seq[i - 1])) throw UsageError("r_seq must be strictly increasing");
  std::vector<int> m;
  const int N = static_cast<int>(r_seq.size()) - 2;
  int prev = 0;
  for (int n = 1; n <= N; ++n) {
    const double gap = r_seq[static_cast<std::size_t>(n + 1)] - r_seq[static_cast<std::size_t>(n)];
    const double need = std::log(n / delta);
    int found = -1;
    for (int k = strict ? std::max(n, prev + 1) : n; k <= 1000; ++k) {
      const double lhs = gap * std::pow(static_cast<double>(d), k);
      if (lhs > need && (!strict || lhs >= L_prime)) {
        found = k;
        break;
      }
    }
    if (found < 0) throw NoAdmissibleError("no admissible m(n) for n = " + std::to_string(n));
    // r_{n+1} + ln n / d^m < r_{n+2} follows; assert it.
    if (!(r_seq[static_cast<std::size_t>(n)] + std::log(static_cast<double>(n)) / std::pow(d, found) <
          r_seq[static_cast<std::size_t>(n + 1)]))
      throw Error("log condition failed for n = " + std::to_string(n));
    m.push_back(found);
    prev = found;
  }
  return m;
}

PointK factor_apply(const SublevelDecomposition& dec, int j, const PointK& x) {
  const auto& inv = dec.inv_scales[static_cast<std::size_t>(j - 1)];
  const auto& s = dec.scales[static_cast<std::size_t>(j)];
  PointK y(x.dim());
  for (int i = 0; i < x.dim(); ++i) y[i] = x[i] * inv;
  y = apply(dec.henon, y);
  for (int i = 0; i < y.dim(); ++i) y[i] = y[i] * s;
  return y;
}

PointK Phi(const SublevelDecomposition& dec, int n, const PointK& x) {
  PointK y = x;
  for (int j = 0; j < dec.m(n); ++j) y = apply(dec.henon, y);
  const auto& s = dec.scales[static_cast<std::size_t>(dec.m(n))];
  for (int i = 0; i < y.dim(); ++i) y[i] = y[i] * s;
  return y;
}

namespace {

bool omega_test(const SublevelDecomposition& dec, int n, const PointK& hx) {
  const double bound = dec.r_at(n + 1) * std::pow(static_cast<double>(dec.henon.degree()), dec.m(n));
  return hx.norm1_ln().value() < bound;
}

}  // namespace

bool in_omega(const SublevelDecomposition& dec, int n, const PointK& x) {
  PointK y = x;
  try {
    for (int j = 0; j < dec.m(n); ++j) y = apply(dec.henon, y);
  } catch (const ExponentBudgetError&) {
    return false;
  }
  return omega_test(dec, n, y);
}

double factorization_error(const SublevelDecomposition& dec, int n, const PointK& x) {
  PointK y = x;
  for (int j = dec.m(n - 1) + 1; j <= dec.m(n); ++j) y = factor_apply(dec, j, y);
  PointK ref(x.dim());
  const auto& inv = dec.inv_scales[static_cast<std::size_t>(dec.m(n - 1))];
  for (int i = 0; i < x.dim(); ++i) ref[i] = x[i] * inv;
  for (int j = dec.m(n - 1); j < dec.m(n); ++j) ref = apply(dec.henon, ref);
  const auto& s = dec.scales[static_cast<std::size_t>(dec.m(n))];
  for (int i = 0; i < ref.dim(); ++i) ref[i] = ref[i] * s;
  const LogMag nref = ref.norm1_ln();
  double worst = 0.0;
  for (int i = 0; i < x.dim(); ++i) {
    const LogMag diff = ext_abs_log(y[i] - ref[i]);
    if (diff.is_neg_inf()) continue;
    const double rel = nref.is_neg_inf() ? std::exp(diff.value()) : std::exp(diff.value() - nref.value());
    worst = std::max(worst, rel);
  }
  return worst;
}

SublevelDecomposition build_decomposition(const MapSpec& henon, double r, int N, double delta, double c) {
  if (henon.kind != MapKind::henon) throw UsageError("decomposition needs a henon map");
  check_positive(r, "r");
  check_positive(c, "c");
  if (N < 2) throw UsageError("decomposition needs N >= 2");
  SublevelDecomposition dec;
  dec.henon = henon;
  dec.r = r;
  dec.delta = delta;
  dec.bidisc_c = c;
  const int d = henon.degree();
  for (int n = 1; n <= N + 2; ++n) dec.r_seq.push_back(r * (1.0 - 1.0 / (n + 1.0)));
  dec.L_prime = estimate_L_emp(MapSequence::constant(henon)) / (d - 1.0);
  dec.m_seq = choose_m(d, dec.r_seq, delta, true, dec.L_prime);

  const int mN = dec.m(N);
  dec.exponents.assign(static_cast<std::size_t>(mN + 1), 0.0);
  for (int n = 1; n <= N; ++n) {
    const int j0 = dec.m(n - 1), j1 = dec.m(n);
    const double e0 = dec.exponents[static_cast<std::size_t>(j0)], e1 = dec.r_at(n + 1);
    for (int j = j0 + 1; j <= j1; ++j)
      dec.exponents[static_cast<std::size_t>(j)] = e0 + (e1 - e0) * (j - j0) / static_cast<double>(j1 - j0);
  }
  for (int j = 0; j <= mN; ++j) {
    const double ln_s = -dec.exponents[static_cast<std::size_t>(j)] * std::pow(static_cast<double>(d), j);
    dec.scales.push_back(ExtComplex::from_ln(ln_s));
    dec.inv_scales.push_back(ext_div(ExtComplex::one(), dec.scales.back()));
  }

  SplitMix64 rng(0x5eed, 7);
  for (int n = 1; n <= N; ++n) {
    for (int i = 0; i < 100; ++i) {
      const PointK x = PointK::of(sample_disc(rng, 1.0), sample_disc(rng, 1.0));
      dec.factorization_max_rel = std::max(dec.factorization_max_rel, factorization_error(dec, n, x));
    }
  }
  if (!(dec.factorization_max_rel <= 1e-12)) throw Error("factorization verification failed");
  return dec;
}

NestingReport check_nesting(const SublevelDecomposition& dec, long samples, double box_radius, std::uint64_t seed,
                            int threads) {
  const int N = dec.N();
  std::vector<std::vector<char>> member(static_cast<std::size_t>(samples));
  parallel_for(static_cast<std::size_t>(samples), threads, [&](std::size_t i) {
    SplitMix64 rng(seed, i);
    const PointK x = PointK::of(sample_disc(rng, box_radius), sample_disc(rng, box_radius));
    auto& mem = member[i];
    mem.assign(static_cast<std::size_t>(N), 0);
    PointK y = x;
    int done = 0;
    try {
      for (int n = 1; n <= N; ++n) {
        for (; done < dec.m(n); ++done) y = apply(dec.henon, y);
        mem[static_cast<std::size_t>(n - 1)] = omega_test(dec, n, y) ? 1 : 0;
      }
    } catch (const ExponentBudgetError&) {
    }
  });
  NestingReport rep;
  rep.samples = samples;
  rep.members.assign(static_cast<std::size_t>(N), 0);
  for (const auto& mem : member) {
    for (int n = 1; n <= N; ++n) {
      if (mem[static_cast<std::size_t>(n - 1)]) ++rep.members[static_cast<std::size_t>(n - 1)];
      if (n < N && mem[static_cast<std::size_t>(n - 1)] && !mem[static_cast<std::size_t>(n)]) ++rep.violations;
    }
  }
  return rep;
}

ChainReport certify_chain(const MapSequence& seq, int n, std::span<const double> t_grid, double r, long samples,
                          std::uint64_t seed) {
  if (seq.dim() != 2 || seq.degree() != 2 || seq.kind() != MapKind::shiftlike)
    throw UsageError("chain certification needs a two-dimensional quadratic shift-like sequence");
  if (n < 1) throw UsageError("level n must be at least 1");
  const MapSpec Fn = seq.at(n);
  if (!Fn.poly.low_is_zero()) throw UsageError("chain certification needs q = 0");
  const auto coeff = Fn.coeff.to_complex();
  if (coeff.imag() != 0.0 || !(coeff.real() > 0.0)) throw UsageError("chain certification needs real a_n > 0");
  const double a = coeff.real();

  std::vector<double> grid(t_grid.begin(), t_grid.end());
  if (grid.empty())
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check_t(grid[i]);
    if (i > 0 && !(grid[i] > grid[i - 1])) throw UsageError("t_grid must be strictly increasing");
  }
  if (grid.front() != 0.0 || grid.back() != 1.0) throw UsageError("t_grid must run from 0 to 1");

  if (!(r > 0.0)) {
    const double attr = attraction_radius(seq.shifted(n - 1));
    r = attr > 0.0 ? attr : 0.1;
    if (a < 1.0 / 3.0) r = std::min(r, (1.0 / 3.0 - a) / 2.0);
  }
  const auto fam = DeformationFamily::quadratic(a, r);

  ChainReport out;
  out.a = a;
  out.r = r;
  out.t_grid = grid;

  // Stage 1: the family; stage 2: bidiscs from ((a+r)3r, 2ar) up to (r, r).
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < grid.size(); ++i) margin = std::min(margin, monotone_margin(fam, grid[i - 1], grid[i]));
  margin = std::min({margin, r - (a + r) * 3.0 * r, r - 2.0 * a * r});
  auto stage2 = [&](double t) {
    return Bidisc{t * r + (1.0 - t) * (a + r) * 3.0 * r, t * r + (1.0 - t) * a * 2.0 * r};
  };

  // Membership in image coordinates: x in F(n)^-1(S) iff F(n) x in S.
  const std::size_t G = grid.size();
  std::vector<long> bad(static_cast<std::size_t>(samples), 0), endpoint(static_cast<std::size_t>(samples), 0);
  parallel_for(static_cast<std::size_t>(samples), 1, [&](std::size_t i) {
    SplitMix64 rng(seed, i);
    cplx y0, y1;
    if (i % 2 == 0) {
      // A point of some stage-1 set.
      const double t = grid[static_cast<std::size_t>(rng.next() % G)];
      const Bidisc D = fam.domain(t);
      std::tie(y0, y1) = family_map(fam, t, sample_disc(rng, D.r1), sample_disc(rng, D.r2));
    } else {
      y0 = sample_disc(rng, r);
      y1 = sample_disc(rng, r);
    }
    std::vector<char> in;
    for (double t : grid) in.push_back(in_family_image(fam, t, y0, y1));
    for (double t : grid) in.push_back(stage2(t).contains(y0, y1));
    for (std::size_t k = 1; k < in.size(); ++k)
      if (in[k - 1] && !in[k]) ++bad[i];
    // t = 0 is F_n(D(r)); the last set is D(r).
    const PointK pre = apply_inverse(Fn, PointK::of(y0, y1));
    const bool direct0 = std::abs(pre[0].to_complex()) < r && std::abs(pre[1].to_complex()) < r;
    if (direct0 != static_cast<bool>(in.front())) ++endpoint[i];
    if (static_cast<bool>(in.back()) != (std::abs(y0) < r && std::abs(y1) < r)) ++endpoint[i];
  });
  long violations = 0;
  for (long v : bad) violations += v;
  for (long v : endpoint) out.endpoint_mismatches += v;

  auto& c = out.cert;
  c.condition = "chain";
  c.params = {{"n", static_cast<double>(n)}, {"a", a}, {"r", r}};
  c.margin = margin;
  c.samples = samples;
  c.violations = violations + out.endpoint_mismatches;
  c.verdict = decide(margin, c.violations);
  return out;
}

}  // namespace shortck
