#include "shortck/green.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "shortck/error.hpp"
#include "shortck/kernels.hpp"
#include "shortck/parallel.hpp"

namespace shortck {

const char* to_string(GreenStatus s) {
  switch (s) {
    case GreenStatus::stabilized: return "stabilized";
    case GreenStatus::zero: return "zero";
    case GreenStatus::undecided: return "undecided";
  }
  return "undecided";
}

const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::converged: return "converged";
    case PointStatus::escaped: return "escaped";
    case PointStatus::undecided: return "undecided";
  }
  return "undecided";
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::member: return "member";
    case Membership::nonmember: return "nonmember";
    case Membership::undecided: return "undecided";
  }
  return "undecided";
}

namespace {

std::int64_t usable_steps(const MapSequence& seq, std::int64_t want) {
  if (auto last = seq.last_index()) return std::min(want, *last);
  return want;
}

}  // namespace

double estimate_L_emp(const MapSequence& seq) {
  const int d = seq.degree();
  const auto b = seq.bounds();
  double L = std::max(1.0, std::log(std::max(1.0 + b.q_sum + b.alpha, b.beta)));

  static constexpr std::array<double, 7> kRadii{0.25, 1.0, 4.0, 16.0, 64.0, 256.0, 1024.0};
  const auto maps = usable_steps(seq, 3);
  for (std::int64_t n = 1; n <= maps; ++n) {
    MapSpec f;
    try {
      f = seq.at(n);
    } catch (const ExponentBudgetError&) {
      break;
    }
    for (double rz : kRadii)
      for (int pz = 0; pz < 4; ++pz)
        for (double rw : kRadii)
          for (int pw = 0; pw < 4; ++pw) {
            PointK x(f.k);
            x[0] = ExtComplex::from_complex(std::polar(rz, pz * M_PI / 2 + 0.3));
            for (int i = 1; i < f.k; ++i) x[i] = ExtComplex::from_complex(std::polar(rw, pw * M_PI / 2 + 0.7 * i));
            const double g = apply(f, x).norm1_ln().plus() - d * x.norm1_ln().plus();
            L = std::max(L, g);
          }
  }
  return L;
}

EstimatorConfig EstimatorConfig::make(const MapSequence& seq, int max_n, double tol, double filtration_R_ln) {
  if (max_n < 1) throw UsageError("max_n must be at least 1");
  if (!(tol > 0.0)) throw UsageError("tol must be positive");
  if (!(filtration_R_ln > 0.0)) throw UsageError("filtration radius must exceed 1");
  if (max_n * std::log2(static_cast<double>(seq.degree())) > 1000.0)
    throw UsageError("max_n too large for the degree");
  const double R = std::exp(filtration_R_ln);
  // sum |c_j| R^(j-d) <= q_sum / R for R >= 1
  if (seq.bounds().q_sum / R > 0.5) throw UsageError("filtration radius too small for the coefficients");
  EstimatorConfig cfg;
  cfg.max_n = max_n;
  cfg.tol = tol;
  cfg.filtration_R_ln = filtration_R_ln;
  cfg.L_emp = estimate_L_emp(seq);
  return cfg;
}

namespace {

bool in_filtration(const PointK& x, double R_ln) {
  const double lz = ext_abs_log(x[0]).value();
  if (lz < R_ln) return false;
  for (int i = 1; i < x.dim(); ++i)
    if (ext_abs_log(x[i]).value() > lz) return false;
  return true;
}

}  // namespace

GreenEstimate green_estimate_from(const MapSequence& seq, const PointK& x0, int n0, const EstimatorConfig& cfg) {
  const double d = seq.degree();
  const double thr = cfg.tol * (d - 1.0) / d;
  const double tail = cfg.L_emp / (d - 1.0);
  const std::int64_t last = usable_steps(seq, cfg.max_n);
  PointK x = x0;
  double prev = 0.0, inc_prev = std::numeric_limits<double>::infinity();
  bool have_prev = false;
  for (int n = n0;; ++n) {
    const double lp = x.norm1_ln().plus();
    const double dn = std::pow(d, n);
    const double G = lp / dn;
    const double zero_bound = (lp + tail) / dn;
    if (zero_bound <= cfg.tol) return {LogMag(0.0), n, zero_bound, GreenStatus::zero};
    const double inc = have_prev ? std::abs(G - prev) : std::numeric_limits<double>::infinity();
    const double err = have_prev ? inc * d / (d - 1.0) : zero_bound;
    if (have_prev && inc <= thr && inc_prev <= thr && in_filtration(x, cfg.filtration_R_ln))
      return {LogMag(G), n, err, GreenStatus::stabilized};
    if (n >= last) return {LogMag(G), n, err, GreenStatus::undecided};
    try {
      x = apply(seq.at(n + 1), x);
    } catch (const ExponentBudgetError&) {
      return {LogMag(G), n, err, GreenStatus::undecided};
    }
    prev = G;
    inc_prev = inc;
    have_prev = true;
  }
}

GreenEstimate green_estimate(const MapSequence& seq, const PointK& x, const EstimatorConfig& cfg) {
  return green_estimate_from(seq, x, 0, cfg);
}

GreenEstimate green_estimate(const MapSpec& map, const PointK& x, const EstimatorConfig& cfg) {
  return green_estimate(MapSequence::constant(map), x, cfg);
}

ClassifiedPoint classify(const MapSequence& seq, const PointK& x, const EstimatorConfig& cfg, int budget) {
  const int want = budget > 0 ? budget : cfg.max_n;
  const int b = static_cast<int>(std::max<std::int64_t>(1, usable_steps(seq, want)));
  const OrbitRecord rec = orbit(seq, x, b, LogMag(cfg.escape_ln), LogMag(cfg.converge_ln));
  ClassifiedPoint out;
  out.steps = rec.step;
  switch (rec.terminated) {
    case Termination::converged: out.status = PointStatus::converged; break;
    case Termination::escaped:
      out.status = PointStatus::escaped;
      out.green = green_estimate(seq, x, cfg);
      break;
    case Termination::budget: out.status = PointStatus::undecided; break;
  }
  return out;
}

SublevelResult sublevel_from_green(const GreenEstimate& g, double r) {
  SublevelResult out;
  out.green = g;
  out.margin = std::abs(g.value.value() - r);
  if (g.status == GreenStatus::undecided || out.margin <= g.err_bound)
    out.verdict = Membership::undecided;
  else
    out.verdict = g.value.value() < r ? Membership::member : Membership::nonmember;
  return out;
}

SublevelResult sublevel_member(const MapSpec& map, double r, const PointK& x, const EstimatorConfig& cfg) {
  if (!(r > 0.0)) throw UsageError("sublevel r must be positive");
  return sublevel_from_green(green_estimate(map, x, cfg), r);
}

namespace {

constexpr double kTiny = 1e-100;
constexpr double kHuge = 1e100;

bool kernel_coeff(const ExtComplex& c, double& re, double& im, double& bound) {
  if (c.is_zero()) {
    re = im = 0.0;
    return true;
  }
  const double a = c.abs();
  if (!(a >= kTiny && a <= kHuge)) return false;
  const auto v = c.to_complex();
  re = v.real();
  im = v.imag();
  bound = std::max(bound, a);
  return true;
}

struct Prefix {
  std::vector<kernels::StepCoeffs> steps;
  double bail_ln = 0.0;
};

// Binary64 step table for as long as every coefficient is representable.
Prefix build_prefix(const MapSequence& seq, const EstimatorConfig& cfg) {
  Prefix pre;
  const int d = seq.degree();
  if (seq.dim() != 2 || d > kernels::kMaxKernelDegree) return pre;
  const auto last = usable_steps(seq, cfg.max_n);
  double B = 0.0;
  for (std::int64_t n = 1; n <= last; ++n) {
    MapSpec f;
    try {
      f = seq.at(n);
    } catch (const ExponentBudgetError&) {
      break;
    }
    kernels::StepCoeffs s;
    s.d = d;
    bool ok = true;
    for (int j = 0; j < d && ok; ++j)
      ok = kernel_coeff(f.poly.low()[static_cast<std::size_t>(j)], s.c_re[static_cast<std::size_t>(j)],
                        s.c_im[static_cast<std::size_t>(j)], B);
    ok = ok && kernel_coeff(f.coeff, s.a_re, s.a_im, B);
    if (f.kind == MapKind::henon) {
      s.b_re = 1.0;
      s.b_im = 0.0;
      B = std::max(B, 1.0);
    } else {
      ok = ok && kernel_coeff(f.coeff, s.b_re, s.b_im, B);
    }
    if (!ok) break;
    pre.steps.push_back(s);
  }
  pre.bail_ln = (690.0 - std::log(1.0 + d * B + B)) / d;
  // Lanes still below the bail radius after n steps have G <= tol already.
  const double tail = cfg.L_emp / (d - 1.0);
  std::size_t n_zero = 0;
  while (n_zero < pre.steps.size() && (pre.bail_ln + tail) / std::pow(d, static_cast<double>(n_zero)) > cfg.tol)
    ++n_zero;
  pre.steps.resize(std::min(pre.steps.size(), n_zero));
  return pre;
}

}  // namespace

std::vector<GreenEstimate> green_batch(const MapSequence& seq, std::span<const PointK> xs,
                                       const EstimatorConfig& cfg, int threads) {
  std::vector<GreenEstimate> out(xs.size());
  const Prefix pre = build_prefix(seq, cfg);
  if (pre.steps.empty()) {
    parallel_for(xs.size(), threads, [&](std::size_t i) { out[i] = green_estimate(seq, xs[i], cfg); });
    return out;
  }
  const double bail2 = std::exp(2.0 * pre.bail_ln);
  const double lo_ln = std::log(kTiny), hi_ln = pre.bail_ln;
  constexpr std::size_t kBlock = 64;
  parallel_chunks(xs.size(), threads, [&](std::size_t b, std::size_t e) {
    std::array<double, kBlock> zr, zi, wr, wi;
    std::array<std::int32_t, kBlock> steps;
    std::array<std::uint8_t, kBlock> status;
    for (std::size_t s = b; s < e; s += kBlock) {
      const std::size_t n = std::min(kBlock, e - s);
      for (std::size_t l = 0; l < n; ++l) {
        const PointK& x = xs[s + l];
        steps[l] = 0;
        status[l] = kernels::kActive;
        for (int c = 0; c < x.dim(); ++c) {
          const double m = ext_abs_log(x[c]).value();
          if (!x[c].is_zero() && (m < lo_ln || m >= hi_ln)) status[l] = kernels::kHigh;
        }
        if (x.dim() != 2) status[l] = kernels::kHigh;
        const auto z = status[l] == kernels::kActive ? x[0].to_complex() : std::complex<double>();
        const auto w = status[l] == kernels::kActive ? x[1].to_complex() : std::complex<double>();
        zr[l] = z.real();
        zi[l] = z.imag();
        wr[l] = w.real();
        wi[l] = w.imag();
      }
      kernels::iterate(pre.steps, bail2, kTiny * kTiny,
                       {zr.data(), zi.data(), wr.data(), wi.data(), steps.data(), status.data(), n});
      for (std::size_t l = 0; l < n; ++l) {
        if (steps[l] == 0) {
          out[s + l] = green_estimate(seq, xs[s + l], cfg);
        } else {
          const PointK y = PointK::of({zr[l], zi[l]}, {wr[l], wi[l]});
          out[s + l] = green_estimate_from(seq, y, steps[l], cfg);
        }
      }
    }
  });
  return out;
}

std::vector<SublevelResult> sublevel_batch(const MapSequence& seq, double r, std::span<const PointK> xs,
                                           const EstimatorConfig& cfg, int threads) {
  if (!(r > 0.0)) throw UsageError("sublevel r must be positive");
  const auto g = green_batch(seq, xs, cfg, threads);
  std::vector<SublevelResult> out;
  out.reserve(g.size());
  for (const auto& v : g) out.push_back(sublevel_from_green(v, r));
  return out;
}

}  // namespace shortck
