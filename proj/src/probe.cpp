#include "shortck/probe.hpp"

#include <algorithm>
#include <cmath>

#include "shortck/error.hpp"
#include "shortck/rng.hpp"

namespace shortck {

std::pair<double, double> wilson_interval(double p, long n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::clamp(centre - half, 0.0, std::min(p, 1.0)), std::clamp(centre + half, std::max(p, 0.0), 1.0)};
}

VolumeResult volume_probe(const MapSequence& seq, double r, const std::vector<double>& R_list, long samples,
                          std::uint64_t seed, const EstimatorConfig& cfg, int threads) {
  if (!(r > 0.0)) throw UsageError("volume probe needs r > 0");
  if (samples < 1000) throw UsageError("volume probe needs at least 1000 samples");
  if (seq.dim() != 2) throw UsageError("volume probe needs a two-dimensional sequence");
  VolumeResult out;
  out.r = r;
  out.R_list = R_list;
  out.samples = samples;
  out.seed = seed;
  std::vector<PointK> xs(static_cast<std::size_t>(samples));
  for (std::size_t ri = 0; ri < R_list.size(); ++ri) {
    const double R = R_list[ri];
    if (!(R > 0.0)) throw UsageError("volume probe radii must be positive");
    for (long i = 0; i < samples; ++i) {
      SplitMix64 g(seed, (static_cast<std::uint64_t>(ri) << 32) + static_cast<std::uint64_t>(i));
      const double u1 = g.uniform(), v1 = g.uniform(), u2 = g.uniform(), v2 = g.uniform();
      xs[static_cast<std::size_t>(i)] =
          PointK::of(std::polar(R * std::sqrt(u1), 2.0 * M_PI * v1), std::polar(R * std::sqrt(u2), 2.0 * M_PI * v2));
    }
    const auto res = sublevel_batch(seq, r, xs, cfg, threads);
    long hits = 0, und = 0;
    for (const auto& s : res) {
      if (s.verdict == Membership::member) ++hits;
      if (s.verdict == Membership::undecided) ++und;
    }
    const double n = static_cast<double>(samples);
    const double frac = (static_cast<double>(hits) + 0.5 * static_cast<double>(und)) / n;
    auto [lo, hi] = wilson_interval(frac, samples);
    const double widen = 0.5 * static_cast<double>(und) / n;
    lo = std::max(0.0, lo - widen);
    hi = std::min(1.0, hi + widen);
    const double vol = (M_PI * R * R) * (M_PI * R * R);
    out.counts.push_back(hits);
    out.undecided.push_back(und);
    out.estimates.push_back(frac * vol);
    out.ci_lo.push_back(lo * vol);
    out.ci_hi.push_back(hi * vol);
  }
  return out;
}

PointK pushforward(const MapSequence& seq, const PointK& p, const PointK& zeta, int n) {
  if (zeta.dim() != p.dim() || p.dim() != seq.dim()) throw UsageError("direction and point dimensions differ");
  PointK y = p, eta = zeta;
  for (int j = 1; j <= n; ++j) {
    const MapSpec f = seq.at(j);
    eta = jacobian(f, y).apply(eta);
    y = apply(f, y);
  }
  return eta;
}

KobayashiResult kobayashi_probe(const MapSequence& seq, const PointK& p, const PointK& zeta,
                                const std::vector<int>& n_list, const std::vector<double>& ball_ln_radii,
                                int samples_per_n, std::uint64_t seed, const EstimatorConfig& cfg) {
  if (zeta.dim() != p.dim() || p.dim() != seq.dim()) throw UsageError("direction and point dimensions differ");
  if (!ball_ln_radii.empty() && ball_ln_radii.size() != n_list.size())
    throw UsageError("ball_ln_radii must match n_list");
  if (n_list.empty()) throw UsageError("n_list is empty");
  for (std::size_t i = 0; i < n_list.size(); ++i)
    if (n_list[i] < 1 || (i > 0 && n_list[i] <= n_list[i - 1]))
      throw UsageError("n_list must be positive and strictly increasing");
  if (samples_per_n < 0) throw UsageError("samples_per_n must be nonnegative");
  if (std::abs(zeta.norm1_ln().value()) > 1e-12) throw UsageError("direction must have unit norm");
  if (classify(seq, p, cfg).status != PointStatus::converged) throw UsageError("point is not in the basin");

  KobayashiResult out;
  out.p = p;
  out.zeta = zeta;
  PointK y = p, eta = zeta;
  int at = 0;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const int n = n_list[i];
    for (; at < n; ++at) {
      const MapSpec f = seq.at(at + 1);
      eta = jacobian(f, y).apply(eta);
      y = apply(f, y);
    }
    KobayashiRecord rec;
    rec.n = n;
    rec.ln_eta = eta.norm1_ln().value();
    const MapSequence tail = seq.shifted(n);
    double ball_ln;
    if (ball_ln_radii.empty()) {
      rec.r_attr = attraction_radius(tail);
      const double room = rec.r_attr - std::exp(y.norm1_ln().value());
      if (!(room > 0.0)) throw Error("no admissible dilation at level " + std::to_string(n));
      ball_ln = std::log(room);
    } else {
      ball_ln = ball_ln_radii[i];
    }
    rec.ln_R = ball_ln - rec.ln_eta;
    rec.ln_bound = -rec.ln_R;

    // T_n(xi) = F(n)^-1(y_n + R eta_n xi) lies in the basin iff the tail orbit converges.
    const ExtComplex R = ExtComplex::from_ln(rec.ln_R);
    for (int s = 0; s < samples_per_n; ++s) {
      SplitMix64 g(seed, (static_cast<std::uint64_t>(n) << 32) + static_cast<std::uint64_t>(s));
      std::complex<double> xi = g.unit_disc();
      while (std::abs(xi) >= 1.0) xi = g.unit_disc();
      const ExtComplex xe = ExtComplex::from_complex(xi) * R;
      PointK q = y;
      for (int c = 0; c < q.dim(); ++c) q[c] = y[c] + eta[c] * xe;
      ++rec.t_samples;
      if (classify(tail, q, cfg).status != PointStatus::converged) ++rec.t_violations;
    }
    out.records.push_back(rec);
  }
  return out;
}

}  // namespace shortck
