// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "shortck/cli.hpp"
#include "shortck/error.hpp"
#include "shortck/green.hpp"
#include "shortck/loewner.hpp"
#include "shortck/probe.hpp"
#include "shortck/rng.hpp"
#include "shortck/schedules.hpp"
#include "shortck/shortfb.hpp"

using namespace shortck;
using cplx = std::complex<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

MapSequence henon_seq() {
  return MapSequence::constant(MapSpec::henon(PolyOneVar::monomial(2), ExtComplex::from_double(0.5)));
}

MapSequence short_seq(int N = 60) { return MapSequence::scheduled(gen_short_schedule(0.5, 0.5, N), SequenceTemplate{}); }

const DeformationFamily kQuad = DeformationFamily::quadratic(0.01, 0.1);

Outcome c1_functoriality() {
  const auto seq = henon_seq();
  const MapSpec h = seq.at(1);
  const auto cfg = EstimatorConfig::make(seq);
  SplitMix64 g(101);
  int n = 0, bad = 0;
  double worst = 0.0;
  while (n < 100) {
    const PointK x = PointK::of(3.0 * g.unit_disc(), 3.0 * g.unit_disc());
    const auto a = green_estimate(seq, x, cfg);
    if (a.status != GreenStatus::stabilized) continue;
    ++n;
    const double G = a.value.value(), GH = green_estimate(seq, apply(h, x), cfg).value.value();
    const double rel = std::abs(GH - 2 * G) / (1 + G);
    worst = std::max(worst, rel);
    if (rel > 1e-9) ++bad;
  }
  return {bad == 0, fmt("points=%d violations=%d worst=%.3g", n, bad, worst)};
}

Outcome c2_asymptotic() {
  const auto seq = henon_seq();
  const auto g = green_estimate(seq, PointK::of(1e8, 0), EstimatorConfig::make(seq));
  const double v = g.value.value();
  return {std::abs(v - 18.420681) <= 1e-6, fmt("G(1e8,0)=%.9f", v)};
}

Outcome c3_monotone() {
  int certified = 0, positive = 0;
  long samples = 0, violations = 0;
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const double t = i / 50.0, s = t + (1.0 - t) * (j + 1) / 50.0;
      const auto rep = certify_monotone(kQuad, t, s, 20, static_cast<std::uint64_t>(i * 50 + j));
      if (rep.verdict == Verdict::certified) ++certified;
      if (rep.margin > 0.0) ++positive;
      violations += sample_image_inclusion(kQuad, t, s, 40, static_cast<std::uint64_t>(10000 + i * 50 + j));
      samples += 40;
    }
  return {certified == 2500 && positive == 2500 && violations == 0 && samples == 100000,
          fmt("certified=%d/2500 positive=%d inclusion_samples=%ld violations=%ld", certified, positive, samples,
              violations)};
}

Outcome c4_union_intersection() {
  SplitMix64 g(404);
  int union_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    const double t = 0.05 + 0.95 * g.uniform();
    const cplx z = 0.95 * (1 + t) * 0.1 * g.unit_disc(), w = 0.95 * (1 + 2 * t) * 0.1 * g.unit_disc();
    const auto [tz, tw] = family_map(kQuad, t, z, w);
    try {
      const auto u = certify_union(kQuad, t, tz, tw);
      const auto [bz, bw] = family_map(kQuad, u.t_prime, u.z, u.w_prime);
      if (u.cert.verdict != Verdict::certified || !(u.t_prime < t) || std::abs(bz - tz) > 1e-12 ||
          std::abs(bw - tw) > 1e-12)
        ++union_fail;
    } catch (const Error&) {
      ++union_fail;
    }
  }
  int inter_fail = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 0.6 * g.uniform();
    const cplx z = 0.9 * (1 + t) * 0.1 * g.unit_disc();
    const double wmax = (1 + 2 * t) * 0.1;
    const auto [tz, tw] = family_map(kQuad, t, z, std::polar(wmax, 2 * M_PI * g.uniform()));
    std::vector<double> steps;
    for (int j = 2; j <= 40; ++j) steps.push_back(t + std::ldexp(1.0, -j));
    try {
      const auto c = certify_intersection(kQuad, t, tz, tw, steps);
      const double dev = std::abs(std::abs(c.w_limit) - wmax);
      worst = std::max(worst, dev);
      if (dev > 1e-9) ++inter_fail;
    } catch (const Error&) {
      ++inter_fail;
    }
  }
  return {union_fail == 0 && inter_fail == 0,
          fmt("union failures=%d/1000 intersection failures=%d/100 worst |w|-(1+2t)r=%.3g", union_fail, inter_fail,
              worst)};
}

Outcome c5_decomposition() {
  std::vector<double> r;
  for (int n = 1; n <= 7; ++n) r.push_back(1.0 - 1.0 / (n + 1.0));
  const auto m = choose_m(2, r, 0.9);
  const MapSpec h = MapSpec::henon(PolyOneVar::monomial(2), ExtComplex::from_double(0.5));
  const auto dec = build_decomposition(h, 1.0, 4, 0.9, 0.5);
  const auto nest = check_nesting(dec, 10000, 2.0, 505, 1);
  const bool ok = m[0] == 1 && m[4] == 7 && dec.factorization_max_rel <= 1e-12 && nest.violations == 0;
  return {ok, fmt("m(1)=%d m(5)=%d factorization_rel=%.3g nesting_samples=10000 violations=%ld", m[0], m[4],
                  dec.factorization_max_rel, nest.violations)};
}

Outcome c6_schedules() {
  const auto sr = validate_schedule(gen_short_schedule(0.5, 0.5, 200));
  const auto fr = validate_schedule(gen_fb_schedule(0.5, 200));
  const auto a = verify_claim_tl(1.9, 50);
  const auto b = verify_claim_tl(1.01, 50);
  const bool fails_at_3 = std::find(b.failures.begin(), b.failures.end(), 3) != b.failures.end();
  const bool ok = sr.tn_ok && sr.tn_min_margin >= 0.0 && fr.fb3_ok && fr.eps_floor_ok && a.pass && !b.pass && fails_at_3;
  return {ok, fmt("short Tn margin=%g fb3=%d floor=%d claim(1.9)=%s claim(1.01) fails at l=3: %s first_failure=%d",
                  sr.tn_min_margin, fr.fb3_ok, fr.eps_floor_ok, a.pass ? "pass" : "fail", fails_at_3 ? "yes" : "no",
                  b.first_failure)};
}

Outcome c7_fb1() {
  const auto rep = verify_fb1(0.5, 1.5, 0.5, 1, 20, 20, 0.05);
  const int n = rep.minimal_n.value_or(-1);
  return {n == 3 && rep.direct_violations == 0 && rep.direct_checks == 21,
          fmt("minimal_n=%d direct_checks=%ld violations=%ld", n, rep.direct_checks, rep.direct_violations)};
}

Outcome c8_envelope() {
  const auto seq = short_seq();
  SplitMix64 g(808);
  long mono_bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const PointK x = PointK::of(1.5 * g.unit_disc(), 1.5 * g.unit_disc());
    const auto phi = phi_series(seq, x, 20);
    double prev = 0.0;
    for (int n = 1; n <= 20; ++n) {
      const double u = std::ldexp(phi[static_cast<std::size_t>(n - 1)].value() + std::log(2.0), -n);
      if (n > 1 && u > prev + 1e-12) ++mono_bad;
      prev = u;
    }
  }
  const double u0 = phi_u(seq, PointK::of(0, 0), 40).u_n;
  const bool origin_ok = std::abs(u0 - (-0.245066)) <= 1e-6;
  const auto cfg = EstimatorConfig::make(seq);
  int decided = 0, inconsistent = 0;
  while (decided < 1000) {
    const PointK x = PointK::of(1.5 * g.unit_disc(), 1.5 * g.unit_disc());
    const auto m = envelope_membership(seq, x, cfg);
    if (m.sign == EnvelopeSign::undecided || m.classify_status == PointStatus::undecided) continue;
    ++decided;
    if (!m.consistent) ++inconsistent;
  }
  return {mono_bad == 0 && origin_ok && inconsistent == 0,
          fmt("monotone violations=%ld u_40(0,0)=%.9f (target -0.245066 +- 1e-6: %s) sign disagreements=%d/1000",
              mono_bad, u0, origin_ok ? "ok" : "off", inconsistent)};
}

Outcome c9_growth() {
  const auto gs = growth_series(gen_fb_schedule(0.5, 200), 40);
  bool pos = true, inc = true;
  for (int n = 4; n <= 40; ++n) {
    if (!(gs.G[static_cast<std::size_t>(n - 1)] > 0.0)) pos = false;
    if (n > 4 && !(gs.G[static_cast<std::size_t>(n - 1)] > gs.G[static_cast<std::size_t>(n - 2)])) inc = false;
  }
  std::string below;
  for (int n = 10; n <= 40; ++n)
    if (gs.G[static_cast<std::size_t>(n - 1)] < gs.lower_bound[static_cast<std::size_t>(n - 1)])
      below += (below.empty() ? "" : ",") + std::to_string(n);
  return {pos && inc && below.empty(),
          fmt("positive=%d increasing=%d lower bound violated at n={%s} (G_10=%.3f bound_10=%.3f)", pos, inc,
              below.c_str(), gs.G[9], gs.lower_bound[9])};
}

Outcome c10_volume() {
  const auto seq = henon_seq();
  const auto v = volume_probe(seq, 1.0, {4.0, 8.0}, 100000, 1010, EstimatorConfig::make(seq), 1);
  const bool ok = v.estimates[1] > v.estimates[0] && v.ci_lo[1] > v.ci_hi[0];
  return {ok, fmt("vol(4)=%.4g [%.4g,%.4g] vol(8)=%.4g [%.4g,%.4g]", v.estimates[0], v.ci_lo[0], v.ci_hi[0],
                  v.estimates[1], v.ci_lo[1], v.ci_hi[1])};
}

Outcome c11_kobayashi() {
  const auto seq = short_seq();
  std::vector<int> ns;
  for (int n = 1; n <= 20; ++n) ns.push_back(n);
  const auto res = kobayashi_probe(seq, PointK::of(0, 0), PointK::of(1, 0), ns, {}, 50, 1111, EstimatorConfig::make(seq));
  bool mono = true;
  long viol = 0;
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    if (i > 0 && !(res.records[i].ln_bound < res.records[i - 1].ln_bound)) mono = false;
    viol += res.records[i].t_violations;
  }
  const double last = res.records.back().ln_bound;
  return {mono && last <= std::log(1e-6) && viol == 0,
          fmt("levels=1..20 monotone=%d final ln bound=%.6g violations=%ld", mono, last, viol)};
}

std::string run_cli(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  return out.str();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome c12_reproducibility() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "shortck_acceptance";
  fs::create_directories(dir);
  const std::string gdir = SHORTCK_TEST_DIR "/golden/";
  const std::string golden = slurp(gdir + "render_default.pgm");
  int code = 0;
  bool ok = !golden.empty();
  for (const char* th : {"1", "8", "1"}) {
    const std::string pgm = (dir / "render.pgm").string();
    run_cli({"render", "--config", gdir + "render_default.json", "--out", pgm, "--threads", th}, code);
    if (code != 0 || slurp(pgm) != golden) ok = false;
  }
  const std::string seq =
      R"("sequence":{"type":"scheduled","schedule":{"regime":"short","c":0.5,"N":60,"eps_const":0.5}})";
  const std::string map = R"("map":{"kind":"henon","d":2,"delta":0.5})";
  const std::vector<std::pair<std::string, std::string>> seeded = {
      {"loewner-certify monotone", R"({"family":{"variant":"quadratic","a":0.01,"r":0.1},"t":0.3,"s":0.6,"seed":1})"},
      {"loewner-certify chain", "{" + seq + R"(,"n":3,"t_grid":[0,0.5,1],"samples":200,"seed":2})"},
      {"decompose", "{" + map + R"(,"r":1,"N":3,"delta":0.9,"c":0.5,"nesting":{"samples":1000},"seed":3})"},
      {"volume-probe", "{" + map + R"(,"r":1,"R_list":[2,4],"samples":5000,"seed":4})"},
      {"kobayashi", "{" + seq + R"(,"point":[0,0],"direction":[1,0],"n_list":[1,2,3,4],"samples_per_n":20,"seed":5})"},
  };
  int reports = 0, mismatches = 0;
  for (const auto& [cmd, cfg] : seeded) {
    const std::string path = (dir / "cfg.json").string();
    std::ofstream(path) << cfg;
    std::vector<std::string> args;
    std::istringstream words(cmd);
    for (std::string w; words >> w;) args.push_back(w);
    args.insert(args.end(), {"--config", path, "--threads"});
    std::vector<std::string> outs;
    for (const char* th : {"1", "1", "8"}) {
      auto a = args;
      a.push_back(th);
      outs.push_back(run_cli(a, code));
      if (code != 0) ok = false;
    }
    ++reports;
    if (outs[0] != outs[1] || outs[0] != outs[2]) ++mismatches;
  }
  fs::remove_all(dir);
  return {ok && mismatches == 0,
          fmt("golden pgm %s; seeded reports=%d mismatches=%d", ok ? "identical" : "differs", reports, mismatches)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
    double budget_s;
  };
  const std::vector<Criterion> all = {
      {"green functoriality", c1_functoriality, 5},
      {"green asymptotic", c2_asymptotic, 0},
      {"loewner monotonicity", c3_monotone, 30},
      {"union/intersection witnesses", c4_union_intersection, 0},
      {"sublevel decomposition", c5_decomposition, 60},
      {"schedules", c6_schedules, 0},
      {"lemma FB1", c7_fb1, 0},
      {"psh envelope", c8_envelope, 0},
      {"growth series", c9_growth, 0},
      {"volume probe", c10_volume, 60},
      {"kobayashi probe", c11_kobayashi, 0},
      {"reproducibility", c12_reproducibility, 0},
  };
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[i].fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (all[i].budget_s > 0 && secs > all[i].budget_s) {
      o.pass = false;
      o.detail += fmt(" (over %.0f s budget)", all[i].budget_s);
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, all[i].name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed;
}
