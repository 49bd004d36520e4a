#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "shortck/error.hpp"
#include "shortck/rng.hpp"
#include "shortck/schedules.hpp"

using namespace shortck;

namespace {

// Independent FB recurrence in long double.
std::vector<long double> fb_eps_oracle(int N) {
  std::vector<long double> e(static_cast<std::size_t>(N + 1), 0.0L);
  e[1] = 1.0L;
  for (int n = 2; n <= N; ++n)
    e[n] = std::max(std::log2(n + 1.0L), e[n - 1] + std::pow(2.0L, -(n - 1) / 2.0L) / std::log(2.0L));
  return e;
}

}  // namespace

TEST_CASE("short schedule examples") {
  const auto s = gen_short_schedule(0.5, 0.5, 20);
  for (int n = 2; n <= 20; ++n) CHECK(s.log2_tpow(n) - s.log2_tpow(n - 1) == 1.0);
  for (int n = 1; n <= 20; ++n) CHECK(n * s.log2_t(n) == doctest::Approx(n - 0.5).epsilon(1e-15));
  const auto rep = validate_schedule(s);
  CHECK(rep.valid);
  CHECK(rep.tn_min_margin == 0.0);

  const std::vector<double> dec = {0.9, 0.8, 0.7, 0.6};
  const auto d = gen_short_schedule(0.5, dec);
  CHECK(d.log2_tpow(2) - d.log2_tpow(1) == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(validate_schedule(d).tn_min_margin == doctest::Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(gen_short_schedule(0.5, std::vector<double>{0.5, 0.6}), UsageError);
  CHECK_THROWS_AS(gen_short_schedule(0.5, 1.0, 5), UsageError);
  CHECK_THROWS_AS(gen_short_schedule(1.5, 0.5, 5), UsageError);
  CHECK(s.ln_a(3) == doctest::Approx(std::exp2(2.5) * std::log(0.5)).epsilon(1e-15));
  CHECK(s.log2_tpow(0) == 0.0);
}

TEST_CASE("random admissible short schedules validate") {
  SplitMix64 g(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> eps;
    double e = 0.01 + 0.98 * g.uniform();
    for (int n = 0; n < 60; ++n) {
      eps.push_back(e);
      e = std::max(1e-6, e - 0.05 * g.uniform());
    }
    const auto rep = validate_schedule(gen_short_schedule(0.05 + 0.9 * g.uniform(), eps));
    REQUIRE(rep.valid);
    REQUIRE(rep.tn_ok);
    REQUIRE(rep.tn_min_margin >= 0.0);
  }
}

TEST_CASE("fb schedule matches the recurrence oracle") {
  const auto s = gen_fb_schedule(0.5, 200);
  const auto o = fb_eps_oracle(200);
  CHECK(s.eps(1) == 1.0);
  CHECK(s.eps(2) == doctest::Approx(static_cast<double>(oracle::fb_eps2())).epsilon(1e-15));
  CHECK(s.eps(2) == doctest::Approx(2.0201394).epsilon(1e-7));
  for (int n = 1; n <= 200; ++n) REQUIRE(std::abs(s.eps(n) - static_cast<double>(o[n])) <= 1e-12 * o[n]);
  CHECK(s.eps(200) >= std::log2(201.0));

  // Oracle for the eps_n/n trend.
  int from = 200;
  while (from > 1 && o[from] / from < o[from - 1] / (from - 1)) --from;
  CHECK(from <= 8);

  const auto rep = validate_schedule(s);
  CHECK(rep.valid);
  CHECK(rep.fb3_ok);
  CHECK(rep.eps_monotone_ok);
  CHECK(rep.eps_floor_ok);
  CHECK(rep.eps_ratio_decreasing_from == from);
  CHECK(rep.fb3_min_margin >= 0.0);
  // t_1 = 1 and t_2 < 1 sit outside (1,2).
  CHECK(rep.t_range_violations == std::vector<int>{1, 2});

  // Window oracle: smallest k with eps_{n+k+1} >= n + 1.
  std::vector<std::pair<int, int>> want;
  for (int n = 1; n <= 200; ++n)
    for (int k = 1; n + k + 1 <= 200; ++k)
      if (o[n + k + 1] >= n + 1) {
        want.emplace_back(n, k);
        break;
      }
  REQUIRE(rep.fb2_windows.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(rep.fb2_windows[i].n == want[i].first);
    CHECK(rep.fb2_windows[i].k == want[i].second);
    CHECK(s.eps(want[i].first + want[i].second + 1) >= want[i].first + 1);
  }
  CHECK(rep.fb2_windows.at(2).n == 3);
}

TEST_CASE("geometric schedule") {
  const auto s = gen_geometric_schedule(0.5, 2.0, 30);
  const auto rep = validate_schedule(s);
  CHECK(rep.valid);
  CHECK(rep.tn_min_margin == 0.0);
  for (int n = 2; n <= 30; ++n) CHECK(s.log2_tpow(n) - s.log2_tpow(n - 1) == 1.0);
}

TEST_CASE("verify_claim_tl") {
  const auto a = verify_claim_tl(1.9, 3);
  CHECK(a.pass);
  CHECK(a.margins[2] == doctest::Approx(6.859 - 2.0).epsilon(1e-12));
  CHECK_FALSE(a.inductive_ok.has_value());
  const auto a2 = verify_claim_tl(1.95, 30);
  REQUIRE(a2.inductive_ok.has_value());
  CHECK(*a2.inductive_ok);

  const auto b = verify_claim_tl(1.01, 3);
  CHECK_FALSE(b.pass);
  CHECK(b.margins[2] == doctest::Approx(1.030301 - 2.0).epsilon(1e-12));
  CHECK(b.first_failure == 2);
  CHECK(b.failures == std::vector<int>{2, 3});
  CHECK_FALSE(b.inductive_ok.has_value());

  for (double t : {1.0001, 1.3, 1.7, 1.99}) CHECK(verify_claim_tl(t, 1).pass);
  CHECK_THROWS_AS(verify_claim_tl(2.0, 3), UsageError);

  // The claim holds for all l once t > 1.9.
  SplitMix64 g(2);
  for (int i = 0; i < 100; ++i) {
    const auto r = verify_claim_tl(1.9 + 0.0999 * g.uniform(), 200);
    REQUIRE(r.pass);
    REQUIRE(*r.inductive_ok);
  }
}

TEST_CASE("verify_inclusion_delta") {
  const auto s = gen_short_schedule(0.5, 0.5, 80);
  // Oracle: 2^(n+l-0.5) ln 0.5 <= ln(0.25 * 0.4^(l+1)) for all l <= 20.
  int want = 0;
  for (int n = 1; n <= 60 && !want; ++n) {
    bool ok = true;
    for (int l = 0; l <= 20; ++l)
      if (!(std::exp2(n + l - 0.5L) * std::log(0.5L) < std::log(0.25L) + (l + 1) * std::log(0.4L))) ok = false;
    if (ok) want = n;
  }
  CHECK(want == 3);
  const auto rep = verify_inclusion_delta(s, 0.5, 0.4, 1, 20, true);
  REQUIRE(rep.minimal_n.has_value());
  CHECK(*rep.minimal_n == want);
  CHECK(rep.cert.verdict == Verdict::certified);
  CHECK(rep.cert.violations == 0);
  CHECK(rep.cert.samples == 2000);
  CHECK(rep.margins.size() == 21);

  CHECK_THROWS_AS(verify_inclusion_delta(s, 0.4, 0.5, 3, 20), UsageError);

  // Analytic pass implies sampled pass.
  for (int n = 1; n <= 20; ++n)
    for (double rp : {0.1, 0.3, 0.45}) {
      const auto r = verify_inclusion_delta(s, 0.5, rp, n, 10, false, 64);
      if (r.cert.margin > 0.0) REQUIRE(r.cert.violations == 0);
    }
}

TEST_CASE("growth series") {
  const auto s = gen_fb_schedule(0.5, 200);
  const auto g = growth_series(s, 60);
  const auto o = fb_eps_oracle(200);
  for (int n = 1; n <= 60; ++n) {
    const long double want = 2 * std::exp2(n + 1 - o[n + 1]) - std::exp2(n + 2 - o[n + 2]) - 0.5L;
    REQUIRE(std::abs(g.G[n - 1] - static_cast<double>(want)) <= 1e-9 * (1 + std::abs(want)));
  }
  for (int n = 4; n <= 40; ++n) CHECK(g.G[n - 1] > 0.0);
  for (int n = 5; n <= 40; ++n) CHECK(g.G[n - 1] > g.G[n - 2]);
  REQUIRE(g.crossover.has_value());
  CHECK(*g.crossover < 60);
  CHECK(g.lower_bound[9] == doctest::Approx(std::exp2(9.0 - 5.5) - 0.5));
  CHECK_THROWS_AS(growth_series(gen_short_schedule(0.5, 0.5, 50), 10), UsageError);
  CHECK_THROWS_AS(growth_series(s, 199), UsageError);
}
