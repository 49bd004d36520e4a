#pragma once

// Plurisubharmonic envelope of the short regime and the orbit-supremum
// lemmas of the Fatou-Bieberbach regime.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shortck/dynsys.hpp"
#include "shortck/green.hpp"
#include "shortck/schedules.hpp"

namespace shortck {

struct EnvelopeSample {
  PointK point;
  int n = 0;
  // ln phi_n, phi_n = max(|F(n)_1|, |F(n)_2|, c^(t_{n-1}^{n-1}))
  LogMag phi_n_ln;
  double u_n = 0.0;
  double limit_est = 0.0;
  double tail = 0.0;
  std::optional<double> u_prev;
};

// ln phi_1 .. ln phi_n_max along one orbit; seq must be schedule driven.
std::vector<LogMag> phi_series(const MapSequence& seq, const PointK& x, int n_max);
EnvelopeSample phi_u(const MapSequence& seq, const PointK& x, int n);

enum class EnvelopeSign { negative, positive, undecided };

const char* to_string(EnvelopeSign s);

struct EnvelopeMembership {
  EnvelopeSign sign = EnvelopeSign::undecided;
  PointStatus classify_status = PointStatus::undecided;
  bool consistent = true;
  EnvelopeSample sample;
};

EnvelopeSign envelope_sign(const EnvelopeSample& s, double slack);
EnvelopeMembership envelope_membership(const MapSequence& seq, const PointK& x, const EstimatorConfig& cfg,
                                       int n = 20, double slack = 1e-9);

// ln delta_n for n = 0..n_max over a grid x grid sampling of the torus
// |z| = |w| = rho; index 0 holds ln rho.
std::vector<double> orbit_sup(const MapSequence& seq, double rho, int n_max, int grid, int threads = 1);

struct FBReport {
  std::string lemma;
  std::vector<std::pair<std::string, double>> params;
  std::optional<int> minimal_n;
  // Margins for k = 0..k_max at minimal_n (or at the last level tried).
  std::vector<double> per_k_margins;
  std::vector<double> orbit_sup_ln;
  bool seed_ok = false;
  long direct_checks = 0;
  long direct_violations = 0;
  long chain_checks = 0;
  long chain_counterexamples = 0;
};

// Lemma FB1 on F_n = (z^2 + a_n w, a_n z), a_n = c^(t^n).
FBReport verify_fb1(double c, double t, double b, int n_lo, int n_hi, int k_max, double K_radius, int grid = 32,
                    int threads = 1);
// Lemma FB3 on an fb schedule; throws NoAdmissibleError when no n qualifies.
FBReport verify_fb3(const Schedule& s, double b, int n_lo, int n_hi, int k_max, double K_radius, int grid = 32,
                    int threads = 1);

}  // namespace shortck
