#pragma once

// Green function G+ = lim d^-n ln+ ||F(n) x||_1 for single maps and map
// sequences, basin classification and sublevel membership.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "shortck/dynsys.hpp"

namespace shortck {

enum class GreenStatus { stabilized, zero, undecided };

const char* to_string(GreenStatus s);

struct GreenEstimate {
  LogMag value;
  int n_used = 0;
  double err_bound = 0.0;
  GreenStatus status = GreenStatus::undecided;
};

struct EstimatorConfig {
  int max_n = 200;
  double tol = 1e-9;
  double filtration_R_ln = std::log(1e3);
  double escape_ln = std::log(1e6);
  double converge_ln = std::log(1e-8);
  // One-step growth constant: ln+ ||F(x)|| <= d ln+ ||x|| + L_emp.
  double L_emp = 1.0;

  // Validates the parameters, checks that |z| >= R forces |p(z)| >= |z|^d / 2
  // for every map of seq and computes L_emp.
  static EstimatorConfig make(const MapSequence& seq, int max_n = 200, double tol = 1e-9,
                              double filtration_R_ln = std::log(1e3));
};

// max(1, coarse grid estimate, analytic coefficient bound).
double estimate_L_emp(const MapSequence& seq);

GreenEstimate green_estimate(const MapSequence& seq, const PointK& x, const EstimatorConfig& cfg);
GreenEstimate green_estimate(const MapSpec& map, const PointK& x, const EstimatorConfig& cfg);
// Resumes the estimator at x = F(n0)(x_0).
GreenEstimate green_estimate_from(const MapSequence& seq, const PointK& x, int n0,
                                  const EstimatorConfig& cfg);

enum class PointStatus { converged, escaped, undecided };

const char* to_string(PointStatus s);

struct ClassifiedPoint {
  PointStatus status = PointStatus::undecided;
  int steps = 0;
  std::optional<GreenEstimate> green;
};

// budget <= 0 means cfg.max_n.
ClassifiedPoint classify(const MapSequence& seq, const PointK& x, const EstimatorConfig& cfg,
                         int budget = 0);

enum class Membership { member, nonmember, undecided };

const char* to_string(Membership m);

struct SublevelResult {
  Membership verdict = Membership::undecided;
  // |G - r|
  double margin = 0.0;
  GreenEstimate green;
};

SublevelResult sublevel_from_green(const GreenEstimate& g, double r);
SublevelResult sublevel_member(const MapSpec& map, double r, const PointK& x, const EstimatorConfig& cfg);

// Batch estimation for k = 2 sequences: a binary64 SIMD prefix runs while
// magnitudes are moderate, then the extended-exponent estimator finishes.
// Output order follows the input regardless of the thread count.
std::vector<GreenEstimate> green_batch(const MapSequence& seq, std::span<const PointK> xs,
                                       const EstimatorConfig& cfg, int threads);
std::vector<SublevelResult> sublevel_batch(const MapSequence& seq, double r, std::span<const PointK> xs,
                                           const EstimatorConfig& cfg, int threads);

}  // namespace shortck
