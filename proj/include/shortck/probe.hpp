#pragma once

// Monte-Carlo volume growth of sublevel sets and explicit disc families
// bounding the Kobayashi length from above. Both are demonstrations.

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "shortck/dynsys.hpp"
#include "shortck/green.hpp"

namespace shortck {

struct VolumeResult {
  double r = 0.0;
  std::vector<double> R_list;
  long samples = 0;
  std::uint64_t seed = 0;
  std::vector<long> counts;
  std::vector<long> undecided;
  std::vector<double> estimates;
  std::vector<double> ci_lo;
  std::vector<double> ci_hi;
};

inline constexpr double kWilsonZ95 = 1.959964;

// Wilson score interval for a proportion p over n trials.
std::pair<double, double> wilson_interval(double p, long n, double z = kWilsonZ95);

VolumeResult volume_probe(const MapSequence& seq, double r, const std::vector<double>& R_list, long samples,
                          std::uint64_t seed, const EstimatorConfig& cfg, int threads);

struct KobayashiRecord {
  int n = 0;
  double ln_eta = 0.0;
  double ln_R = 0.0;
  double ln_bound = 0.0;
  double r_attr = 0.0;
  long t_samples = 0;
  long t_violations = 0;
};

struct KobayashiResult {
  PointK p;
  PointK zeta;
  std::vector<KobayashiRecord> records;
};

// eta_n = D(F(n))(p) zeta by chained Jacobians.
PointK pushforward(const MapSequence& seq, const PointK& p, const PointK& zeta, int n);

// Empty ball_ln_radii uses the attraction radius of each tail sequence.
KobayashiResult kobayashi_probe(const MapSequence& seq, const PointK& p, const PointK& zeta,
                                const std::vector<int>& n_list, const std::vector<double>& ball_ln_radii,
                                int samples_per_n, std::uint64_t seed, const EstimatorConfig& cfg);

}  // namespace shortck
