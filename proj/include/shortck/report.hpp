#pragma once

#include <string>
#include <utility>
#include <vector>

namespace shortck {

enum class Verdict { certified, refuted, inconclusive };

const char* to_string(Verdict v);

// Outcome of one certification: an analytic sufficient inequality decides,
// a sampling oracle can only refute.
struct CertReport {
  std::string condition;
  std::vector<std::pair<std::string, double>> params;
  Verdict verdict = Verdict::inconclusive;
  double margin = 0.0;
  long samples = 0;
  long violations = 0;

  double param(const std::string& key) const;
};

// certified iff margin > 0 and no sampled violation; any violation refutes.
Verdict decide(double margin, long violations);

}  // namespace shortck
