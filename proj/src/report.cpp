#include "shortck/report.hpp"

#include "shortck/error.hpp"

namespace shortck {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double CertReport::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  throw Error("missing report parameter: " + key);
}

Verdict decide(double margin, long violations) {
  if (violations > 0) return Verdict::refuted;
  if (margin > 0.0) return Verdict::certified;
  if (margin < 0.0) return Verdict::refuted;
  return Verdict::inconclusive;
}

}  // namespace shortck
