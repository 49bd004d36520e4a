#pragma once

// JSON configs and reports. Complex numbers are [re, im]; extended values
// too large for binary64 are {"mantissa": [re, im], "e2": n}.

#include <json.hpp>
#include <optional>
#include <string>

#include "shortck/dynsys.hpp"
#include "shortck/error.hpp"
#include "shortck/green.hpp"
#include "shortck/loewner.hpp"
#include "shortck/probe.hpp"
#include "shortck/report.hpp"
#include "shortck/schedules.hpp"
#include "shortck/shortfb.hpp"

namespace shortck::io {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

json parse_file(const std::string& path);

std::complex<double> complex_from(const json& j);
json to_json(std::complex<double> z);
ExtComplex ext_from(const json& j);
json to_json(const ExtComplex& z);
PointK point_from(const json& j);
json to_json(const PointK& x);
// -inf and NaN become null.
json num(double v);
json num(const LogMag& v);

PolyOneVar poly_from(const json& j);
MapSpec map_from(const json& j);
json to_json(const MapSpec& m);
Schedule schedule_from(const json& j);
json to_json(const Schedule& s);
SequenceTemplate template_from(const json& j);
// {"map": ...} or {"sequence": {...}} inside a config.
MapSequence sequence_from_config(const json& cfg);
EstimatorConfig estimator_from(const json& cfg, const MapSequence& seq);
DeformationFamily family_from(const json& j);

json to_json(const GreenEstimate& g);
json to_json(const ClassifiedPoint& c);
json to_json(const SublevelResult& s);
json to_json(const CertReport& c);
json to_json(const UnionWitness& u);
json to_json(const IntersectionResult& r);
json to_json(const SublevelDecomposition& d);
json to_json(const NestingReport& n);
json to_json(const ChainReport& c);
json to_json(const ScheduleReport& r);
json to_json(const ClaimReport& r);
json to_json(const InclusionReport& r);
json to_json(const GrowthSeries& g);
json to_json(const EnvelopeSample& e);
json to_json(const EnvelopeMembership& e);
json to_json(const FBReport& f);
json to_json(const VolumeResult& v);
json to_json(const KobayashiResult& k);

// Typed field access raising UsageError with the key name.
template <class T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw UsageError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("bad field '") + key + "'");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return get<T>(j, key);
}

}  // namespace shortck::io
