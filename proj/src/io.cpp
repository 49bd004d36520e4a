#include "shortck/io.hpp"

#include <cmath>
#include <fstream>

namespace shortck::io {

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

std::complex<double> complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw UsageError("complex number must be [re, im]");
}

json to_json(std::complex<double> z) { return json::array({num(z.real()), num(z.imag())}); }

ExtComplex ext_from(const json& j) {
  if (j.is_object()) {
    const auto m = complex_from(get<json>(j, "mantissa"));
    return ExtComplex::normalize(m.real(), m.imag(), get<std::int64_t>(j, "e2"));
  }
  return ExtComplex::from_complex(complex_from(j));
}

json to_json(const ExtComplex& z) {
  if (z.is_zero() || (z.e2() > -1000 && z.e2() < 1000)) return to_json(z.to_complex());
  return json{{"mantissa", json::array({z.m_re(), z.m_im()})}, {"e2", z.e2()}};
}

PointK point_from(const json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > static_cast<std::size_t>(kMaxDim))
    throw UsageError("point must be an array of 2..8 complex numbers");
  PointK x(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) x[static_cast<int>(i)] = ext_from(j[i]);
  return x;
}

json to_json(const PointK& x) {
  json a = json::array();
  for (const auto& c : x.coords()) a.push_back(to_json(c));
  return a;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
json num(const LogMag& v) { return num(v.value()); }

namespace {

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json params_obj(const std::vector<std::pair<std::string, double>>& ps) {
  json o = json::object();
  for (const auto& [k, v] : ps) o[k] = num(v);
  return o;
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

MapKind kind_from(const std::string& s) {
  if (s == "henon") return MapKind::henon;
  if (s == "shiftlike") return MapKind::shiftlike;
  throw UsageError("unknown map kind: " + s);
}

}  // namespace

PolyOneVar poly_from(const json& j) {
  const int d = get<int>(j, "d");
  if (d < 2 || d > 8) throw UsageError("degree must lie in 2..8");
  std::vector<ExtComplex> low;
  if (j.contains("q")) {
    const json& q = j.at("q");
    if (!q.is_array() || q.size() > static_cast<std::size_t>(d)) throw UsageError("q must hold at most d coefficients");
    for (const auto& c : q) low.push_back(ext_from(c));
    low.resize(static_cast<std::size_t>(d));
  }
  return PolyOneVar(d, std::move(low));
}

MapSpec map_from(const json& j) {
  const MapKind kind = kind_from(get_or<std::string>(j, "kind", "henon"));
  const PolyOneVar p = poly_from(j);
  const char* ckey = j.contains("coeff") ? "coeff" : "delta";
  const ExtComplex c = ext_from(get<json>(j, ckey));
  MapSpec m = kind == MapKind::henon ? MapSpec::henon(p, c) : MapSpec::shiftlike(p, c, get_or<int>(j, "k", 2));
  m.validate();
  return m;
}

json to_json(const MapSpec& m) {
  json q = json::array();
  for (const auto& c : m.poly.low()) q.push_back(to_json(c));
  json o{{"kind", to_string(m.kind)}, {"d", m.degree()}, {"q", q}};
  o[m.kind == MapKind::henon ? "delta" : "coeff"] = to_json(m.coeff);
  if (m.kind == MapKind::shiftlike) o["k"] = m.k;
  return o;
}

Schedule schedule_from(const json& j) {
  const Regime regime = regime_from_string(get<std::string>(j, "regime"));
  const double c = get<double>(j, "c");
  switch (regime) {
    case Regime::geometric: return gen_geometric_schedule(c, get<double>(j, "t"), get<int>(j, "N"));
    case Regime::fb:
      if (j.contains("eps")) return Schedule::from_eps(Regime::fb, c, get<std::vector<double>>(j, "eps"));
      return gen_fb_schedule(c, get<int>(j, "N"));
    case Regime::short_c2:
      if (j.contains("eps")) {
        const auto eps = get<std::vector<double>>(j, "eps");
        return gen_short_schedule(c, eps);
      }
      return gen_short_schedule(c, get<double>(j, "eps_const"), get<int>(j, "N"));
  }
  throw UsageError("unknown regime");
}

json to_json(const Schedule& s) {
  json o{{"regime", to_string(s.regime())}, {"c", s.c()}, {"N", s.horizon()}};
  if (s.regime() == Regime::geometric) {
    o["t"] = s.t_const();
  } else {
    o["eps"] = nums(s.eps());
  }
  return o;
}

SequenceTemplate template_from(const json& j) {
  SequenceTemplate t;
  t.kind = kind_from(get_or<std::string>(j, "kind", "shiftlike"));
  t.k = get_or<int>(j, "k", 2);
  t.d = get_or<int>(j, "d", 2);
  if (j.contains("q_unit"))
    for (const auto& c : j.at("q_unit")) t.q_unit.push_back(complex_from(c));
  t.phase = get_or<double>(j, "phase", 0.0);
  return t;
}

MapSequence sequence_from_config(const json& cfg) {
  if (cfg.contains("map")) return MapSequence::constant(map_from(cfg.at("map")));
  if (!cfg.contains("sequence")) throw UsageError("config needs 'map' or 'sequence'");
  const json& s = cfg.at("sequence");
  const std::string type = get<std::string>(s, "type");
  if (type == "explicit") {
    std::vector<MapSpec> maps;
    for (const auto& m : get<json>(s, "maps")) maps.push_back(map_from(m));
    return MapSequence::explicit_list(std::move(maps));
  }
  if (type == "scheduled")
    return MapSequence::scheduled(schedule_from(get<json>(s, "schedule")),
                                  template_from(get_or<json>(s, "template", json::object())));
  if (type == "random")
    return MapSequence::random(get<std::uint64_t>(s, "seed"), get_or<int>(s, "d", 2), get<double>(s, "bound"));
  throw UsageError("unknown sequence type: " + type);
}

EstimatorConfig estimator_from(const json& cfg, const MapSequence& seq) {
  const json e = get_or<json>(cfg, "estimator", json::object());
  EstimatorConfig def;
  return EstimatorConfig::make(seq, get_or<int>(e, "max_n", def.max_n), get_or<double>(e, "tol", def.tol),
                               get_or<double>(e, "filtration_R_ln", def.filtration_R_ln));
}

DeformationFamily family_from(const json& j) {
  const std::string v = get_or<std::string>(j, "variant", "quadratic");
  if (v == "quadratic") return DeformationFamily::quadratic(get<double>(j, "a"), get<double>(j, "r"));
  if (v == "general") {
    const MapSpec m = map_from(get<json>(j, "map"));
    if (m.kind != MapKind::henon) throw UsageError("general family needs a henon map");
    const double r = get<double>(j, "r");
    const double M = get_or<double>(j, "M", DeformationFamily::min_M(m.degree(), r));
    return DeformationFamily::general(m.poly, m.coeff.to_complex(), r, M);
  }
  throw UsageError("unknown family variant: " + v);
}

json to_json(const GreenEstimate& g) {
  return {{"value", num(g.value)},
          {"n_used", g.n_used},
          {"err_bound", num(g.err_bound)},
          {"status", to_string(g.status)}};
}

json to_json(const ClassifiedPoint& c) {
  json o{{"status", to_string(c.status)}, {"steps", c.steps}};
  o["green"] = c.green ? to_json(*c.green) : json(nullptr);
  return o;
}

json to_json(const SublevelResult& s) {
  return {{"verdict", to_string(s.verdict)}, {"margin", num(s.margin)}, {"green", to_json(s.green)}};
}

json to_json(const CertReport& c) {
  return {{"condition", c.condition}, {"params", params_obj(c.params)}, {"verdict", to_string(c.verdict)},
          {"margin", num(c.margin)},  {"samples", c.samples},            {"violations", c.violations}};
}

json to_json(const UnionWitness& u) {
  return {{"t_prime", num(u.t_prime)}, {"z", to_json(u.z)}, {"w_prime", to_json(u.w_prime)}, {"cert", to_json(u.cert)}};
}

json to_json(const IntersectionResult& r) {
  return {{"z", to_json(r.z)},
          {"w_limit", to_json(r.w_limit)},
          {"gaps", nums(r.gaps)},
          {"residual", num(r.residual)},
          {"cert", to_json(r.cert)}};
}

json to_json(const SublevelDecomposition& d) {
  return {{"henon", to_json(d.henon)},
          {"r", d.r},
          {"delta", d.delta},
          {"bidisc_c", num(d.bidisc_c)},
          {"L_prime", num(d.L_prime)},
          {"N", d.N()},
          {"r_seq", nums(d.r_seq)},
          {"m_seq", d.m_seq},
          {"exponents", nums(d.exponents)},
          {"factorization_max_rel", num(d.factorization_max_rel)}};
}

json to_json(const NestingReport& n) {
  return {{"samples", n.samples}, {"violations", n.violations}, {"members", n.members}};
}

json to_json(const ChainReport& c) {
  return {{"cert", to_json(c.cert)},
          {"a", num(c.a)},
          {"r", num(c.r)},
          {"t_grid", nums(c.t_grid)},
          {"endpoint_mismatches", c.endpoint_mismatches}};
}

json to_json(const ScheduleReport& r) {
  json w = json::array();
  for (const auto& x : r.fb2_windows) w.push_back({{"n", x.n}, {"k", x.k}});
  return {{"valid", r.valid},
          {"tn_ok", r.tn_ok},
          {"tn_min_margin", num(r.tn_min_margin)},
          {"tn_first_violation", r.tn_first_violation},
          {"fb3_ok", r.fb3_ok},
          {"fb3_min_margin", num(r.fb3_min_margin)},
          {"fb3_first_violation", r.fb3_first_violation},
          {"eps_monotone_ok", r.eps_monotone_ok},
          {"eps_floor_ok", r.eps_floor_ok},
          {"eps_ratio_decreasing_from", r.eps_ratio_decreasing_from},
          {"t_range_ok", r.t_range_ok},
          {"t_range_violations", r.t_range_violations},
          {"fb2_windows", w}};
}

json to_json(const ClaimReport& r) {
  return {{"t", r.t},
          {"l_max", r.l_max},
          {"pass", r.pass},
          {"first_failure", r.first_failure},
          {"failures", r.failures},
          {"margins", nums(r.margins)},
          {"inductive_ok", opt(r.inductive_ok)}};
}

json to_json(const InclusionReport& r) {
  return {{"cert", to_json(r.cert)}, {"margins", nums(r.margins)}, {"minimal_n", opt(r.minimal_n)}};
}

json to_json(const GrowthSeries& g) {
  return {{"n_max", g.n_max},
          {"G", nums(g.G)},
          {"ls", nums(g.ls)},
          {"rs", nums(g.rs)},
          {"lower_bound", nums(g.lower_bound)},
          {"log2_tpow", nums(g.log2_tpow)},
          {"crossover", opt(g.crossover)}};
}

json to_json(const EnvelopeSample& e) {
  return {{"point", to_json(e.point)}, {"n", e.n},
          {"phi_n_ln", num(e.phi_n_ln)}, {"u_n", num(e.u_n)},
          {"limit_est", num(e.limit_est)}, {"tail", num(e.tail)},
          {"u_prev", e.u_prev ? num(*e.u_prev) : json(nullptr)}};
}

json to_json(const EnvelopeMembership& e) {
  return {{"sign", to_string(e.sign)},
          {"classify_status", to_string(e.classify_status)},
          {"consistent", e.consistent},
          {"sample", to_json(e.sample)}};
}

json to_json(const FBReport& f) {
  return {{"lemma", f.lemma},
          {"params", params_obj(f.params)},
          {"minimal_n", opt(f.minimal_n)},
          {"per_k_margins", nums(f.per_k_margins)},
          {"orbit_sup_ln", nums(f.orbit_sup_ln)},
          {"seed_ok", f.seed_ok},
          {"direct_checks", f.direct_checks},
          {"direct_violations", f.direct_violations},
          {"chain_checks", f.chain_checks},
          {"chain_counterexamples", f.chain_counterexamples}};
}

json to_json(const VolumeResult& v) {
  return {{"r", v.r},
          {"R_list", nums(v.R_list)},
          {"samples", v.samples},
          {"seed", v.seed},
          {"counts", v.counts},
          {"undecided", v.undecided},
          {"estimates", nums(v.estimates)},
          {"ci_lo", nums(v.ci_lo)},
          {"ci_hi", nums(v.ci_hi)},
          {"note", "Monte-Carlo demonstration of growth only"}};
}

json to_json(const KobayashiResult& k) {
  json recs = json::array();
  for (const auto& r : k.records)
    recs.push_back({{"n", r.n},
                    {"ln_eta", num(r.ln_eta)},
                    {"ln_R", num(r.ln_R)},
                    {"ln_bound", num(r.ln_bound)},
                    {"r_attr", num(r.r_attr)},
                    {"t_samples", r.t_samples},
                    {"t_violations", r.t_violations}});
  return {{"p", to_json(k.p)}, {"zeta", to_json(k.zeta)}, {"records", recs},
          {"note", "upper bounds on the Kobayashi length only"}};
}

}  // namespace shortck::io
