#include "shortck/dynsys.hpp"

#include <algorithm>
#include <cmath>

#include "shortck/error.hpp"
#include "shortck/rng.hpp"

namespace shortck {

PolyOneVar::PolyOneVar(int d, std::vector<ExtComplex> low) : d_(d), low_(std::move(low)) {
  if (d < 2) throw UsageError("polynomial degree must be at least 2");
  if (low_.empty()) low_.assign(static_cast<std::size_t>(d), ExtComplex{});
  if (static_cast<int>(low_.size()) != d) throw UsageError("polynomial needs exactly d low coefficients");
}

PolyOneVar PolyOneVar::from_complex(int d, std::span<const std::complex<double>> low) {
  std::vector<ExtComplex> c;
  c.reserve(low.size());
  for (const auto& v : low) c.push_back(ExtComplex::from_complex(v));
  return PolyOneVar(d, std::move(c));
}

double PolyOneVar::low_abs_sum() const {
  double s = 0.0;
  for (const auto& c : low_) s += c.abs();
  return s;
}

bool PolyOneVar::low_is_zero() const {
  return std::all_of(low_.begin(), low_.end(), [](const ExtComplex& c) { return c.is_zero(); });
}

ExtComplex PolyOneVar::eval(const ExtComplex& z) const {
  ExtComplex acc = ExtComplex::one();
  for (int j = d_ - 1; j >= 0; --j) acc = acc * z + low_[static_cast<std::size_t>(j)];
  return acc;
}

ExtComplex PolyOneVar::derivative(const ExtComplex& z) const {
  ExtComplex acc = ExtComplex::from_double(d_);
  for (int j = d_ - 1; j >= 1; --j)
    acc = acc * z + ExtComplex::from_double(j) * low_[static_cast<std::size_t>(j)];
  return acc;
}

const char* to_string(MapKind k) { return k == MapKind::henon ? "henon" : "shiftlike"; }

MapSpec MapSpec::henon(PolyOneVar p, ExtComplex delta) {
  MapSpec m{MapKind::henon, 2, std::move(p), delta};
  m.validate();
  return m;
}

MapSpec MapSpec::shiftlike(PolyOneVar p, ExtComplex coeff, int k) {
  MapSpec m{MapKind::shiftlike, k, std::move(p), coeff};
  m.validate();
  return m;
}

void MapSpec::validate() const {
  if (coeff.is_zero()) throw UsageError("map coefficient must be nonzero");
  if (k < 2 || k > kMaxDim) throw UsageError("map dimension out of range");
  if (kind == MapKind::henon && k != 2) throw UsageError("henon maps live in dimension 2");
}

namespace {

void check_dim(const MapSpec& map, const PointK& x) {
  if (x.dim() != map.k) throw UsageError("dimension mismatch");
}

}  // namespace

PointK apply(const MapSpec& map, const PointK& x) {
  check_dim(map, x);
  PointK y(map.k);
  if (map.kind == MapKind::henon) {
    y[0] = map.poly.eval(x[0]) + map.coeff * x[1];
    y[1] = x[0];
    return y;
  }
  y[0] = map.poly.eval(x[0]) + map.coeff * x[map.k - 1];
  for (int j = 1; j < map.k; ++j) y[j] = map.coeff * x[j - 1];
  return y;
}

PointK apply_inverse(const MapSpec& map, const PointK& y) {
  check_dim(map, y);
  PointK x(map.k);
  if (map.kind == MapKind::henon) {
    x[0] = y[1];
    x[1] = (y[0] - map.poly.eval(y[1])) / map.coeff;
    return x;
  }
  for (int j = 1; j < map.k; ++j) x[j - 1] = y[j] / map.coeff;
  x[map.k - 1] = (y[0] - map.poly.eval(x[0])) / map.coeff;
  return x;
}

PointK Jacobian::apply(const PointK& v) const {
  if (v.dim() != k_) throw UsageError("dimension mismatch");
  PointK out(k_);
  for (int i = 0; i < k_; ++i) {
    ExtComplex s;
    for (int j = 0; j < k_; ++j) s = s + (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ExtComplex Jacobian::det() const {
  std::vector<ExtComplex> a = a_;
  auto at = [&](int i, int j) -> ExtComplex& { return a[static_cast<std::size_t>(i * k_ + j)]; };
  ExtComplex det = ExtComplex::one();
  for (int col = 0; col < k_; ++col) {
    int piv = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = col; i < k_; ++i) {
      const double m = ext_abs_log(at(i, col)).value();
      if (!at(i, col).is_zero() && m > best) {
        best = m;
        piv = i;
      }
    }
    if (piv < 0) return ExtComplex{};
    if (piv != col) {
      for (int j = 0; j < k_; ++j) std::swap(at(piv, j), at(col, j));
      det = -det;
    }
    det = det * at(col, col);
    for (int i = col + 1; i < k_; ++i) {
      if (at(i, col).is_zero()) continue;
      const ExtComplex f = at(i, col) / at(col, col);
      for (int j = col; j < k_; ++j) at(i, j) = at(i, j) - f * at(col, j);
    }
  }
  return det;
}

Jacobian jacobian(const MapSpec& map, const PointK& x) {
  check_dim(map, x);
  Jacobian J(map.k);
  J(0, 0) = map.poly.derivative(x[0]);
  if (map.kind == MapKind::henon) {
    J(0, 1) = map.coeff;
    J(1, 0) = ExtComplex::one();
    return J;
  }
  J(0, map.k - 1) = J(0, map.k - 1) + map.coeff;
  for (int j = 1; j < map.k; ++j) J(j, j - 1) = map.coeff;
  return J;
}

const char* to_string(SequenceSource s) {
  switch (s) {
    case SequenceSource::explicit_list: return "explicit";
    case SequenceSource::scheduled: return "scheduled";
    case SequenceSource::random: return "random";
  }
  return "explicit";
}

MapSequence MapSequence::constant(MapSpec map) { return explicit_list({std::move(map)}); }

MapSequence MapSequence::explicit_list(std::vector<MapSpec> maps) {
  if (maps.empty()) throw UsageError("map list is empty");
  for (const auto& m : maps) {
    m.validate();
    if (m.k != maps.front().k || m.degree() != maps.front().degree())
      throw UsageError("maps in a sequence must share dimension and degree");
  }
  MapSequence s;
  s.source_ = SequenceSource::explicit_list;
  s.degree_ = maps.front().degree();
  s.dim_ = maps.front().k;
  s.kind_ = maps.front().kind;
  s.maps_ = std::make_shared<const std::vector<MapSpec>>(std::move(maps));
  return s;
}

MapSequence MapSequence::scheduled(Schedule schedule, SequenceTemplate tmpl) {
  if (tmpl.d < 2) throw UsageError("polynomial degree must be at least 2");
  if (!tmpl.q_unit.empty() && static_cast<int>(tmpl.q_unit.size()) != tmpl.d)
    throw UsageError("q_unit needs exactly d coefficients");
  if (tmpl.k < 2 || tmpl.k > kMaxDim) throw UsageError("map dimension out of range");
  if (tmpl.kind == MapKind::henon && tmpl.k != 2) throw UsageError("henon maps live in dimension 2");
  MapSequence s;
  s.source_ = SequenceSource::scheduled;
  s.degree_ = tmpl.d;
  s.dim_ = tmpl.k;
  s.kind_ = tmpl.kind;
  s.schedule_ = std::make_shared<const Schedule>(std::move(schedule));
  s.tmpl_ = std::make_shared<const SequenceTemplate>(std::move(tmpl));
  return s;
}

MapSequence MapSequence::random(std::uint64_t seed, int d, double bound) {
  if (d < 2) throw UsageError("polynomial degree must be at least 2");
  if (!(bound > 0.0) || !std::isfinite(bound)) throw UsageError("coefficient bound must be positive");
  MapSequence s;
  s.source_ = SequenceSource::random;
  s.degree_ = d;
  s.dim_ = 2;
  s.kind_ = MapKind::henon;
  s.seed_ = seed;
  s.bound_ = bound;
  return s;
}

MapSpec MapSequence::at(std::int64_t n) const {
  if (n < 1) throw UsageError("map index starts at 1");
  const std::int64_t m = n + offset_;
  switch (source_) {
    case SequenceSource::explicit_list: {
      const auto idx = std::min<std::int64_t>(m, static_cast<std::int64_t>(maps_->size()));
      return (*maps_)[static_cast<std::size_t>(idx - 1)];
    }
    case SequenceSource::scheduled: {
      if (m > schedule_->horizon()) throw UsageError("map index beyond schedule horizon");
      const ExtComplex a = schedule_->a(static_cast<int>(m));
      std::vector<ExtComplex> q;
      q.reserve(tmpl_->q_unit.size());
      for (const auto& u : tmpl_->q_unit) q.push_back(a * ExtComplex::from_complex(u));
      const ExtComplex coeff =
          tmpl_->phase == 0.0 ? a : a * ExtComplex::from_complex(std::polar(1.0, tmpl_->phase));
      PolyOneVar p(tmpl_->d, std::move(q));
      return tmpl_->kind == MapKind::henon ? MapSpec::henon(std::move(p), coeff)
                                           : MapSpec::shiftlike(std::move(p), coeff, tmpl_->k);
    }
    case SequenceSource::random: {
      SplitMix64 rng(seed_, static_cast<std::uint64_t>(m));
      std::vector<ExtComplex> q;
      q.reserve(static_cast<std::size_t>(degree_));
      for (int j = 0; j < degree_; ++j) q.push_back(ExtComplex::from_complex(bound_ * rng.unit_disc()));
      ExtComplex delta;
      while (delta.is_zero()) delta = ExtComplex::from_complex(bound_ * rng.unit_disc());
      return MapSpec::henon(PolyOneVar(degree_, std::move(q)), delta);
    }
  }
  throw Error("unreachable");
}

MapSequence MapSequence::shifted(std::int64_t m) const {
  if (m < 0) throw UsageError("shift must be nonnegative");
  MapSequence s = *this;
  s.offset_ += m;
  return s;
}

std::optional<std::int64_t> MapSequence::last_index() const {
  if (source_ == SequenceSource::scheduled) return schedule_->horizon() - offset_;
  return std::nullopt;
}

namespace {

// Largest |coefficient| profile over the tail: |c_j| per j, |alpha|, |beta|.
struct Profile {
  std::vector<double> c;
  double alpha = 0.0;
  double beta = 0.0;
};

void absorb(Profile& p, const MapSpec& m) {
  if (p.c.empty()) p.c.assign(static_cast<std::size_t>(m.degree()), 0.0);
  for (int j = 0; j < m.degree(); ++j)
    p.c[static_cast<std::size_t>(j)] = std::max(p.c[static_cast<std::size_t>(j)], m.poly.low()[static_cast<std::size_t>(j)].abs());
  p.alpha = std::max(p.alpha, m.coeff.abs());
  p.beta = std::max(p.beta, m.kind == MapKind::henon ? 1.0 : m.coeff.abs());
}

Profile tail_profile(const MapSequence& seq) {
  Profile p;
  p.c.assign(static_cast<std::size_t>(seq.degree()), 0.0);
  switch (seq.source()) {
    case SequenceSource::explicit_list: {
      const auto& maps = seq.explicit_maps();
      const auto first = std::min<std::int64_t>(seq.offset(), static_cast<std::int64_t>(maps.size()) - 1);
      for (auto i = static_cast<std::size_t>(first); i < maps.size(); ++i) absorb(p, maps[i]);
      break;
    }
    case SequenceSource::scheduled: {
      const Schedule& s = *seq.schedule();
      const auto& t = *seq.sequence_template();
      double amax = 0.0;
      for (auto m = seq.offset() + 1; m <= s.horizon(); ++m)
        amax = std::max(amax, std::exp(s.ln_a(static_cast<int>(m))));
      for (int j = 0; j < seq.degree() && !t.q_unit.empty(); ++j)
        p.c[static_cast<std::size_t>(j)] = amax * std::abs(t.q_unit[static_cast<std::size_t>(j)]);
      p.alpha = amax;
      p.beta = t.kind == MapKind::henon ? 1.0 : amax;
      break;
    }
    case SequenceSource::random:
      std::fill(p.c.begin(), p.c.end(), seq.random_bound());
      p.alpha = seq.random_bound();
      p.beta = 1.0;
      break;
  }
  return p;
}

}  // namespace

MapSequence::Bounds MapSequence::bounds() const {
  const Profile p = tail_profile(*this);
  Bounds b;
  for (double c : p.c) b.q_sum += c;
  b.alpha = p.alpha;
  b.beta = p.beta;
  return b;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::budget: return "budget";
    case Termination::escaped: return "escaped";
    case Termination::converged: return "converged";
  }
  return "budget";
}

OrbitRecord orbit(const MapSequence& seq, const PointK& x, int budget, LogMag escape_ln,
                  LogMag converge_ln) {
  if (budget < 1) throw UsageError("orbit budget must be at least 1");
  OrbitRecord rec;
  rec.points.push_back(x);
  auto classify_point = [&](const PointK& p) -> std::optional<Termination> {
    const LogMag n = p.norm1_ln();
    if (n >= escape_ln) return Termination::escaped;
    if (n <= converge_ln) return Termination::converged;
    for (int i = 0; i < p.dim(); ++i)
      if (!p[i].is_zero() && p[i].e2() > kEscapeExponent) return Termination::escaped;
    return std::nullopt;
  };
  if (auto t = classify_point(x)) {
    rec.terminated = *t;
    return rec;
  }
  for (int step = 1; step <= budget; ++step) {
    PointK next;
    try {
      next = apply(seq.at(step), rec.points.back());
    } catch (const ExponentBudgetError&) {
      // Budget overflow from below means the orbit collapsed onto the origin.
      rec.terminated =
          rec.points.back().norm1_ln().value() < 0.0 ? Termination::converged : Termination::escaped;
      rec.step = step;
      return rec;
    }
    rec.points.push_back(next);
    rec.n_steps = step;
    if (auto t = classify_point(next)) {
      rec.terminated = *t;
      rec.step = step;
      return rec;
    }
  }
  rec.terminated = Termination::budget;
  rec.step = budget;
  return rec;
}

PointK forward(const MapSequence& seq, const PointK& x, int n) {
  PointK y = x;
  for (int j = 1; j <= n; ++j) y = apply(seq.at(j), y);
  return y;
}

PointK backward(const MapSequence& seq, const PointK& y, int n) {
  PointK x = y;
  for (int j = n; j >= 1; --j) x = apply_inverse(seq.at(j), x);
  return x;
}

double attraction_radius(const MapSequence& seq) {
  const Profile p = tail_profile(seq);
  if (p.beta > 0.5) return 0.0;
  const int d = seq.degree();
  for (int j = 1; j <= 60; ++j) {
    const double rho = std::ldexp(1.0, -j);
    double s = std::pow(rho, d - 1) + p.alpha + p.c[0] / rho;
    for (int i = 1; i < d; ++i) s += p.c[static_cast<std::size_t>(i)] * std::pow(rho, i - 1);
    if (s <= 0.5) return rho;
  }
  return 0.0;
}

}  // namespace shortck
