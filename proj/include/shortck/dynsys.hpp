#pragma once

// Henon and shift-like polynomial automorphisms and sequences of them.
//
//   henon      (z, w)            -> (p(z) + delta w, z)
//   shiftlike  (z, w)            -> (p(z) + delta w, delta z)
//   shiftlike  (z_1, ..., z_k)   -> (p(z_1) + eta z_k, eta z_1, ..., eta z_{k-1})
//
// with p(z) = z^d + q(z), deg q <= d - 1.

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "shortck/schedules.hpp"
#include "shortck/xarith.hpp"

namespace shortck {

class PolyOneVar {
 public:
  PolyOneVar() = default;
  // low holds c_0 .. c_{d-1}; an empty span means q = 0.
  PolyOneVar(int d, std::vector<ExtComplex> low);
  static PolyOneVar monomial(int d) { return PolyOneVar(d, {}); }
  static PolyOneVar from_complex(int d, std::span<const std::complex<double>> low);

  int degree() const { return d_; }
  const std::vector<ExtComplex>& low() const { return low_; }
  // sum |c_j|
  double low_abs_sum() const;
  bool low_is_zero() const;

  ExtComplex eval(const ExtComplex& z) const;
  ExtComplex derivative(const ExtComplex& z) const;

  friend bool operator==(const PolyOneVar&, const PolyOneVar&) = default;

 private:
  int d_ = 2;
  std::vector<ExtComplex> low_ = std::vector<ExtComplex>(2);
};

enum class MapKind { henon, shiftlike };

const char* to_string(MapKind k);

struct MapSpec {
  MapKind kind = MapKind::henon;
  int k = 2;
  PolyOneVar poly;
  ExtComplex coeff = ExtComplex::one();

  static MapSpec henon(PolyOneVar p, ExtComplex delta);
  static MapSpec shiftlike(PolyOneVar p, ExtComplex coeff, int k = 2);

  int degree() const { return poly.degree(); }
  // Throws UsageError on a violated invariant.
  void validate() const;

  friend bool operator==(const MapSpec&, const MapSpec&) = default;
};

PointK apply(const MapSpec& map, const PointK& x);
PointK apply_inverse(const MapSpec& map, const PointK& y);

class Jacobian {
 public:
  explicit Jacobian(int k) : k_(k), a_(static_cast<std::size_t>(k * k)) {}
  int dim() const { return k_; }
  ExtComplex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * k_ + j)]; }
  const ExtComplex& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * k_ + j)]; }
  PointK apply(const PointK& v) const;
  ExtComplex det() const;

 private:
  int k_;
  std::vector<ExtComplex> a_;
};

Jacobian jacobian(const MapSpec& map, const PointK& x);

// Template for schedule-driven sequences: F_n has coefficient a_n e^{i phase}
// and q_n = a_n * q_unit.
struct SequenceTemplate {
  MapKind kind = MapKind::shiftlike;
  int k = 2;
  int d = 2;
  std::vector<std::complex<double>> q_unit;
  double phase = 0.0;
};

enum class SequenceSource { explicit_list, scheduled, random };

const char* to_string(SequenceSource s);

// {F_n}_{n >= 1}; immutable, cheap to copy. shifted(m) views the tail
// F_{m+1}, F_{m+2}, ... as a sequence in its own right.
class MapSequence {
 public:
  static MapSequence constant(MapSpec map);
  static MapSequence explicit_list(std::vector<MapSpec> maps);
  static MapSequence scheduled(Schedule schedule, SequenceTemplate tmpl);
  // Random Henon maps with coefficients in the closed disc of radius bound.
  static MapSequence random(std::uint64_t seed, int d, double bound);

  SequenceSource source() const { return source_; }
  MapSpec at(std::int64_t n) const;
  MapSequence shifted(std::int64_t m) const;
  std::int64_t offset() const { return offset_; }
  // Largest index with a defined map (scheduled: the horizon), if finite.
  std::optional<std::int64_t> last_index() const;

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  MapKind kind() const { return kind_; }

  // Upper bound on |coefficients| of every F_n in the (tail) sequence:
  // q coefficient sum, |alpha| (w-coefficient), |beta| (second coordinate).
  struct Bounds {
    double q_sum = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
  };
  Bounds bounds() const;

  const Schedule* schedule() const { return schedule_.get(); }
  const SequenceTemplate* sequence_template() const { return tmpl_.get(); }
  const std::vector<MapSpec>& explicit_maps() const { return *maps_; }
  std::uint64_t seed() const { return seed_; }
  double random_bound() const { return bound_; }

 private:
  SequenceSource source_ = SequenceSource::explicit_list;
  std::int64_t offset_ = 0;
  int degree_ = 2;
  int dim_ = 2;
  MapKind kind_ = MapKind::henon;
  std::shared_ptr<const std::vector<MapSpec>> maps_;
  std::shared_ptr<const Schedule> schedule_;
  std::shared_ptr<const SequenceTemplate> tmpl_;
  std::uint64_t seed_ = 0;
  double bound_ = 0.0;
};

enum class Termination { budget, escaped, converged };

const char* to_string(Termination t);

struct OrbitRecord {
  std::vector<PointK> points;
  int n_steps = 0;
  Termination terminated = Termination::budget;
  int step = 0;
};

// Exponent growth past 2^60 counts as escape.
inline constexpr std::int64_t kEscapeExponent = std::int64_t{1} << 60;

OrbitRecord orbit(const MapSequence& seq, const PointK& x, int budget, LogMag escape_ln,
                  LogMag converge_ln);

// F(n) = F_n o ... o F_1 and its inverse.
PointK forward(const MapSequence& seq, const PointK& x, int n);
PointK backward(const MapSequence& seq, const PointK& y, int n);

// Largest rho = 2^-j (j = 1..60) such that every map of the sequence sends
// the closed polydisc of radius rho into the one of radius rho/2, so the
// polydisc lies in the basin of the origin. Zero when none qualifies.
double attraction_radius(const MapSequence& seq);

}  // namespace shortck
