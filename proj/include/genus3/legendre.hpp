#pragma once

// Legendre coefficients, their six-element equivalence orbits, j-invariants,
// ramification sets on P^1 and the PGL(2) action used to rearrange them.
//
// Branch points of a model over F_q are kept in F_{q^2}; every Legendre
// coefficient handled here is an element of F_{q^2} as well.

#include <compare>
#include <optional>
#include <vector>

#include "genus3/ecurve.hpp"
#include "genus3/ff.hpp"

namespace genus3 {

// Point of P^1 in canonical form: [x : 1] or the point at infinity [1 : 0].
// Infinity orders before every finite point.
struct ProjPoint {
  std::optional<Fel> x;

  static ProjPoint infinity() { return {}; }
  static ProjPoint finite(const Fel& v) { return {v}; }
  bool is_infinity() const { return !x.has_value(); }

  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
  friend auto operator<=>(const ProjPoint&, const ProjPoint&) = default;
};

// F_{q^2} for the base field F_q.
FieldPtr quadratic_extension(const FieldPtr& base);

ProjPoint frobenius(const ProjPoint& P, const Field& ext, std::uint64_t q);

// The four branch points of y^2 = f(x), sorted.
struct RamSet {
  FieldPtr base;
  FieldPtr ext;
  std::vector<ProjPoint> pts;

  bool contains(const ProjPoint& P) const;
  // Number of points fixed by the q-power Frobenius.
  int rational_count() const;
  bool frobenius_stable() const;
};

// Throws MathError if some branch point lies outside F_{q^2}.
RamSet ram_set(const EllipticModel& m);
std::size_t intersection_size(const std::vector<ProjPoint>& a, const std::vector<ProjPoint>& b);

// Monic polynomial over `base` whose roots are the finite points given (in
// `ext`); throws if the point set is not defined over the base field.
Poly poly_from_points(const std::vector<ProjPoint>& pts, const FieldPtr& ext, const FieldPtr& base);

// (p3 - p1) / (p2 - p1) for distinct finite points.
Fel lambda_from_points(const Field& F, const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3);
// Image of d under the map sending a, b, c to 0, 1, infinity.
Fel cross_ratio(const Field& F, const ProjPoint& a, const ProjPoint& b, const ProjPoint& c, const ProjPoint& d);

// {l, 1 - l, 1/l, 1/(1 - l), (l - 1)/l, l/(l - 1)}, sorted and deduplicated.
std::vector<Fel> orbit(const Field& F, const Fel& lambda);
bool legendre_equivalent(const Field& F, const Fel& l1, const Fel& l2);
// 2^8 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)
Fel j_invariant(const Field& F, const Fel& lambda);

// Smallest Legendre coefficient over all orderings of the branch points.
Fel canonical_lambda(const RamSet& R);
// Geometric isomorphism; decided by Legendre orbits and by j, which must agree.
bool isomorphic_curves(const EllipticModel& m1, const EllipticModel& m2);

// l2 (1 - l1) / (l2 - l1)
Fel case1_lambda(const Field& F, const Fel& l1, const Fel& l2);
// l2 / l1
Fel case2_lambda(const Field& F, const Fel& l1, const Fel& l2);

// Element of PGL(2) acting by [x : y] -> [a x + b y : c x + d y], scaled so
// the first nonzero entry is 1.
class Mobius {
 public:
  Mobius(FieldPtr field, Fel a, Fel b, Fel c, Fel d);

  static Mobius identity(FieldPtr field);
  // Unique map carrying src[i] to dst[i]; points in each triple must be distinct.
  static Mobius from_triple(FieldPtr field, const std::array<ProjPoint, 3>& src,
                            const std::array<ProjPoint, 3>& dst);
  // x -> 1 / (x - u) for finite u, the identity for u = infinity; sends u to infinity.
  static Mobius send_to_infinity(FieldPtr field, const ProjPoint& u);

  ProjPoint apply(const ProjPoint& P) const;
  Mobius compose(const Mobius& inner) const;  // this after inner
  Mobius inverse() const;
  // Entries fixed by the q-power Frobenius.
  bool defined_over(std::uint64_t q) const;

  const std::array<Fel, 4>& entries() const { return m_; }
  const FieldPtr& field() const { return field_; }
  friend bool operator==(const Mobius& x, const Mobius& y) { return x.m_ == y.m_; }

 private:
  FieldPtr field_;
  std::array<Fel, 4> m_;  // a, b, c, d
};

std::vector<ProjPoint> apply(const Mobius& s, const std::vector<ProjPoint>& pts);

// Every sigma in PGL(2, q) carrying an ordered triple of R(m2) onto an ordered
// triple of R(m1) with |sigma(R(m2)) ∩ R(m1)| = 3, in enumeration order.
std::vector<Mobius> alignments(const EllipticModel& m1, const EllipticModel& m2);
// Model isomorphic to m2 whose branch points share exactly three with m1.
EllipticModel align_third_curve(const EllipticModel& m1, const EllipticModel& m2);

}  // namespace genus3
