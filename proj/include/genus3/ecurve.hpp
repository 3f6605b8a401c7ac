#pragma once

// Genus-1 double covers y^2 = f(x) of the projective line, their point
// counts and Frobenius traces, and the classification of traces realized by
// elliptic curves over F_q.
//
// Trace convention: #E(F_q) = q + 1 + t.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "genus3/ff.hpp"

namespace genus3 {

// Largest extension field order any counting loop will scan.
inline constexpr std::uint64_t kCountCap = 100'000'000;

class CapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Square-free cubic or quartic f over F_q.
class EllipticModel {
 public:
  explicit EllipticModel(Poly f);

  const Poly& f() const { return f_; }
  const FieldPtr& base() const { return f_.field(); }
  std::uint64_t q() const { return f_.field()->order(); }
  int degree() const { return f_.degree(); }
  const Fel& lead() const { return f_.lead(); }

  friend bool operator==(const EllipticModel&, const EllipticModel&) = default;

 private:
  Poly f_;
};

// F_{q^k} for the base field F_q; throws CapExceeded above kCountCap.
FieldPtr counting_field(const FieldPtr& base, unsigned k);

// Points on the smooth projective model over F_{q^k}, 1 <= k <= 6.
std::int64_t count_points(const EllipticModel& m, unsigned k = 1);
std::int64_t trace(const EllipticModel& m);
// 1 + number of roots of the cubic in F_q; rejects quartic models.
int two_torsion_rational(const EllipticModel& m);
// j-invariant from the Weierstrass coefficients of a cubic model.
Fel j_invariant(const EllipticModel& m);
EllipticModel quadratic_twist(const EllipticModel& m, const Fel& d);
// Twist by the first non-square of F_q.
EllipticModel quadratic_twist(const EllipticModel& m);

// s_k = a^k + b^k where a, b are the roots of T^2 + tT + q.
std::int64_t trace_power_sum(std::int64_t t, std::uint64_t q, unsigned k);

bool hasse_bound_ok(std::uint64_t q, std::int64_t t);

// The six clauses under which q + 1 + t is the order of some E(F_q).
enum class WaterhouseClause {
  kCoprime = 1,     // gcd(p, t) = 1
  kTwiceSqrtQ = 2,  // r even, t = +-2 sqrt(q)
  kSqrtQ = 3,       // r even, p != 1 mod 3, t = +-sqrt(q)
  kSqrtPQ = 4,      // r odd, p in {2, 3}, t = +-sqrt(pq)
  kZeroOddR = 5,    // r odd, t = 0
  kZeroEvenR = 6,   // r even, p != 1 mod 4, t = 0
};

std::string_view clause_label(WaterhouseClause c);
// First satisfied clause, or nullopt if t is not realized (including |t| > 2 sqrt q).
std::optional<WaterhouseClause> waterhouse_clause(std::uint64_t q, std::int64_t t);
bool waterhouse_admissible(std::uint64_t q, std::int64_t t);
std::vector<std::int64_t> admissible_traces(std::uint64_t q);

struct CurveClass {
  Fel j;
  std::int64_t t = 0;
  int two_torsion = 0;
  EllipticModel representative;
};

// F_q-classes of elliptic curves keyed by (j, t, rational 2-torsion count),
// found by scanning every monic square-free cubic plus its twist by a fixed
// non-square. The representative is the lexicographically first monic cubic
// of the class. Sorted by (t, j, two_torsion).
std::vector<CurveClass> enumerate_classes(const FieldPtr& base);

}  // namespace genus3
