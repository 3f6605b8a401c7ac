#pragma once

// Arrangement of three elliptic curves so their branch sets meet in the
// (3, 3, 3; 2) pattern, the resulting (Z/2)^3 cover of P^1, its structural
// checks, and the search for Legendre-consistent trace triples.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "genus3/ecurve.hpp"
#include "genus3/legendre.hpp"

namespace genus3 {

enum class ArrangementCase { kWeak, kStrong };
std::string_view case_name(ArrangementCase c);

// Bad arguments: inadmissible or repeated traces, malformed structures.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A cover whose ramification data fails the genus-3 pattern.
class StructureError : public InputError {
 public:
  using InputError::InputError;
};

class NotConsistent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LambdaRecord {
  Fel value;               // in F_{q^2}
  std::string provenance;  // formula it was computed from
};

struct Intersections {
  std::array<int, 3> pairwise{};  // |R1∩R2|, |R1∩R3|, |R2∩R3|
  int triple = 0;
  int union_size = 0;
};

// Points are kept in F_{q^2}. R1 = {inf, p1, p2, p3}, R2 = {inf, p1, p2, p4};
// weak: R3 = {p1, p2, p3, p4} with p1, p2 conjugate; strong: R3 = {inf, p1, p3, p4}.
struct ConstructionCertificate {
  FieldPtr base;
  FieldPtr ext;
  ArrangementCase arrangement = ArrangementCase::kStrong;
  std::array<Fel, 4> points;
  std::array<EllipticModel, 3> models;
  std::array<LambdaRecord, 3> lambdas;
  // Measured on the models; after twist reconciliation these equal the targets.
  std::array<std::int64_t, 3> traces{};
  // role r is played by input curve input_index[r]
  std::array<int, 3> input_index{0, 1, 2};
  Intersections meets;
};

struct Genus3Cover {
  FieldPtr base;
  std::array<Poly, 3> f;
  int ram_union = 0;
  bool degree8 = false;
};

// |R1 ∪ R2 ∪ R3| by inclusion-exclusion on gcd degrees, infinity counted for
// odd-degree polynomials.
int hurwitz_ram_count(const std::array<Poly, 3>& f);
int hurwitz_ram_count(const Genus3Cover& cover);
// Genus of the (Z/2)^3 cover with u branch points, each with 4 preimages.
int hurwitz_genus(int ram_union);
Intersections intersections(const std::array<Poly, 3>& f);

// For every nonempty S, prod_{i in S} f_i is not a constant times a square.
bool degree8_check(const std::array<Poly, 3>& f);
bool degree8_check(const Genus3Cover& cover);

// Validates squarefreeness, degrees 3/4, the 3/3/3/2/5 intersection pattern
// and the degree-8 condition; throws StructureError otherwise.
Genus3Cover make_cover(const std::array<Poly, 3>& f);
Genus3Cover build_cover(const ConstructionCertificate& cert);
// Throws StructureError if any certificate invariant fails.
void check_certificate(const ConstructionCertificate& cert);

// Every arrangement of (m1, m2, m3) reachable by aligning m2 to m1 with a
// rational Mobius map, in deterministic order. The third model of each is
// geometrically isomorphic to m3; signs (twists) are not adjusted.
std::vector<ConstructionCertificate> arrangements(const EllipticModel& m1, const EllipticModel& m2,
                                                  const EllipticModel& m3);
// Normal form for Legendre coefficients l1, l2: strong (0, 1, l1, l2);
// weak p1, p2 = the square roots of the first non-square of F_q, p3, p4 at
// p1 + l (p2 - p1). Models are monic. Throws MathError if l1, l2 do not fit
// the layout.
ConstructionCertificate legendre_certificate(const FieldPtr& base, ArrangementCase mode, const Fel& l1,
                                             const Fel& l2);
// First of the above; throws MathError on violated preconditions or if no
// arrangement reproduces m3.
ConstructionCertificate arrange_triple(const EllipticModel& m1, const EllipticModel& m2, const EllipticModel& m3);

// ---------------------------------------------------------------------------
// Consistency search

// Classes of F_q-curves with their Legendre data.
struct ClassInfo {
  CurveClass cls;
  std::vector<Fel> orbit;  // in F_{q^2}
  // Orbit members realizable as (p3 - p1)/(p2 - p1) with inf in R: all of
  // them when the branch points are rational, those with l^q = 1 - l for a
  // conjugate pair otherwise.
  std::vector<Fel> usable;
};

class ClassCatalog {
 public:
  explicit ClassCatalog(FieldPtr base);
  ClassCatalog(FieldPtr base, std::vector<CurveClass> classes);

  const FieldPtr& base() const { return base_; }
  const FieldPtr& ext() const { return ext_; }
  const std::vector<ClassInfo>& classes() const { return info_; }
  std::vector<const ClassInfo*> with(std::int64_t t, int two_torsion) const;

 private:
  FieldPtr base_, ext_;
  std::vector<ClassInfo> info_;
};

struct ConsistencyWitness {
  ArrangementCase mode = ArrangementCase::kStrong;
  std::array<int, 3> perm{};           // (i1, i2, i3), indices into the inputs
  std::array<Fel, 3> lambdas;          // chosen l_{i1}, l_{i2}, and the formula value
  std::array<const ClassInfo*, 3> classes{};  // per input index
};

enum class ModeRequest { kWeak, kStrong, kAuto };

struct SearchOptions {
  ModeRequest mode = ModeRequest::kAuto;
  // Allow repeated traces (classes stay non-isomorphic) and let weak mode take
  // any even point count: only the 2-torsion count of each class is required.
  bool relaxed = false;
};

// Validates admissibility, distinctness and the mod-4 split; returns the modes
// to search in order (relaxed auto on an all-0 triple tries strong, then weak).
// Throws InputError or NotConsistent (mod-4 mismatch).
std::vector<ArrangementCase> trace_triple_modes(std::uint64_t q, const std::array<std::int64_t, 3>& t,
                                               const SearchOptions& opt);
ArrangementCase check_trace_triple(std::uint64_t q, const std::array<std::int64_t, 3>& t, const SearchOptions& opt);

// Calls visit on every witness in search order until it returns true.
// Returns the number of candidates examined.
std::uint64_t for_each_witness(const ClassCatalog& cat, const std::array<std::int64_t, 3>& t, ArrangementCase mode,
                               const std::function<bool(const ConsistencyWitness&)>& visit);

ConsistencyWitness decide_consistency(const ClassCatalog& cat, const std::array<std::int64_t, 3>& t,
                                      const SearchOptions& opt = {});

struct Construction {
  ConsistencyWitness witness;
  ConstructionCertificate cert;
  Genus3Cover cover;
};

// Witness search, Legendre layout and twist reconciliation; the certificate
// traces equal the requested ones in role order.
Construction construct_from_traces(const ClassCatalog& cat, const std::array<std::int64_t, 3>& t,
                                   const SearchOptions& opt = {});

}  // namespace genus3
