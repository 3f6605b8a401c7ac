#pragma once

// Point counts of the genus-3 cover by splitting of places in its
// multi-quadratic function field, and the L-polynomial they determine.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genus3/construct.hpp"

namespace genus3 {

// P(T) = sum c[k] T^k with c[0] = 1.
struct LPoly {
  std::vector<std::int64_t> c{1};

  int degree() const { return static_cast<int>(c.size()) - 1; }
  friend bool operator==(const LPoly&, const LPoly&) = default;
};

// c[6 - i] = q^(3 - i) c[i] for i = 0..3, degree exactly 6.
bool functional_equation_holds(const LPoly& P, std::uint64_t q);
// T^deg P(1/T), constant term first.
std::vector<std::int64_t> reversal(const LPoly& P);
std::string to_string(const LPoly& P, char var = 'T');

// Degree-one places of the cover above x0, where x0 is a point of P^1 over
// the field `over` (F_{q^k}, containing the cover's base field).
int local_splitting(const Genus3Cover& cover, const ProjPoint& x0, const FieldPtr& over);

// N_k, the number of F_{q^k}-points on the smooth model. Throws CapExceeded.
std::int64_t count_cover(const Genus3Cover& cover, unsigned k);

std::int64_t expected_count(std::uint64_t q, const std::array<std::int64_t, 3>& t, unsigned k);
// prod (T^2 + t_i T + q), constant term first.
std::vector<std::int64_t> claimed_char_poly(std::uint64_t q, const std::array<std::int64_t, 3>& t);
// prod (1 + t_i T + q T^2).
LPoly claimed_lpoly(std::uint64_t q, const std::array<std::int64_t, 3>& t);

// From N_1..N_6 via Newton's identities. Throws MathError on an inexact
// division or a functional-equation failure.
LPoly reconstruct_lpoly(std::span<const std::int64_t> counts, std::uint64_t q);

enum class Verdict { kMatch, kCountMismatch, kPolyMismatch };
std::string_view verdict_name(Verdict v);

struct ZetaReport {
  std::uint64_t q = 0;
  std::array<std::int64_t, 3> traces{};
  unsigned max_k = 0;
  std::vector<std::int64_t> counts;    // N_1..N_K
  std::vector<std::int64_t> expected;  // E_1..E_K
  std::optional<LPoly> reconstructed;  // K = 6 only
  LPoly claimed;
  Verdict verdict = Verdict::kMatch;
  unsigned mismatch_k = 0;  // first k with N_k != E_k
  std::string detail;
};

// max(3, smallest K with q^K >= 1e5), at most 6 and within the counting cap.
unsigned default_max_k(std::uint64_t q);

// traces are in the cover's role order (f_1, f_2, f_3).
ZetaReport verify(const Genus3Cover& cover, const std::array<std::int64_t, 3>& t, unsigned max_k);

}  // namespace genus3
