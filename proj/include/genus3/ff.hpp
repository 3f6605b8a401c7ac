#pragma once

// Finite fields F_{p^n} for odd p, polynomials over them, quadratic
// characters and subfield embeddings.

#include <array>
#include <compare>
#include <initializer_list>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace genus3 {

inline constexpr unsigned kMaxExtDegree = 12;

// Largest field order for which qchar is served from a precomputed table.
inline constexpr std::uint64_t kCharTableCap = std::uint64_t{1} << 24;

class MathError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Element of F_{p^n}: residues c[0..n) in the polynomial basis of the owning
// field's modulus, constant term first. Slots >= n stay zero, so comparison
// operators give the lexicographic (c0 first) enumeration order.
struct Fel {
  std::array<std::uint32_t, kMaxExtDegree> c{};

  friend bool operator==(const Fel&, const Fel&) = default;
  friend auto operator<=>(const Fel&, const Fel&) = default;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

bool is_prime(std::uint64_t n);

// Returns the process-wide field for (p, n). The modulus is the
// lexicographically smallest monic irreducible of degree n (constant term
// compared first); for n = 1 it is x.
FieldPtr make_field(std::uint64_t p, unsigned n);

class Field {
 public:
  Field(std::uint32_t p, unsigned n, std::vector<std::uint32_t> modulus);

  std::uint32_t p() const { return p_; }
  unsigned degree() const { return n_; }
  std::uint64_t order() const { return order_; }
  // Monic, n + 1 coefficients, constant term first.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  Fel zero() const { return {}; }
  Fel one() const;
  Fel from_int(std::int64_t v) const;
  // The class of x, i.e. a root of the modulus.
  Fel generator() const;
  Fel from_digits(std::span<const std::uint32_t> digits) const;
  std::vector<std::uint32_t> digits(const Fel& u) const;

  Fel add(const Fel& a, const Fel& b) const;
  Fel sub(const Fel& a, const Fel& b) const;
  Fel neg(const Fel& a) const;
  Fel mul(const Fel& a, const Fel& b) const;
  Fel sqr(const Fel& a) const { return mul(a, a); }
  Fel pow(Fel a, std::uint64_t e) const;
  Fel inv(const Fel& a) const;
  Fel div(const Fel& a, const Fel& b) const { return mul(a, inv(b)); }
  Fel scale(const Fel& a, std::uint32_t k) const;

  bool is_zero(const Fel& a) const { return a == Fel{}; }
  bool is_one(const Fel& a) const { return a == one(); }
  // True when u lies in the prime field (only c0 may be nonzero).
  bool in_prime_field(const Fel& u) const;

  // Position of u in the lexicographic enumeration, c0 most significant.
  std::uint64_t rank(const Fel& u) const;
  Fel element(std::uint64_t rank) const;
  // Advances u to its lexicographic successor; returns false on wrap-around.
  bool next(Fel& u) const;

  // Quadratic character: 0 for zero, +1 for nonzero squares, -1 otherwise.
  int qchar(const Fel& u) const;
  // u^q, the q-power Frobenius.
  Fel frobenius(const Fel& u, std::uint64_t q) const { return pow(u, q); }
  // Lookup table of qchar by rank; built on first use. Null when the field
  // is larger than kCharTableCap.
  const std::vector<std::int8_t>* char_table() const;
  // First non-square in enumeration order.
  Fel first_nonsquare() const;

  std::string to_string(const Fel& u) const;

  // x mod p (Barrett).
  std::uint64_t reduce(std::uint64_t x) const {
    std::uint64_t r = x - static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * barrett_) >> 64) * p_;
    return r >= p_ ? r - p_ : r;
  }

 private:
  void build_char_table() const;

  std::uint32_t p_;
  unsigned n_;
  std::uint64_t order_;
  std::vector<std::uint32_t> modulus_;
  std::array<std::uint32_t, kMaxExtDegree> neg_modulus_{};
  bool wide_;  // accumulate products with per-term reduction
  std::uint64_t barrett_;  // floor(2^64 / p)

  mutable std::once_flag table_once_;
  mutable std::vector<std::int8_t> char_table_;
};

// Polynomial over a field, constant term first, no trailing zeros.
class Poly {
 public:
  explicit Poly(FieldPtr field) : field_(std::move(field)) {}
  Poly(FieldPtr field, std::vector<Fel> coeffs);

  static Poly constant(FieldPtr field, const Fel& c);
  static Poly x(FieldPtr field);
  // Monic product of (x - r) over the given roots.
  static Poly from_roots(FieldPtr field, std::span<const Fel> roots);
  // Coefficients given as small integers (reduced mod p).
  static Poly from_ints(FieldPtr field, std::initializer_list<std::int64_t> coeffs);

  const FieldPtr& field() const { return field_; }
  const std::vector<Fel>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Fel coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Fel{}; }
  const Fel& lead() const;
  bool is_monic() const;

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.field_ == b.field_ && a.c_ == b.c_;
  }

 private:
  void normalize();

  FieldPtr field_;
  std::vector<Fel> c_;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& f, const Fel& k);
Poly poly_monic(const Poly& f);
// Quotient and remainder; throws MathError on division by zero.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
Poly poly_mod(const Poly& a, const Poly& b);
// Monic gcd (zero only if both inputs are zero).
Poly poly_gcd(const Poly& a, const Poly& b);
Poly poly_derivative(const Poly& f);
Poly poly_powmod(const Poly& base, std::uint64_t e, const Poly& m);
Fel poly_eval(const Poly& f, const Fel& x0);
// Square-free factorization: pairs (g, m) with g monic square-free, pairwise
// coprime, f = lead * prod g^m. Correct in characteristic p.
std::vector<std::pair<Poly, unsigned>> squarefree_decomposition(const Poly& f);
// Monic radical of f (product of its distinct irreducible factors).
Poly squarefree_part(const Poly& f);
// Monic product of the irreducible factors of odd multiplicity; f is a
// constant times a square iff this is constant.
Poly odd_part(const Poly& f);
// Roots of f in the target field (which must contain f's field), with
// multiplicity, in enumeration order. Exhaustive scan.
std::vector<Fel> roots_in(const Poly& f, const FieldPtr& target);
bool is_irreducible(const Poly& f);
std::string to_string(const Poly& f, char var = 'x');

// Fixed embedding F_{p^a} -> F_{p^b}, a | b: the generator maps to the first
// root of the source modulus in the target enumeration order.
class Embedding {
 public:
  Embedding(FieldPtr source, FieldPtr target);

  const FieldPtr& source() const { return src_; }
  const FieldPtr& target() const { return dst_; }
  Fel apply(const Fel& u) const;
  // Preimage of v, if v lies in the image.
  bool restrict(const Fel& v, Fel& out) const;

 private:
  FieldPtr src_, dst_;
  std::vector<Fel> gen_powers_;  // images of 1, g, ..., g^(a-1)
  mutable std::once_flag inverse_once_;
  mutable std::vector<std::pair<Fel, Fel>> inverse_;  // sorted (image, preimage)
};

// Cached embedding for (source, target); throws MathError unless the source
// degree divides the target degree and characteristics agree.
const Embedding& embedding(const FieldPtr& source, const FieldPtr& target);
Fel embed(const Fel& u, const FieldPtr& source, const FieldPtr& target);
Poly embed(const Poly& f, const FieldPtr& target);
// Pulls a polynomial with coefficients in the image of `sub` back to `sub`;
// throws MathError if some coefficient does not lie in the subfield.
Poly restrict_poly(const Poly& f, const FieldPtr& sub);

// q = p^r with p an odd prime.
struct PrimePower {
  std::uint32_t p = 0;
  unsigned r = 0;
  std::uint64_t q = 0;
};

// Throws MathError for anything that is not a power of an odd prime.
PrimePower prime_power(std::uint64_t q);
// F_q as F_{p^r}.
FieldPtr base_field(const PrimePower& pq);

// Exact integer helpers.
std::uint64_t ipow(std::uint64_t b, unsigned e);
// Floor square root.
std::uint64_t isqrt(std::uint64_t n);

}  // namespace genus3
