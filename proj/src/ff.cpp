#include "genus3/ff.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace genus3 {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (b != 0 && r > UINT64_MAX / b) throw MathError("integer power overflows 64 bits");
    r *= b;
  }
  return r;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// Field

Field::Field(std::uint32_t p, unsigned n, std::vector<std::uint32_t> modulus)
    : p_(p), n_(n), order_(ipow(p, n)), modulus_(std::move(modulus)),
      wide_(p >= (1u << 26)),
      barrett_(~std::uint64_t{0} / p) {
  for (unsigned j = 0; j < n_; ++j) neg_modulus_[j] = (p_ - modulus_[j] % p_) % p_;
}

Fel Field::one() const {
  Fel r;
  r.c[0] = 1;
  return r;
}

Fel Field::from_int(std::int64_t v) const {
  Fel r;
  auto m = v % static_cast<std::int64_t>(p_);
  if (m < 0) m += p_;
  r.c[0] = static_cast<std::uint32_t>(m);
  return r;
}

Fel Field::generator() const {
  if (n_ == 1) return zero();  // root of the modulus x
  Fel r;
  r.c[1] = 1;
  return r;
}

Fel Field::from_digits(std::span<const std::uint32_t> digits) const {
  if (digits.size() != n_) throw MathError("element needs exactly " + std::to_string(n_) + " digits");
  Fel r;
  for (unsigned i = 0; i < n_; ++i) {
    if (digits[i] >= p_) throw MathError("digit out of range for p = " + std::to_string(p_));
    r.c[i] = digits[i];
  }
  return r;
}

std::vector<std::uint32_t> Field::digits(const Fel& u) const {
  return {u.c.begin(), u.c.begin() + n_};
}

Fel Field::add(const Fel& a, const Fel& b) const {
  Fel r;
  for (unsigned i = 0; i < n_; ++i) {
    std::uint32_t s = a.c[i] + b.c[i];
    r.c[i] = s >= p_ ? s - p_ : s;
  }
  return r;
}

Fel Field::sub(const Fel& a, const Fel& b) const {
  Fel r;
  for (unsigned i = 0; i < n_; ++i) r.c[i] = a.c[i] >= b.c[i] ? a.c[i] - b.c[i] : a.c[i] + p_ - b.c[i];
  return r;
}

Fel Field::neg(const Fel& a) const {
  Fel r;
  for (unsigned i = 0; i < n_; ++i) r.c[i] = a.c[i] == 0 ? 0 : p_ - a.c[i];
  return r;
}

Fel Field::scale(const Fel& a, std::uint32_t k) const {
  Fel r;
  for (unsigned i = 0; i < n_; ++i) r.c[i] = static_cast<std::uint32_t>(reduce(std::uint64_t{a.c[i]} * k));
  return r;
}

namespace {

// Schoolbook product and reduction with the degree fixed at compile time.
// p < 2^26: every slot stays below 2N p^2 < 2^57 until it is reduced.
template <unsigned N, class Reduce>
Fel mul_fixed(const Fel& a, const Fel& b, const std::array<std::uint32_t, kMaxExtDegree>& neg_mod, Reduce reduce) {
  std::array<std::uint64_t, 2 * N - 1> r{};
  for (unsigned i = 0; i < N; ++i)
    for (unsigned j = 0; j < N; ++j) r[i + j] += std::uint64_t{a.c[i]} * b.c[j];
  for (unsigned i = 2 * N - 2; i >= N; --i) {
    const std::uint64_t t = reduce(r[i]);
    for (unsigned j = 0; j < N; ++j) r[i - N + j] += t * neg_mod[j];
  }
  Fel out;
  for (unsigned i = 0; i < N; ++i) out.c[i] = static_cast<std::uint32_t>(reduce(r[i]));
  return out;
}

}  // namespace

Fel Field::mul(const Fel& a, const Fel& b) const {
  Fel out;
  if (n_ == 1) {
    out.c[0] = static_cast<std::uint32_t>(reduce(std::uint64_t{a.c[0]} * b.c[0]));
    return out;
  }
  if (!wide_) {
    auto red = [this](std::uint64_t x) { return reduce(x); };
    switch (n_) {
      case 2: return mul_fixed<2>(a, b, neg_modulus_, red);
      case 3: return mul_fixed<3>(a, b, neg_modulus_, red);
      case 4: return mul_fixed<4>(a, b, neg_modulus_, red);
      case 5: return mul_fixed<5>(a, b, neg_modulus_, red);
      case 6: return mul_fixed<6>(a, b, neg_modulus_, red);
      case 7: return mul_fixed<7>(a, b, neg_modulus_, red);
      case 8: return mul_fixed<8>(a, b, neg_modulus_, red);
      case 9: return mul_fixed<9>(a, b, neg_modulus_, red);
      case 10: return mul_fixed<10>(a, b, neg_modulus_, red);
      case 11: return mul_fixed<11>(a, b, neg_modulus_, red);
      case 12: return mul_fixed<12>(a, b, neg_modulus_, red);
      default: break;
    }
  }
  std::array<std::uint64_t, 2 * kMaxExtDegree - 1> r{};
  for (unsigned i = 0; i < n_; ++i)
    for (unsigned j = 0; j < n_; ++j) r[i + j] = (r[i + j] + std::uint64_t{a.c[i]} * b.c[j] % p_) % p_;
  for (unsigned i = 2 * n_ - 2; i >= n_; --i) {
    const std::uint64_t t = r[i];
    if (t == 0) continue;
    for (unsigned j = 0; j < n_; ++j) r[i - n_ + j] = (r[i - n_ + j] + t * neg_modulus_[j]) % p_;
  }
  for (unsigned i = 0; i < n_; ++i) out.c[i] = static_cast<std::uint32_t>(r[i]);
  return out;
}

Fel Field::pow(Fel a, std::uint64_t e) const {
  Fel r = one();
  while (e) {
    if (e & 1) r = mul(r, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return r;
}

Fel Field::inv(const Fel& a) const {
  if (is_zero(a)) throw MathError("inverse of zero");
  return pow(a, order_ - 2);
}

bool Field::in_prime_field(const Fel& u) const {
  for (unsigned i = 1; i < n_; ++i)
    if (u.c[i] != 0) return false;
  return true;
}

std::uint64_t Field::rank(const Fel& u) const {
  std::uint64_t r = 0;
  for (unsigned i = 0; i < n_; ++i) r = r * p_ + u.c[i];
  return r;
}

Fel Field::element(std::uint64_t rank) const {
  if (rank >= order_) throw MathError("element rank out of range");
  Fel u;
  for (unsigned i = n_; i-- > 0;) {
    u.c[i] = static_cast<std::uint32_t>(rank % p_);
    rank /= p_;
  }
  return u;
}

bool Field::next(Fel& u) const {
  for (unsigned i = n_; i-- > 0;) {
    if (++u.c[i] < p_) return true;
    u.c[i] = 0;
  }
  return false;
}

void Field::build_char_table() const {
  char_table_.assign(order_, -1);
  char_table_[0] = 0;
  Fel v = zero();
  while (next(v)) char_table_[rank(mul(v, v))] = 1;
}

const std::vector<std::int8_t>* Field::char_table() const {
  if (order_ > kCharTableCap) return nullptr;
  std::call_once(table_once_, [this] { build_char_table(); });
  return &char_table_;
}

int Field::qchar(const Fel& u) const {
  if (const auto* t = char_table()) return (*t)[rank(u)];
  if (is_zero(u)) return 0;
  return is_one(pow(u, (order_ - 1) / 2)) ? 1 : -1;
}

Fel Field::first_nonsquare() const {
  Fel u = zero();
  while (next(u))
    if (qchar(u) == -1) return u;
  throw MathError("field has no non-square");
}

std::string Field::to_string(const Fel& u) const {
  if (n_ == 1) return std::to_string(u.c[0]);
  std::ostringstream os;
  os << '(';
  for (unsigned i = 0; i < n_; ++i) os << (i ? "," : "") << u.c[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// Field registry

namespace {

std::vector<std::uint32_t> find_modulus(std::uint32_t p, unsigned n) {
  if (n == 1) return {0, 1};
  const FieldPtr fp = make_field(p, 1);
  const std::uint64_t count = ipow(p, n);
  Fel digits;  // c0..c_{n-1} of the candidate, lex order with c0 first
  for (std::uint64_t r = 0; r < count; ++r) {
    std::uint64_t v = r;
    for (unsigned i = n; i-- > 0;) {
      digits.c[i] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    if (digits.c[0] == 0) continue;
    std::vector<Fel> coeffs(n + 1);
    for (unsigned i = 0; i < n; ++i) coeffs[i] = fp->from_int(digits.c[i]);
    coeffs[n] = fp->one();
    if (is_irreducible(Poly(fp, coeffs))) {
      std::vector<std::uint32_t> m(digits.c.begin(), digits.c.begin() + n);
      m.push_back(1);
      return m;
    }
  }
  throw MathError("no irreducible polynomial found");  // unreachable
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<std::uint64_t, unsigned>, FieldPtr>& field_registry() {
  static std::map<std::pair<std::uint64_t, unsigned>, FieldPtr> r;
  return r;
}

}  // namespace

FieldPtr make_field(std::uint64_t p, unsigned n) {
  if (n < 1 || n > kMaxExtDegree)
    throw MathError("extension degree " + std::to_string(n) + " outside 1.." + std::to_string(kMaxExtDegree));
  if (!is_prime(p)) throw MathError(std::to_string(p) + " is not prime");
  if (p == 2) throw MathError("characteristic 2 is not supported");
  if (p > UINT32_MAX) throw MathError("characteristic too large");
  // ipow throws past 64 bits; the order must also leave room for exponent arithmetic.
  if (ipow(p, n) > (std::uint64_t{1} << 62)) throw MathError("field order too large");
  const auto key = std::make_pair(p, n);
  {
    std::lock_guard lock(registry_mutex());
    auto it = field_registry().find(key);
    if (it != field_registry().end()) return it->second;
  }
  auto field = std::make_shared<const Field>(static_cast<std::uint32_t>(p), n,
                                             find_modulus(static_cast<std::uint32_t>(p), n));
  std::lock_guard lock(registry_mutex());
  auto [it, inserted] = field_registry().emplace(key, field);
  return it->second;
}

PrimePower prime_power(std::uint64_t q) {
  if (q < 3) throw MathError(std::to_string(q) + " is not an odd prime power");
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = q;
  if (p == 2) throw MathError("q = " + std::to_string(q) + " has characteristic 2, which is not supported");
  unsigned r = 0;
  std::uint64_t m = q;
  while (m % p == 0) {
    m /= p;
    ++r;
  }
  if (m != 1) throw MathError(std::to_string(q) + " is not a prime power");
  return {static_cast<std::uint32_t>(p), r, q};
}

FieldPtr base_field(const PrimePower& pq) { return make_field(pq.p, pq.r); }

// ---------------------------------------------------------------------------
// Embeddings

Embedding::Embedding(FieldPtr source, FieldPtr target) : src_(std::move(source)), dst_(std::move(target)) {
  if (src_->p() != dst_->p() || dst_->degree() % src_->degree() != 0)
    throw MathError("no embedding F_" + std::to_string(src_->order()) + " -> F_" + std::to_string(dst_->order()));
  const unsigned a = src_->degree();
  gen_powers_.push_back(dst_->one());
  if (a == 1) return;
  std::vector<Fel> mod(a + 1);
  for (unsigned i = 0; i <= a; ++i) mod[i] = dst_->from_int(src_->modulus()[i]);
  const Poly m(dst_, mod);
  Fel g = dst_->zero();
  bool found = false;
  do {
    if (dst_->is_zero(poly_eval(m, g))) {
      found = true;
      break;
    }
  } while (dst_->next(g));
  if (!found) throw MathError("source modulus has no root in target field");
  for (unsigned i = 1; i < a; ++i) gen_powers_.push_back(dst_->mul(gen_powers_.back(), g));
}

Fel Embedding::apply(const Fel& u) const {
  if (src_ == dst_) return u;
  Fel r;
  for (unsigned i = 0; i < src_->degree(); ++i)
    if (u.c[i]) r = dst_->add(r, dst_->scale(gen_powers_[i], u.c[i]));
  return r;
}

bool Embedding::restrict(const Fel& v, Fel& out) const {
  if (src_ == dst_) {
    out = v;
    return true;
  }
  if (src_->degree() == 1) {
    if (!dst_->in_prime_field(v)) return false;
    out = src_->from_int(v.c[0]);
    return true;
  }
  std::call_once(inverse_once_, [this] {
    if (src_->order() > kCharTableCap) throw MathError("subfield too large to invert embedding");
    Fel u = src_->zero();
    do {
      inverse_.emplace_back(apply(u), u);
    } while (src_->next(u));
    std::sort(inverse_.begin(), inverse_.end());
  });
  auto it = std::lower_bound(inverse_.begin(), inverse_.end(), std::make_pair(v, Fel{}),
                             [](const auto& x, const auto& y) { return x.first < y.first; });
  if (it == inverse_.end() || it->first != v) return false;
  out = it->second;
  return true;
}

const Embedding& embedding(const FieldPtr& source, const FieldPtr& target) {
  static std::mutex mu;
  static std::map<std::tuple<std::uint32_t, unsigned, unsigned>, std::unique_ptr<Embedding>> cache;
  const auto key = std::make_tuple(source->p(), source->degree(), target->degree());
  std::lock_guard lock(mu);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Embedding>(source, target)).first;
  return *it->second;
}

Fel embed(const Fel& u, const FieldPtr& source, const FieldPtr& target) {
  if (source == target) return u;
  return embedding(source, target).apply(u);
}

Poly embed(const Poly& f, const FieldPtr& target) {
  if (f.field() == target) return f;
  const Embedding& e = embedding(f.field(), target);
  std::vector<Fel> c;
  c.reserve(f.coeffs().size());
  for (const Fel& a : f.coeffs()) c.push_back(e.apply(a));
  return Poly(target, std::move(c));
}

Poly restrict_poly(const Poly& f, const FieldPtr& sub) {
  if (f.field() == sub) return f;
  const Embedding& e = embedding(sub, f.field());
  std::vector<Fel> c(f.coeffs().size());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!e.restrict(f.coeffs()[i], c[i]))
      throw MathError("polynomial " + to_string(f) + " is not defined over F_" + std::to_string(sub->order()));
  return Poly(sub, std::move(c));
}

}  // namespace genus3
