#include <algorithm>
#include <map>
#include <sstream>

#include "genus3/ff.hpp"

namespace genus3 {

namespace {

void require_same_field(const Poly& a, const Poly& b) {
  if (a.field() != b.field()) throw MathError("polynomials over different fields");
}

// p-th root of a polynomial whose exponents are all multiples of p.
Poly pth_root(const Poly& f) {
  const Field& F = *f.field();
  const std::uint64_t root_exp = ipow(F.p(), F.degree() - 1);  // a -> a^(p^(n-1)) inverts Frobenius
  std::vector<Fel> c;
  for (std::size_t i = 0; i < f.coeffs().size(); i += F.p()) c.push_back(F.pow(f.coeffs()[i], root_exp));
  return Poly(f.field(), std::move(c));
}

void sff(const Poly& f, unsigned mult, std::vector<std::pair<Poly, unsigned>>& out) {
  const Field& F = *f.field();
  const Poly one = Poly::constant(f.field(), F.one());
  const Poly g = poly_derivative(f);
  if (g.is_zero()) {
    if (f.degree() > 0) sff(pth_root(f), mult * F.p(), out);
    return;
  }
  Poly c = poly_gcd(f, g);
  Poly w = poly_divmod(f, c).first;
  unsigned i = 1;
  while (w.degree() > 0) {
    Poly y = poly_gcd(w, c);
    Poly fac = poly_divmod(w, y).first;
    if (fac.degree() > 0) out.emplace_back(poly_monic(fac), i * mult);
    ++i;
    w = y;
    c = poly_divmod(c, y).first;
  }
  if (c.degree() > 0) sff(pth_root(poly_monic(c)), mult * F.p(), out);
}

}  // namespace

Poly::Poly(FieldPtr field, std::vector<Fel> coeffs) : field_(std::move(field)), c_(std::move(coeffs)) {
  normalize();
}

void Poly::normalize() {
  while (!c_.empty() && field_->is_zero(c_.back())) c_.pop_back();
}

Poly Poly::constant(FieldPtr field, const Fel& c) { return Poly(std::move(field), std::vector<Fel>{c}); }

Poly Poly::x(FieldPtr field) {
  const Fel one = field->one();
  return Poly(std::move(field), std::vector<Fel>{Fel{}, one});
}

Poly Poly::from_roots(FieldPtr field, std::span<const Fel> roots) {
  Poly r = constant(field, field->one());
  for (const Fel& a : roots) r = r * Poly(field, {field->neg(a), field->one()});
  return r;
}

Poly Poly::from_ints(FieldPtr field, std::initializer_list<std::int64_t> coeffs) {
  std::vector<Fel> c;
  for (auto v : coeffs) c.push_back(field->from_int(v));
  return Poly(std::move(field), std::move(c));
}

const Fel& Poly::lead() const {
  if (c_.empty()) throw MathError("zero polynomial has no leading coefficient");
  return c_.back();
}

bool Poly::is_monic() const { return !c_.empty() && field_->is_one(c_.back()); }

Poly operator+(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const Field& F = *a.field();
  std::vector<Fel> c(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.add(a.coeff(i), b.coeff(i));
  return Poly(a.field(), std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const Field& F = *a.field();
  std::vector<Fel> c(std::max(a.coeffs().size(), b.coeffs().size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.sub(a.coeff(i), b.coeff(i));
  return Poly(a.field(), std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (a.is_zero() || b.is_zero()) return Poly(a.field());
  const Field& F = *a.field();
  std::vector<Fel> c(a.coeffs().size() + b.coeffs().size() - 1);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j)
      c[i + j] = F.add(c[i + j], F.mul(a.coeffs()[i], b.coeffs()[j]));
  return Poly(a.field(), std::move(c));
}

Poly poly_scale(const Poly& f, const Fel& k) {
  std::vector<Fel> c = f.coeffs();
  for (Fel& a : c) a = f.field()->mul(a, k);
  return Poly(f.field(), std::move(c));
}

Poly poly_monic(const Poly& f) {
  if (f.is_zero()) return f;
  return poly_scale(f, f.field()->inv(f.lead()));
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  if (b.is_zero()) throw MathError("polynomial division by zero");
  const Field& F = *a.field();
  if (a.degree() < b.degree()) return {Poly(a.field()), a};
  std::vector<Fel> r = a.coeffs();
  std::vector<Fel> q(a.coeffs().size() - b.coeffs().size() + 1);
  const Fel lead_inv = F.inv(b.lead());
  const std::size_t db = b.coeffs().size() - 1;
  for (std::size_t i = q.size(); i-- > 0;) {
    const Fel t = F.mul(r[i + db], lead_inv);
    q[i] = t;
    if (F.is_zero(t)) continue;
    for (std::size_t j = 0; j <= db; ++j) r[i + j] = F.sub(r[i + j], F.mul(t, b.coeffs()[j]));
  }
  r.resize(db);
  return {Poly(a.field(), std::move(q)), Poly(a.field(), std::move(r))};
}

Poly poly_mod(const Poly& a, const Poly& b) { return poly_divmod(a, b).second; }

Poly poly_gcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = poly_mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return poly_monic(x);
}

Poly poly_derivative(const Poly& f) {
  const Field& F = *f.field();
  std::vector<Fel> c;
  for (std::size_t i = 1; i < f.coeffs().size(); ++i)
    c.push_back(F.scale(f.coeffs()[i], static_cast<std::uint32_t>(i % F.p())));
  return Poly(f.field(), std::move(c));
}

Poly poly_powmod(const Poly& base, std::uint64_t e, const Poly& m) {
  Poly r = poly_mod(Poly::constant(base.field(), base.field()->one()), m);
  Poly b = poly_mod(base, m);
  while (e) {
    if (e & 1) r = poly_mod(r * b, m);
    e >>= 1;
    if (e) b = poly_mod(b * b, m);
  }
  return r;
}

Fel poly_eval(const Poly& f, const Fel& x0) {
  const Field& F = *f.field();
  Fel r;
  for (std::size_t i = f.coeffs().size(); i-- > 0;) r = F.add(F.mul(r, x0), f.coeffs()[i]);
  return r;
}

std::vector<std::pair<Poly, unsigned>> squarefree_decomposition(const Poly& f) {
  if (f.is_zero()) throw MathError("square-free decomposition of the zero polynomial");
  std::vector<std::pair<Poly, unsigned>> raw;
  sff(poly_monic(f), 1, raw);
  // Merge factors reported with equal multiplicity.
  std::map<unsigned, Poly> merged;
  for (auto& [g, m] : raw) {
    auto it = merged.find(m);
    if (it == merged.end())
      merged.emplace(m, g);
    else
      it->second = it->second * g;
  }
  std::vector<std::pair<Poly, unsigned>> out;
  for (auto& [m, g] : merged) out.emplace_back(g, m);
  return out;
}

Poly squarefree_part(const Poly& f) {
  Poly r = Poly::constant(f.field(), f.field()->one());
  for (const auto& [g, m] : squarefree_decomposition(f)) r = r * g;
  return r;
}

Poly odd_part(const Poly& f) {
  Poly r = Poly::constant(f.field(), f.field()->one());
  for (const auto& [g, m] : squarefree_decomposition(f))
    if (m % 2 == 1) r = r * g;
  return r;
}

std::vector<Fel> roots_in(const Poly& f, const FieldPtr& target) {
  if (f.is_zero()) throw MathError("roots of the zero polynomial");
  Poly g = embed(f, target);
  const Field& F = *target;
  std::vector<Fel> roots;
  Fel x = F.zero();
  do {
    if (!F.is_zero(poly_eval(g, x))) continue;
    const Poly lin(target, {F.neg(x), F.one()});
    Poly h = g;
    while (h.degree() > 0) {
      auto [quo, rem] = poly_divmod(h, lin);
      if (!rem.is_zero()) break;
      roots.push_back(x);
      h = std::move(quo);
    }
  } while (F.next(x));
  return roots;
}

bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) return false;
  if (f.degree() == 1) return true;
  const unsigned n = static_cast<unsigned>(f.degree());
  const std::uint64_t Q = f.field()->order();
  const Poly m = poly_monic(f);
  const Poly x = Poly::x(f.field());
  // h_d = x^(Q^d) mod m
  std::vector<Poly> h;
  h.push_back(poly_mod(x, m));
  for (unsigned d = 1; d <= n; ++d) h.push_back(poly_powmod(h.back(), Q, m));
  if (!(h[n] == poly_mod(x, m))) return false;
  for (unsigned d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    if (poly_gcd(h[d] - x, m).degree() > 0) return false;
  }
  return true;
}

std::string to_string(const Poly& f, char var) {
  if (f.is_zero()) return "0";
  const Field& F = *f.field();
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = f.coeffs().size(); i-- > 0;) {
    const Fel& a = f.coeffs()[i];
    if (F.is_zero(a)) continue;
    if (!first) os << " + ";
    first = false;
    const bool unit = F.is_one(a);
    if (!unit || i == 0) os << F.to_string(a);
    if (i > 0) os << (unit ? "" : "*") << var;
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

}  // namespace genus3
