#include "genus3/ecurve.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "genus3/parallel.hpp"

namespace genus3 {

namespace {

constexpr std::uint64_t kEnumerationCap = 10'000;

// Sum of qchar(g(x)) over all x in the field of g.
std::int64_t character_sum(const Poly& g) {
  const Field& F = *g.field();
  const auto* table = F.char_table();
  return parallel_sum(F.order(), [&](std::uint64_t begin, std::uint64_t end) {
    std::int64_t s = 0;
    Fel x = F.element(begin);
    for (std::uint64_t i = begin; i < end; ++i, F.next(x)) {
      const Fel v = poly_eval(g, x);
      s += table ? (*table)[F.rank(v)] : F.qchar(v);
    }
    return s;
  });
}

}  // namespace

EllipticModel::EllipticModel(Poly f) : f_(std::move(f)) {
  if (f_.degree() != 3 && f_.degree() != 4)
    throw MathError("genus-1 model needs a cubic or quartic, got degree " + std::to_string(f_.degree()));
  if (poly_gcd(f_, poly_derivative(f_)).degree() > 0) throw MathError("model polynomial is not square-free");
}

FieldPtr counting_field(const FieldPtr& base, unsigned k) {
  if (k < 1 || k > 6) throw MathError("extension degree k must lie in 1..6");
  const std::uint64_t Q = ipow(base->order(), k);
  if (Q > kCountCap) throw CapExceeded("F_{q^k} with q^k = " + std::to_string(Q) + " exceeds the counting cap");
  return make_field(base->p(), base->degree() * k);
}

std::int64_t count_points(const EllipticModel& m, unsigned k) {
  const FieldPtr ext = counting_field(m.base(), k);
  const Poly g = embed(m.f(), ext);
  const auto Q = static_cast<std::int64_t>(ext->order());
  std::int64_t at_infinity = 1;
  if (m.degree() == 4) at_infinity = 1 + ext->qchar(g.lead());
  return Q + character_sum(g) + at_infinity;
}

std::int64_t trace(const EllipticModel& m) {
  return count_points(m, 1) - static_cast<std::int64_t>(m.q()) - 1;
}

int two_torsion_rational(const EllipticModel& m) {
  if (m.degree() != 3) throw MathError("rational 2-torsion is only counted on cubic models");
  return 1 + static_cast<int>(roots_in(m.f(), m.base()).size());
}

Fel j_invariant(const EllipticModel& m) {
  if (m.degree() != 3) throw MathError("Weierstrass j-invariant needs a cubic model");
  const Field& F = *m.base();
  // Twisting by the leading coefficient does not change j.
  const Poly f = poly_monic(m.f());
  const Fel a2 = f.coeff(2), a4 = f.coeff(1), a6 = f.coeff(0);
  auto k = [&](std::int64_t v) { return F.from_int(v); };
  const Fel b2 = F.mul(k(4), a2);
  const Fel b4 = F.mul(k(2), a4);
  const Fel b6 = F.mul(k(4), a6);
  const Fel b8 = F.sub(F.mul(k(4), F.mul(a2, a6)), F.sqr(a4));
  const Fel c4 = F.sub(F.sqr(b2), F.mul(k(24), b4));
  Fel disc = F.neg(F.mul(F.sqr(b2), b8));
  disc = F.sub(disc, F.mul(k(8), F.mul(b4, F.sqr(b4))));
  disc = F.sub(disc, F.mul(k(27), F.sqr(b6)));
  disc = F.add(disc, F.mul(k(9), F.mul(b2, F.mul(b4, b6))));
  return F.div(F.mul(c4, F.sqr(c4)), disc);
}

EllipticModel quadratic_twist(const EllipticModel& m, const Fel& d) {
  return EllipticModel(poly_scale(m.f(), d));
}

EllipticModel quadratic_twist(const EllipticModel& m) {
  return quadratic_twist(m, m.base()->first_nonsquare());
}

std::int64_t trace_power_sum(std::int64_t t, std::uint64_t q, unsigned k) {
  __int128 prev = 2, cur = -t;  // s_0, s_1
  if (k == 0) return 2;
  for (unsigned i = 2; i <= k; ++i) {
    const __int128 next = -static_cast<__int128>(t) * cur - static_cast<__int128>(q) * prev;
    prev = cur;
    cur = next;
    if (cur > INT64_MAX || cur < INT64_MIN) throw MathError("trace power sum overflows 64 bits");
  }
  return static_cast<std::int64_t>(cur);
}

bool hasse_bound_ok(std::uint64_t q, std::int64_t t) {
  const auto t2 = static_cast<unsigned __int128>(static_cast<__int128>(t) * t);
  return t2 <= static_cast<unsigned __int128>(q) * 4;
}

std::string_view clause_label(WaterhouseClause c) {
  switch (c) {
    case WaterhouseClause::kCoprime: return "i";
    case WaterhouseClause::kTwiceSqrtQ: return "ii";
    case WaterhouseClause::kSqrtQ: return "iii";
    case WaterhouseClause::kSqrtPQ: return "iv";
    case WaterhouseClause::kZeroOddR: return "v";
    case WaterhouseClause::kZeroEvenR: return "vi";
  }
  return "?";
}

std::optional<WaterhouseClause> waterhouse_clause(std::uint64_t q, std::int64_t t) {
  const PrimePower pq = prime_power(q);
  if (!hasse_bound_ok(q, t)) return std::nullopt;
  const std::uint64_t p = pq.p;
  const std::uint64_t at = t < 0 ? static_cast<std::uint64_t>(-t) : static_cast<std::uint64_t>(t);
  const bool r_even = pq.r % 2 == 0;
  auto is_root_of = [](std::uint64_t v, std::uint64_t n) { return v * v == n; };
  if (at % p != 0) return WaterhouseClause::kCoprime;
  if (r_even && at == 2 * isqrt(q) && is_root_of(isqrt(q), q)) return WaterhouseClause::kTwiceSqrtQ;
  if (r_even && p % 3 != 1 && is_root_of(at, q)) return WaterhouseClause::kSqrtQ;
  if (!r_even && (p == 2 || p == 3) && is_root_of(at, p * q)) return WaterhouseClause::kSqrtPQ;
  if (!r_even && t == 0) return WaterhouseClause::kZeroOddR;
  if (r_even && p % 4 != 1 && t == 0) return WaterhouseClause::kZeroEvenR;
  return std::nullopt;
}

bool waterhouse_admissible(std::uint64_t q, std::int64_t t) { return waterhouse_clause(q, t).has_value(); }

std::vector<std::int64_t> admissible_traces(std::uint64_t q) {
  std::vector<std::int64_t> out;
  const auto bound = static_cast<std::int64_t>(isqrt(4 * q));
  for (std::int64_t t = -bound; t <= bound; ++t)
    if (waterhouse_admissible(q, t)) out.push_back(t);
  return out;
}

std::vector<CurveClass> enumerate_classes(const FieldPtr& base) {
  const Field& F = *base;
  const std::uint64_t q = F.order();
  if (q > kEnumerationCap) throw CapExceeded("class enumeration is capped at q <= 10^4");
  const auto& table = *F.char_table();
  auto k = [&](std::int64_t v) { return F.from_int(v); };

  std::vector<Fel> xs;
  Fel x = F.zero();
  do xs.push_back(x);
  while (F.next(x));

  struct Found {
    Fel j;
    int two_torsion;
    std::array<std::uint64_t, 3> lex;  // ranks of (c0, c1, c2)
    Fel a, b, c;
  };
  constexpr std::array<std::uint64_t, 3> kTwistLex{~0ull, ~0ull, ~0ull};
  // key: (t, rank(j), two_torsion)
  std::map<std::tuple<std::int64_t, std::uint64_t, int>, Found> found;

  std::vector<Fel> partial(q);
  for (const Fel& a : xs) {
    for (const Fel& b : xs) {
      for (std::size_t i = 0; i < q; ++i) {
        const Fel& u = xs[i];
        partial[i] = F.mul(u, F.add(F.mul(u, F.add(u, a)), b));  // u^3 + a u^2 + b u
      }
      const Fel ab = F.mul(a, b);
      const Fel a2b2 = F.sqr(ab);
      const Fel b3 = F.mul(b, F.sqr(b));
      const Fel a3 = F.mul(a, F.sqr(a));
      for (const Fel& c : xs) {
        // discriminant a^2 b^2 - 4 b^3 - 4 a^3 c - 27 c^2 + 18 a b c
        Fel disc = F.sub(a2b2, F.mul(k(4), b3));
        disc = F.sub(disc, F.mul(k(4), F.mul(a3, c)));
        disc = F.sub(disc, F.mul(k(27), F.sqr(c)));
        disc = F.add(disc, F.mul(k(18), F.mul(ab, c)));
        if (F.is_zero(disc)) continue;
        std::int64_t s = 0;
        int roots = 0;
        for (std::size_t i = 0; i < q; ++i) {
          const int chi = table[F.rank(F.add(partial[i], c))];
          s += chi;
          roots += chi == 0;
        }
        const EllipticModel m(Poly(base, {c, b, a, F.one()}));
        const Fel j = j_invariant(m);
        const std::array<std::uint64_t, 3> lex{F.rank(c), F.rank(b), F.rank(a)};
        // The monic cubic has trace s; its twist by a non-square has trace -s.
        // Twist entries only fill keys no monic cubic has reached yet.
        auto consider = [&](std::int64_t t, bool twisted) {
          const auto key = std::make_tuple(t, F.rank(j), 1 + roots);
          const Found entry{j, 1 + roots, twisted ? kTwistLex : lex, a, b, c};
          auto it = found.find(key);
          if (it == found.end())
            found.emplace(key, entry);
          else if (entry.lex < it->second.lex)
            it->second = entry;
        };
        consider(s, false);
        if (s != 0) consider(-s, true);
      }
    }
  }

  const Fel d = F.first_nonsquare();
  std::vector<CurveClass> out;
  for (const auto& [key, v] : found) {
    EllipticModel rep(Poly(base, {v.c, v.b, v.a, F.one()}));
    if (v.lex == kTwistLex) rep = quadratic_twist(rep, d);
    out.push_back(CurveClass{v.j, std::get<0>(key), v.two_torsion, rep});
  }
  return out;
}

}  // namespace genus3
