#pragma once

// Reference arithmetic for the tests. Deliberately naive and independent of
// the library: F_p with int64 residues, F_{p^2} as a + b*w with w^2 = n for the
// smallest non-residue n, and brute-force counts on hyperelliptic curves.

#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

inline i64 md(i64 a, i64 p) { return ((a % p) + p) % p; }

inline std::set<i64> squares_mod(i64 p) {
  std::set<i64> s;
  for (i64 x = 1; x < p; ++x) s.insert(x * x % p);
  return s;
}

inline int chi_p(i64 a, i64 p) {
  a = md(a, p);
  if (a == 0) return 0;
  return squares_mod(p).count(a) ? 1 : -1;
}

inline i64 inv_p(i64 a, i64 p) {
  a = md(a, p);
  for (i64 x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  return 0;
}

// Element a + b w of F_p or F_{p^2}; b = 0 in the prime field.
struct G {
  i64 a = 0, b = 0;
  friend bool operator==(const G&, const G&) = default;
  friend auto operator<=>(const G&, const G&) = default;
};

// F_p (k = 1) or F_{p^2} (k = 2).
struct Fq {
  i64 p;
  int k;
  i64 n = 0;  // non-residue defining w^2

  Fq(i64 p_, int k_) : p(p_), k(k_) {
    for (i64 c = 2; c < p; ++c)
      if (chi_p(c, p) == -1) {
        n = c;
        break;
      }
  }

  i64 order() const { return k == 1 ? p : p * p; }
  G elem(i64 idx) const { return k == 1 ? G{idx, 0} : G{idx % p, idx / p}; }
  G c(i64 v) const { return {md(v, p), 0}; }
  G add(G x, G y) const { return {md(x.a + y.a, p), md(x.b + y.b, p)}; }
  G sub(G x, G y) const { return {md(x.a - y.a, p), md(x.b - y.b, p)}; }
  G mul(G x, G y) const { return {md(x.a * y.a + n * md(x.b * y.b, p), p), md(x.a * y.b + x.b * y.a, p)}; }
  bool zero(G x) const { return x.a == 0 && x.b == 0; }

  std::set<G> squares() const {
    std::set<G> s;
    for (i64 i = 1; i < order(); ++i) {
      G x = elem(i);
      s.insert(mul(x, x));
    }
    return s;
  }
};

// Polynomial over F_p with integer coefficients, constant first.
using IPoly = std::vector<i64>;

inline IPoly ipoly_mul(const IPoly& f, const IPoly& g, i64 p) {
  IPoly h(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] = md(h[i + j] + f[i] * g[j], p);
  return h;
}

inline IPoly ipoly_from_roots(const std::vector<i64>& roots, i64 p) {
  IPoly f{1};
  for (i64 r : roots) f = ipoly_mul(f, {md(-r, p), 1}, p);
  return f;
}

inline int ipoly_deg(const IPoly& f) {
  int d = static_cast<int>(f.size()) - 1;
  while (d >= 0 && f[d] == 0) --d;
  return d;
}

inline G eval(const Fq& F, const IPoly& f, G x) {
  G acc{};
  for (std::size_t i = f.size(); i-- > 0;) acc = F.add(F.mul(acc, x), F.c(f[i]));
  return acc;
}

// Points on the smooth projective model of y^2 = g(x), g with F_p coefficients,
// counted over F_p or F_{p^2}. Repeated roots are handled by dividing out the
// local multiplicity: for even multiplicity m the class of (g / (x - x0)^m)(x0)
// decides, for odd m there is one point.
inline i64 hyperelliptic_count(const Fq& F, IPoly g) {
  const auto sq = F.squares();
  auto chi = [&](G v) { return F.zero(v) ? 0 : (sq.count(v) ? 1 : -1); };
  const int d = ipoly_deg(g);
  g.resize(d + 1);
  i64 total = 0;
  for (i64 i = 0; i < F.order(); ++i) {
    const G x0 = F.elem(i);
    // synthetic division by (x - x0) while it divides
    std::vector<G> cur;
    for (i64 c : g) cur.push_back(F.c(c));
    int m = 0;
    while (true) {
      std::vector<G> q(cur.size() - 1);
      G r = cur.back();
      for (std::size_t j = cur.size() - 1; j-- > 0;) {
        q[j] = r;
        r = F.add(F.mul(r, x0), cur[j]);
      }
      if (!F.zero(r) || cur.size() == 1) break;
      cur = q;
      ++m;
    }
    G v{};
    for (std::size_t j = cur.size(); j-- > 0;) v = F.add(F.mul(v, x0), cur[j]);
    total += (m % 2 == 1) ? 1 : 1 + chi(v);
  }
  total += (d % 2 == 1) ? 1 : 1 + chi(F.c(g[d]));
  return total;
}

// Points of the (Z/2)^3 cover with quotients y^2 = f_S, S nonempty, via
// N(C) = (Q + 1) + sum_S (N(C_S) - (Q + 1)).
inline i64 cover_count(const Fq& F, const std::vector<IPoly>& fs) {
  const i64 base = F.order() + 1;
  i64 total = base;
  for (int S = 1; S < 8; ++S) {
    IPoly g{1};
    for (int i = 0; i < 3; ++i)
      if (S >> i & 1) g = ipoly_mul(g, fs[i], F.p);
    total += hyperelliptic_count(F, g) - base;
  }
  return total;
}

// a^k + b^k for the roots of T^2 + tT + q, from the closed form
// sum_i (-1)^i k/(k-i) C(k-i, i) q^i (-t)^(k-2i).
inline i64 power_sum_closed(i64 t, i64 q, int k) {
  if (k == 0) return 2;
  i64 s = 0;
  for (int i = 0; 2 * i <= k; ++i) {
    // k/(k-i) * C(k-i, i) is an integer
    i64 binom = 1;
    for (int j = 0; j < i; ++j) binom = binom * (k - i - j) / (j + 1);
    const i64 coef = binom * k / (k - i);
    i64 term = coef;
    for (int j = 0; j < i; ++j) term *= q;
    for (int j = 0; j < k - 2 * i; ++j) term *= -t;
    s += (i % 2 ? -1 : 1) * term;
  }
  return s;
}

// Integer polynomial product, constant first.
inline std::vector<i64> zmul(const std::vector<i64>& f, const std::vector<i64>& g) {
  std::vector<i64> h(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
  return h;
}

}  // namespace oracle
