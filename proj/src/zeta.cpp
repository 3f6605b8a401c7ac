#include "genus3/zeta.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "genus3/parallel.hpp"

namespace genus3 {

namespace {

// Valuation of g at x0 and the residue of g / pi^v there (pi = x - x0, or
// 1/x at infinity).
struct Local {
  int v = 0;
  Fel r;
};

Local local_data(const Poly& g, const ProjPoint& x0) {
  const Field& F = *g.field();
  if (x0.is_infinity()) return {-g.degree(), g.lead()};
  const Fel& a = *x0.x;
  std::vector<Fel> c = g.coeffs();
  for (int v = 0;; ++v) {
    // Horner with quotient: c = (x - a) q + rem
    const std::size_t n = c.size();
    std::vector<Fel> quo(n - 1);
    Fel acc = c[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
      quo[i] = acc;
      acc = F.add(c[i], F.mul(a, acc));
    }
    if (!F.is_zero(acc)) return {v, acc};
    c = std::move(quo);
  }
}

bool ramified(const std::array<Local, 3>& d) {
  for (const auto& l : d)
    if (l.v % 2 != 0) return true;
  return false;
}

int splitting_from(const std::array<Local, 3>& d, const Field& F) {
  int split = 0;
  for (unsigned S = 0; S < 8; ++S) {
    int v = 0;
    Fel r = F.one();
    for (int i = 0; i < 3; ++i)
      if (S >> i & 1) {
        v += d[i].v;
        r = F.mul(r, d[i].r);
      }
    if (v % 2 != 0) continue;
    if (F.qchar(r) < 0) return 0;  // inert: no degree-one place
    ++split;
  }
  return split;
}

std::array<Poly, 3> embed_all(const Genus3Cover& cover, const FieldPtr& over) {
  return {embed(cover.f[0], over), embed(cover.f[1], over), embed(cover.f[2], over)};
}

// Evaluates f_1, f_2, f_3 at one point sharing the powers of x; prime-field
// coefficients are applied as integer scalars with one reduction per slot
// (p < 2^26 there, so five products of size p^2 fit).
class TripleEval {
 public:
  explicit TripleEval(const std::array<Poly, 3>& g) : F_(*g[0].field()) {
    for (int i = 0; i < 3; ++i) {
      deg_ = std::max(deg_, g[i].degree());
      for (const Fel& c : g[i].coeffs()) {
        scalar_[i].push_back(c.c[0]);
        prime_[i] = prime_[i] && F_.in_prime_field(c) && F_.p() < (1u << 26);
      }
      coef_[i] = g[i].coeffs();
    }
  }

  std::array<Fel, 3> operator()(const Fel& x) const {
    std::array<Fel, 5> pw{};
    pw[0] = F_.one();
    if (deg_ >= 1) pw[1] = x;
    for (int j = 2; j <= deg_; ++j) pw[j] = F_.mul(pw[j - 1], x);
    std::array<Fel, 3> out{};
    const unsigned n = F_.degree();
    for (int i = 0; i < 3; ++i) {
      if (!prime_[i]) {
        for (std::size_t j = 0; j < coef_[i].size(); ++j) out[i] = F_.add(out[i], F_.mul(coef_[i][j], pw[j]));
        continue;
      }
      for (unsigned m = 0; m < n; ++m) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < scalar_[i].size(); ++j) acc += std::uint64_t{scalar_[i][j]} * pw[j].c[m];
        out[i].c[m] = static_cast<std::uint32_t>(F_.reduce(acc));
      }
    }
    return out;
  }

 private:
  const Field& F_;
  int deg_ = 0;
  std::array<std::vector<Fel>, 3> coef_;
  std::array<std::vector<std::uint32_t>, 3> scalar_;
  std::array<bool, 3> prime_{true, true, true};
};

int splitting_at(const std::array<Poly, 3>& g, const ProjPoint& x0) {
  const std::array<Local, 3> d{local_data(g[0], x0), local_data(g[1], x0), local_data(g[2], x0)};
  const int n = splitting_from(d, *g[0].field());
  if (ramified(d) && n != 0 && n != 4)
    throw std::logic_error("ramified point with " + std::to_string(n) + " rational places above it");
  return n;
}

std::vector<std::int64_t> int_mul(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  std::vector<__int128> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += static_cast<__int128>(a[i]) * b[j];
  std::vector<std::int64_t> out;
  for (auto v : r) {
    if (v > INT64_MAX || v < INT64_MIN) throw MathError("polynomial coefficient overflows 64 bits");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

}  // namespace

bool functional_equation_holds(const LPoly& P, std::uint64_t q) {
  if (P.degree() != 6 || P.c[0] != 1) return false;
  for (int i = 0; i <= 3; ++i)
    if (static_cast<__int128>(P.c[6 - i]) != static_cast<__int128>(ipow(q, 3 - i)) * P.c[i]) return false;
  return true;
}

std::vector<std::int64_t> reversal(const LPoly& P) { return {P.c.rbegin(), P.c.rend()}; }

std::string to_string(const LPoly& P, char var) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < P.c.size(); ++k) {
    const std::int64_t v = P.c[k];
    if (v == 0) continue;
    if (!first) os << (v < 0 ? " - " : " + ");
    else if (v < 0) os << "-";
    const std::int64_t a = v < 0 ? -v : v;
    if (k == 0 || a != 1) os << a;
    if (k >= 1) os << var;
    if (k >= 2) os << "^" << k;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

int local_splitting(const Genus3Cover& cover, const ProjPoint& x0, const FieldPtr& over) {
  const std::array<Poly, 3> g = embed_all(cover, over);
  const std::array<Local, 3> d{local_data(g[0], x0), local_data(g[1], x0), local_data(g[2], x0)};
  return splitting_from(d, *over);
}

std::int64_t count_cover(const Genus3Cover& cover, unsigned k) {
  const FieldPtr ext = counting_field(cover.base, k);
  const Field& F = *ext;
  const std::array<Poly, 3> g = embed_all(cover, ext);
  const auto* table = F.char_table();
  auto chi = [&](const Fel& v) { return table ? (*table)[F.rank(v)] : F.qchar(v); };
  const TripleEval eval(g);
  const std::int64_t finite = parallel_sum(F.order(), [&](std::uint64_t begin, std::uint64_t end) {
    std::int64_t s = 0;
    Fel x = F.element(begin);
    for (std::uint64_t i = begin; i < end; ++i, F.next(x)) {
      const auto [a0, a1, a2] = eval(x);
      if (F.is_zero(a0) || F.is_zero(a1) || F.is_zero(a2)) {
        s += splitting_at(g, ProjPoint::finite(x));
        continue;
      }
      s += (1 + chi(a0)) * (1 + chi(a1)) * (1 + chi(a2));
    }
    return s;
  });
  return finite + splitting_at(g, ProjPoint::infinity());
}

std::int64_t expected_count(std::uint64_t q, const std::array<std::int64_t, 3>& t, unsigned k) {
  __int128 n = static_cast<__int128>(ipow(q, k)) + 1;
  for (auto ti : t) n -= trace_power_sum(ti, q, k);
  if (n > INT64_MAX || n < INT64_MIN) throw MathError("expected count overflows 64 bits");
  return static_cast<std::int64_t>(n);
}

std::vector<std::int64_t> claimed_char_poly(std::uint64_t q, const std::array<std::int64_t, 3>& t) {
  std::vector<std::int64_t> r{1};
  for (auto ti : t) r = int_mul(r, {static_cast<std::int64_t>(q), ti, 1});
  return r;
}

LPoly claimed_lpoly(std::uint64_t q, const std::array<std::int64_t, 3>& t) {
  const auto cp = claimed_char_poly(q, t);
  LPoly P{{cp.rbegin(), cp.rend()}};
  if (!functional_equation_holds(P, q)) throw std::logic_error("claimed L-polynomial fails the functional equation");
  return P;
}

LPoly reconstruct_lpoly(std::span<const std::int64_t> counts, std::uint64_t q) {
  if (counts.size() != 6) throw MathError("reconstruction needs exactly six counts");
  std::array<__int128, 7> S{}, e{};
  for (unsigned k = 1; k <= 6; ++k) S[k] = static_cast<__int128>(ipow(q, k)) + 1 - counts[k - 1];
  e[0] = 1;
  for (unsigned k = 1; k <= 6; ++k) {
    __int128 acc = 0;
    for (unsigned i = 1; i <= k; ++i) acc += (i % 2 == 1 ? 1 : -1) * e[k - i] * S[i];
    if (acc % k != 0)
      throw MathError("Newton identity at k = " + std::to_string(k) + " has no integer solution; counts are not those of a curve");
    e[k] = acc / k;
  }
  LPoly P;
  P.c.assign(7, 0);
  for (unsigned k = 0; k <= 6; ++k) {
    const __int128 v = k % 2 == 0 ? e[k] : -e[k];
    if (v > INT64_MAX || v < INT64_MIN) throw MathError("L-polynomial coefficient overflows 64 bits");
    P.c[k] = static_cast<std::int64_t>(v);
  }
  while (P.c.size() > 1 && P.c.back() == 0) P.c.pop_back();
  if (!functional_equation_holds(P, q))
    throw MathError("reconstructed polynomial " + to_string(P) + " fails the genus-3 functional equation");
  return P;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kMatch: return "Match";
    case Verdict::kCountMismatch: return "CountMismatch";
    case Verdict::kPolyMismatch: return "PolyMismatch";
  }
  return "?";
}

unsigned default_max_k(std::uint64_t q) {
  unsigned K = 1;
  while (K < 6 && ipow(q, K) < 100'000) ++K;
  K = std::max(K, 3u);
  while (K > 1 && ipow(q, K) > kCountCap) --K;
  return K;
}

ZetaReport verify(const Genus3Cover& cover, const std::array<std::int64_t, 3>& t, unsigned max_k) {
  if (max_k < 1 || max_k > 6) throw MathError("K must lie in 1..6");
  ZetaReport rep;
  rep.q = cover.base->order();
  rep.traces = t;
  rep.max_k = max_k;
  rep.claimed = claimed_lpoly(rep.q, t);
  for (unsigned k = 1; k <= max_k; ++k) {
    rep.counts.push_back(count_cover(cover, k));
    rep.expected.push_back(expected_count(rep.q, t, k));
    if (rep.mismatch_k == 0 && rep.counts.back() != rep.expected.back()) rep.mismatch_k = k;
  }
  if (max_k == 6) {
    try {
      rep.reconstructed = reconstruct_lpoly(rep.counts, rep.q);
    } catch (const MathError& e) {
      rep.detail = e.what();
    }
  }
  if (rep.mismatch_k != 0) {
    rep.verdict = Verdict::kCountMismatch;
    const unsigned k = rep.mismatch_k;
    const std::string msg = "N_" + std::to_string(k) + " = " + std::to_string(rep.counts[k - 1]) + ", expected " +
                            std::to_string(rep.expected[k - 1]);
    rep.detail = rep.detail.empty() ? msg : msg + "; " + rep.detail;
  } else if (max_k == 6 && rep.reconstructed != rep.claimed) {
    rep.verdict = Verdict::kPolyMismatch;
    if (rep.reconstructed) rep.detail = "reconstructed " + to_string(*rep.reconstructed) + " != claimed " + to_string(rep.claimed);
  }
  return rep;
}

}  // namespace genus3
