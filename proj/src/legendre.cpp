#include "genus3/legendre.hpp"

#include <algorithm>
#include <stdexcept>

namespace genus3 {

namespace {

using Mat = std::array<Fel, 4>;

// Matrix of the map sending z1, z2, z3 to 0, 1, infinity.
Mat to_standard(const Field& F, const ProjPoint& z1, const ProjPoint& z2, const ProjPoint& z3) {
  if (z1 == z2 || z2 == z3 || z1 == z3) throw MathError("Mobius triple has repeated points");
  const Fel one = F.one(), zero = F.zero();
  if (z1.is_infinity()) return {zero, F.sub(*z2.x, *z3.x), one, F.neg(*z3.x)};
  if (z2.is_infinity()) return {one, F.neg(*z1.x), one, F.neg(*z3.x)};
  if (z3.is_infinity()) return {one, F.neg(*z1.x), zero, F.sub(*z2.x, *z1.x)};
  const Fel d23 = F.sub(*z2.x, *z3.x), d21 = F.sub(*z2.x, *z1.x);
  return {d23, F.neg(F.mul(*z1.x, d23)), d21, F.neg(F.mul(*z3.x, d21))};
}

Mat mat_mul(const Field& F, const Mat& x, const Mat& y) {
  return {F.add(F.mul(x[0], y[0]), F.mul(x[1], y[2])), F.add(F.mul(x[0], y[1]), F.mul(x[1], y[3])),
          F.add(F.mul(x[2], y[0]), F.mul(x[3], y[2])), F.add(F.mul(x[2], y[1]), F.mul(x[3], y[3]))};
}

Mat adjugate(const Field& F, const Mat& m) { return {m[3], F.neg(m[1]), F.neg(m[2]), m[0]}; }

ProjPoint act(const Field& F, const Mat& m, const ProjPoint& P) {
  Fel num, den;
  if (P.is_infinity()) {
    num = m[0];
    den = m[2];
  } else {
    num = F.add(F.mul(m[0], *P.x), m[1]);
    den = F.add(F.mul(m[2], *P.x), m[3]);
  }
  if (F.is_zero(den)) return ProjPoint::infinity();
  return ProjPoint::finite(F.div(num, den));
}

void require_legendre(const Field& F, const Fel& l) {
  if (F.is_zero(l) || F.is_one(l)) throw MathError("Legendre coefficient must differ from 0 and 1");
}

}  // namespace

FieldPtr quadratic_extension(const FieldPtr& base) { return make_field(base->p(), 2 * base->degree()); }

ProjPoint frobenius(const ProjPoint& P, const Field& ext, std::uint64_t q) {
  if (P.is_infinity()) return P;
  return ProjPoint::finite(ext.pow(*P.x, q));
}

bool RamSet::contains(const ProjPoint& P) const { return std::binary_search(pts.begin(), pts.end(), P); }

int RamSet::rational_count() const {
  int n = 0;
  for (const auto& P : pts) n += frobenius(P, *ext, base->order()) == P;
  return n;
}

bool RamSet::frobenius_stable() const {
  return std::all_of(pts.begin(), pts.end(),
                     [&](const ProjPoint& P) { return contains(frobenius(P, *ext, base->order())); });
}

RamSet ram_set(const EllipticModel& m) {
  RamSet R{m.base(), quadratic_extension(m.base()), {}};
  const auto roots = roots_in(m.f(), R.ext);
  if (static_cast<int>(roots.size()) != m.degree())
    throw MathError("branch points of y^2 = " + to_string(m.f()) + " do not all lie in F_q^2");
  for (const Fel& r : roots) R.pts.push_back(ProjPoint::finite(r));
  if (m.degree() == 3) R.pts.push_back(ProjPoint::infinity());
  std::sort(R.pts.begin(), R.pts.end());
  return R;
}

std::size_t intersection_size(const std::vector<ProjPoint>& a, const std::vector<ProjPoint>& b) {
  std::size_t n = 0;
  for (const auto& P : a) n += std::find(b.begin(), b.end(), P) != b.end();
  return n;
}

Poly poly_from_points(const std::vector<ProjPoint>& pts, const FieldPtr& ext, const FieldPtr& base) {
  std::vector<Fel> roots;
  for (const auto& P : pts)
    if (!P.is_infinity()) roots.push_back(*P.x);
  return restrict_poly(Poly::from_roots(ext, roots), base);
}

Fel lambda_from_points(const Field& F, const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3) {
  if (p1.is_infinity() || p2.is_infinity() || p3.is_infinity())
    throw MathError("lambda_from_points expects finite points");
  if (p1 == p2 || p1 == p3 || p2 == p3) throw MathError("coincident branch points");
  return F.div(F.sub(*p3.x, *p1.x), F.sub(*p2.x, *p1.x));
}

Fel cross_ratio(const Field& F, const ProjPoint& a, const ProjPoint& b, const ProjPoint& c, const ProjPoint& d) {
  const ProjPoint r = act(F, to_standard(F, a, b, c), d);
  if (r.is_infinity()) throw MathError("cross ratio of coincident points");
  return *r.x;
}

std::vector<Fel> orbit(const Field& F, const Fel& l) {
  require_legendre(F, l);
  const Fel one = F.one();
  const Fel inv = F.inv(l);
  const Fel one_minus = F.sub(one, l);
  std::vector<Fel> out{l,
                       one_minus,
                       inv,
                       F.inv(one_minus),
                       F.sub(one, inv),  // (l - 1) / l
                       F.div(l, F.sub(l, one))};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool legendre_equivalent(const Field& F, const Fel& l1, const Fel& l2) {
  const auto o = orbit(F, l1);
  return std::binary_search(o.begin(), o.end(), l2);
}

Fel j_invariant(const Field& F, const Fel& l) {
  require_legendre(F, l);
  const Fel s = F.add(F.sub(F.sqr(l), l), F.one());
  const Fel num = F.mul(F.from_int(256), F.mul(s, F.sqr(s)));
  const Fel den = F.sqr(F.mul(l, F.sub(l, F.one())));
  return F.div(num, den);
}

Fel canonical_lambda(const RamSet& R) {
  if (R.pts.size() != 4) throw MathError("a ramification set has four points");
  const Field& F = *R.ext;
  return orbit(F, cross_ratio(F, R.pts[0], R.pts[1], R.pts[2], R.pts[3])).front();
}

bool isomorphic_curves(const EllipticModel& m1, const EllipticModel& m2) {
  const RamSet R1 = ram_set(m1), R2 = ram_set(m2);
  if (R1.ext != R2.ext) return false;
  const Field& F = *R1.ext;
  const Fel l1 = cross_ratio(F, R1.pts[0], R1.pts[1], R1.pts[2], R1.pts[3]);
  const Fel l2 = cross_ratio(F, R2.pts[0], R2.pts[1], R2.pts[2], R2.pts[3]);
  const bool by_orbit = legendre_equivalent(F, l1, l2);
  const bool by_j = j_invariant(F, l1) == j_invariant(F, l2);
  if (by_orbit != by_j) throw std::logic_error("Legendre orbit and j-invariant disagree");
  return by_orbit;
}

Fel case1_lambda(const Field& F, const Fel& l1, const Fel& l2) {
  require_legendre(F, l1);
  require_legendre(F, l2);
  if (l1 == l2) throw MathError("case-1 arrangement needs distinct Legendre coefficients");
  return F.div(F.mul(l2, F.sub(F.one(), l1)), F.sub(l2, l1));
}

Fel case2_lambda(const Field& F, const Fel& l1, const Fel& l2) {
  if (F.is_zero(l1)) throw MathError("case-2 arrangement needs a nonzero first coefficient");
  if (l1 == l2) throw MathError("case-2 arrangement needs distinct Legendre coefficients");
  return F.div(l2, l1);
}

// ---------------------------------------------------------------------------
// Mobius

Mobius::Mobius(FieldPtr field, Fel a, Fel b, Fel c, Fel d) : field_(std::move(field)), m_{a, b, c, d} {
  const Field& F = *field_;
  if (F.is_zero(F.sub(F.mul(a, d), F.mul(b, c)))) throw MathError("singular Mobius matrix");
  for (const Fel& e : m_) {
    if (F.is_zero(e)) continue;
    const Fel s = F.inv(e);
    for (Fel& x : m_) x = F.mul(x, s);
    break;
  }
}

Mobius Mobius::identity(FieldPtr field) {
  const Fel one = field->one();
  return Mobius(std::move(field), one, Fel{}, Fel{}, one);
}

Mobius Mobius::from_triple(FieldPtr field, const std::array<ProjPoint, 3>& src,
                           const std::array<ProjPoint, 3>& dst) {
  const Field& F = *field;
  const Mat s = to_standard(F, src[0], src[1], src[2]);
  const Mat d = to_standard(F, dst[0], dst[1], dst[2]);
  const Mat m = mat_mul(F, adjugate(F, d), s);
  return Mobius(std::move(field), m[0], m[1], m[2], m[3]);
}

Mobius Mobius::send_to_infinity(FieldPtr field, const ProjPoint& u) {
  if (u.is_infinity()) return identity(std::move(field));
  const Fel one = field->one();
  const Fel minus_u = field->neg(*u.x);
  return Mobius(std::move(field), Fel{}, one, one, minus_u);
}

ProjPoint Mobius::apply(const ProjPoint& P) const { return act(*field_, m_, P); }

Mobius Mobius::compose(const Mobius& inner) const {
  const Mat m = mat_mul(*field_, m_, inner.m_);
  return Mobius(field_, m[0], m[1], m[2], m[3]);
}

Mobius Mobius::inverse() const {
  const Mat m = adjugate(*field_, m_);
  return Mobius(field_, m[0], m[1], m[2], m[3]);
}

bool Mobius::defined_over(std::uint64_t q) const {
  return std::all_of(m_.begin(), m_.end(), [&](const Fel& e) { return field_->pow(e, q) == e; });
}

std::vector<ProjPoint> apply(const Mobius& s, const std::vector<ProjPoint>& pts) {
  std::vector<ProjPoint> out;
  for (const auto& P : pts) out.push_back(s.apply(P));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Mobius> alignments(const EllipticModel& m1, const EllipticModel& m2) {
  const RamSet R1 = ram_set(m1), R2 = ram_set(m2);
  const std::uint64_t q = m1.q();
  std::vector<std::array<int, 3>> triples;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        if (i != j && j != k && i != k) triples.push_back({i, j, k});
  std::vector<Mobius> out;
  for (const auto& s : triples) {
    for (const auto& d : triples) {
      const Mobius sigma = Mobius::from_triple(R1.ext, {R2.pts[s[0]], R2.pts[s[1]], R2.pts[s[2]]},
                                               {R1.pts[d[0]], R1.pts[d[1]], R1.pts[d[2]]});
      if (!sigma.defined_over(q)) continue;
      if (intersection_size(apply(sigma, R2.pts), R1.pts) != 3) continue;
      if (std::find(out.begin(), out.end(), sigma) == out.end()) out.push_back(sigma);
    }
  }
  return out;
}

EllipticModel align_third_curve(const EllipticModel& m1, const EllipticModel& m2) {
  if (m1.base() != m2.base()) throw MathError("models over different fields");
  if (isomorphic_curves(m1, m2)) throw MathError("alignment needs non-isomorphic curves");
  const RamSet R1 = ram_set(m1), R2 = ram_set(m2);
  const int c1 = R1.rational_count(), c2 = R2.rational_count();
  if (c1 != c2 || (c1 != 2 && c1 != 4))
    throw MathError("alignment needs equal rational 2-torsion counts in {2, 4}, got " + std::to_string(c1) + " and " +
                    std::to_string(c2));
  const auto sigmas = alignments(m1, m2);
  if (sigmas.empty()) throw MathError("no PGL(2, q) alignment found");
  const EllipticModel m3(poly_from_points(apply(sigmas.front(), R2.pts), R1.ext, m1.base()));
  const RamSet R3 = ram_set(m3);
  if (!isomorphic_curves(m3, m2) || intersection_size(R1.pts, R3.pts) != 3)
    throw std::logic_error("aligned model fails its postconditions");
  return m3;
}

}  // namespace genus3
