#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "genus3/legendre.hpp"
#include "oracle.hpp"

using namespace genus3;

namespace {

Fel fi(const FieldPtr& F, std::int64_t v) { return F->from_int(v); }
ProjPoint pt(const FieldPtr& F, std::int64_t v) { return ProjPoint::finite(F->from_int(v)); }

EllipticModel legendre_model(const FieldPtr& F, std::int64_t l) {
  std::vector<Fel> r{fi(F, 0), fi(F, 1), fi(F, l)};
  return EllipticModel(Poly::from_roots(F, r));
}

// Orbit by plain modular arithmetic.
std::set<std::int64_t> orbit_mod_p(std::int64_t l, std::int64_t p) {
  using oracle::inv_p;
  using oracle::md;
  const std::int64_t a = md(l, p);
  return {a,
          md(1 - a, p),
          inv_p(a, p),
          inv_p(md(1 - a, p), p),
          md((a - 1) * inv_p(a, p), p),
          md(a * inv_p(md(a - 1, p), p), p)};
}

std::set<std::int64_t> as_ints(const FieldPtr& F, const std::vector<Fel>& v) {
  std::set<std::int64_t> s;
  for (const auto& u : v) s.insert(F->rank(u));
  return s;
}

}  // namespace

TEST_CASE("ram_set") {
  auto F7 = make_field(7, 1);
  auto F49 = make_field(7, 2);
  const RamSet R = ram_set(legendre_model(F7, 3));
  std::vector<ProjPoint> expect{ProjPoint::infinity(), pt(F49, 0), pt(F49, 1), pt(F49, 3)};
  CHECK(R.pts == expect);
  CHECK(R.rational_count() == 4);
  CHECK(R.frobenius_stable());

  const RamSet Rq =
      ram_set(EllipticModel(Poly::from_roots(F7, std::vector<Fel>{fi(F7, 0), fi(F7, 1), fi(F7, 3), fi(F7, 5)})));
  CHECK(Rq.pts == std::vector<ProjPoint>{pt(F49, 0), pt(F49, 1), pt(F49, 3), pt(F49, 5)});

  // (x - 1)(x^2 + 1): the generator z of F_49 satisfies z^2 = -1
  const RamSet Rc = ram_set(EllipticModel(Poly::from_ints(F7, {-1, 1, -1, 1})));
  const Fel z = F49->generator();
  std::vector<ProjPoint> e2{ProjPoint::infinity(), pt(F49, 1), ProjPoint::finite(z), ProjPoint::finite(F49->neg(z))};
  std::sort(e2.begin(), e2.end());
  CHECK(Rc.pts == e2);
  CHECK(Rc.rational_count() == 2);
  CHECK(Rc.frobenius_stable());

  // irreducible cubic x^3 + x + ... : find one by scan
  for (int b = 1; b < 7; ++b) {
    bool root = false;
    for (int x = 0; x < 7; ++x) root |= oracle::md(x * x * x + x + b, 7) == 0;
    if (!root) {
      CHECK_THROWS_AS(ram_set(EllipticModel(Poly::from_ints(F7, {b, 1, 0, 1}))), MathError);
      break;
    }
  }
}

TEST_CASE("lambda_from_points and cross_ratio") {
  auto F7 = make_field(7, 1);
  CHECK(lambda_from_points(*F7, pt(F7, 0), pt(F7, 1), pt(F7, 3)) == fi(F7, 3));
  CHECK(lambda_from_points(*F7, pt(F7, 1), pt(F7, 0), pt(F7, 3)) == fi(F7, 5));
  for (int l = 2; l < 7; ++l) CHECK(lambda_from_points(*F7, pt(F7, 0), pt(F7, 1), pt(F7, l)) == fi(F7, l));
  CHECK_THROWS_AS(lambda_from_points(*F7, pt(F7, 0), pt(F7, 0), pt(F7, 3)), MathError);
  // 0, 1, inf fixed: the cross ratio returns d itself
  CHECK(cross_ratio(*F7, pt(F7, 0), pt(F7, 1), ProjPoint::infinity(), pt(F7, 4)) == fi(F7, 4));
  // 1, 0, inf -> 0, 1, inf is z -> 1 - z
  CHECK(cross_ratio(*F7, pt(F7, 1), pt(F7, 0), ProjPoint::infinity(), pt(F7, 3)) == fi(F7, 5));
}

TEST_CASE("orbit examples") {
  auto F7 = make_field(7, 1), F13 = make_field(13, 1);
  CHECK(as_ints(F7, orbit(*F7, fi(F7, 3))) == std::set<std::int64_t>{3, 5});
  CHECK(as_ints(F13, orbit(*F13, fi(F13, 2))) == std::set<std::int64_t>{2, 7, 12});
  CHECK(as_ints(F13, orbit(*F13, fi(F13, 3))) == std::set<std::int64_t>{3, 5, 6, 8, 9, 11});
  CHECK(legendre_equivalent(*F7, fi(F7, 3), fi(F7, 5)));
  CHECK_FALSE(legendre_equivalent(*F13, fi(F13, 2), fi(F13, 3)));
  CHECK(legendre_equivalent(*F13, fi(F13, 4), fi(F13, 4)));
  CHECK_THROWS_AS(orbit(*F7, fi(F7, 1)), MathError);
  for (std::int64_t p : {7, 11, 13})
    for (std::int64_t l = 2; l < p; ++l) {
      auto F = make_field(p, 1);
      CHECK(as_ints(F, orbit(*F, fi(F, l))) == orbit_mod_p(l, p));
    }
}

TEST_CASE("orbits partition F_q minus {0,1}; j constant on orbits and separates them") {
  for (auto [p, n] : std::vector<std::pair<int, unsigned>>{{7, 1}, {11, 1}, {13, 1}, {7, 2}, {3, 2}, {5, 2}}) {
    auto F = make_field(p, n);
    std::set<std::vector<Fel>> orbits;
    for (std::uint64_t i = 0; i < F->order(); ++i) {
      const Fel l = F->element(i);
      if (F->is_zero(l) || F->is_one(l)) continue;
      const auto o = orbit(*F, l);
      CHECK((o.size() == 1 || o.size() == 2 || o.size() == 3 || o.size() == 6));
      CHECK(std::binary_search(o.begin(), o.end(), l));
      for (const auto& m : o) CHECK(orbit(*F, m) == o);  // closure
      for (const auto& m : o) CHECK(j_invariant(*F, m) == j_invariant(*F, l));
      orbits.insert(o);
    }
    std::size_t covered = 0;
    for (const auto& o : orbits) covered += o.size();
    CHECK(covered == F->order() - 2);
    std::set<Fel> js;
    for (const auto& o : orbits) js.insert(j_invariant(*F, o.front()));
    CHECK(js.size() == orbits.size());
  }
}

TEST_CASE("orbit census at q = 13") {
  auto F = make_field(13, 1);
  std::set<std::set<std::int64_t>> census;
  for (int l = 2; l < 13; ++l) census.insert(as_ints(F, orbit(*F, fi(F, l))));
  CHECK(census == std::set<std::set<std::int64_t>>{{2, 7, 12}, {4, 10}, {3, 5, 6, 8, 9, 11}});

  // full 2-torsion classes over F_13: exactly the j-values of these orbits,
  // each appearing together with its quadratic twist
  std::map<Fel, std::set<std::int64_t>> traces_by_j;
  for (const auto& c : enumerate_classes(F))
    if (c.two_torsion == 4) traces_by_j[c.j].insert(c.t);
  std::set<Fel> js{j_invariant(*F, fi(F, 2)), j_invariant(*F, fi(F, 4)), j_invariant(*F, fi(F, 3))};
  std::set<Fel> got;
  for (auto& [j, ts] : traces_by_j) {
    got.insert(j);
    for (auto t : ts) CHECK(ts.count(-t) == 1);
  }
  CHECK(got == js);
}

TEST_CASE("j_invariant of Legendre coefficients") {
  for (std::int64_t p : {7, 11, 13, 17}) {
    auto F = make_field(p, 1);
    CHECK(j_invariant(*F, fi(F, -1)) == fi(F, 1728));
  }
  auto F7 = make_field(7, 1);
  CHECK(j_invariant(*F7, fi(F7, 3)) == F7->zero());
  // cross-check the Weierstrass route for every Legendre model over F_13
  auto F13 = make_field(13, 1);
  for (int l = 2; l < 13; ++l) CHECK(j_invariant(legendre_model(F13, l)) == j_invariant(*F13, fi(F13, l)));
}

TEST_CASE("isomorphic_curves") {
  auto F7 = make_field(7, 1);
  CHECK(isomorphic_curves(legendre_model(F7, 2), legendre_model(F7, 4)));
  CHECK_FALSE(isomorphic_curves(legendre_model(F7, 3), legendre_model(F7, 2)));
  CHECK(isomorphic_curves(legendre_model(F7, 5), legendre_model(F7, 5)));
  // twists are geometrically isomorphic
  CHECK(isomorphic_curves(legendre_model(F7, 2), quadratic_twist(legendre_model(F7, 2))));
}

TEST_CASE("case lambdas") {
  auto F7 = make_field(7, 1), F13 = make_field(13, 1);
  CHECK(case1_lambda(*F13, fi(F13, 2), fi(F13, 3)) == fi(F13, 10));
  CHECK(case1_lambda(*F7, fi(F7, 3), fi(F7, 5)) == fi(F7, 2));
  CHECK_THROWS_AS(case1_lambda(*F7, fi(F7, 3), fi(F7, 3)), MathError);
  CHECK(case2_lambda(*F13, fi(F13, 12), fi(F13, 3)) == fi(F13, 10));
  CHECK(case2_lambda(*F7, fi(F7, 2), fi(F7, 4)) == fi(F7, 2));
  CHECK(case2_lambda(*F13, fi(F13, 5), F13->mul(fi(F13, 5), fi(F13, 7))) == fi(F13, 7));
  CHECK_THROWS_AS(case2_lambda(*F7, fi(F7, 2), fi(F7, 2)), MathError);

  // identity behind case 1: lambda of 1/(p1-p3), 1/(p2-p3), 1/(p4-p3)
  std::mt19937 rng(11);
  for (std::int64_t p : {11, 13, 17}) {
    for (int it = 0; it < 100; ++it) {
      std::int64_t v[4];
      std::set<std::int64_t> seen;
      for (auto& x : v) {
        do x = rng() % p;
        while (seen.count(x));
        seen.insert(x);
      }
      using oracle::inv_p;
      using oracle::md;
      const auto l1 = md((v[2] - v[0]) * inv_p(v[1] - v[0], p), p);
      const auto l2 = md((v[3] - v[0]) * inv_p(v[1] - v[0], p), p);
      const auto a = inv_p(v[0] - v[2], p), b = inv_p(v[1] - v[2], p), d = inv_p(v[3] - v[2], p);
      const auto ls = md((d - a) * inv_p(b - a, p), p);
      auto F = make_field(p, 1);
      CHECK(case1_lambda(*F, fi(F, l1), fi(F, l2)) == fi(F, ls));
    }
  }
}

TEST_CASE("Mobius") {
  auto F13 = make_field(13, 1);
  const ProjPoint inf = ProjPoint::infinity();
  for (int p3 = 0; p3 < 13; ++p3) {
    Mobius s(F13, F13->zero(), fi(F13, 1), fi(F13, 1), fi(F13, -p3));
    CHECK(s.apply(pt(F13, p3)) == inf);
    CHECK(Mobius::send_to_infinity(F13, pt(F13, p3)) == s);
  }
  CHECK(Mobius::from_triple(F13, {pt(F13, 0), pt(F13, 1), inf}, {pt(F13, 0), pt(F13, 1), inf}) ==
        Mobius::identity(F13));
  const std::array<ProjPoint, 3> dst{pt(F13, 5), pt(F13, 9), pt(F13, 2)};
  const Mobius m = Mobius::from_triple(F13, {pt(F13, 0), pt(F13, 1), inf}, dst);
  CHECK(m.apply(pt(F13, 0)) == dst[0]);
  CHECK(m.apply(pt(F13, 1)) == dst[1]);
  CHECK(m.apply(inf) == dst[2]);
  CHECK(m.compose(m.inverse()) == Mobius::identity(F13));
  CHECK_THROWS_AS(Mobius::from_triple(F13, {pt(F13, 0), pt(F13, 0), inf}, dst), MathError);
  CHECK_THROWS_AS(Mobius(F13, fi(F13, 1), fi(F13, 2), fi(F13, 2), fi(F13, 4)), MathError);

  // every triple-to-triple map, including ones through infinity
  std::vector<ProjPoint> pts{inf};
  for (int i = 0; i < 13; ++i) pts.push_back(pt(F13, i));
  std::mt19937 rng(3);
  for (int it = 0; it < 300; ++it) {
    std::array<ProjPoint, 3> s, d;
    std::shuffle(pts.begin(), pts.end(), rng);
    std::copy_n(pts.begin(), 3, s.begin());
    std::shuffle(pts.begin(), pts.end(), rng);
    std::copy_n(pts.begin(), 3, d.begin());
    const Mobius mm = Mobius::from_triple(F13, s, d);
    for (int i = 0; i < 3; ++i) CHECK(mm.apply(s[i]) == d[i]);
    CHECK(mm.defined_over(13));
  }
}

TEST_CASE("Legendre coefficient is PGL-invariant up to equivalence") {
  auto F = make_field(13, 1);
  std::vector<ProjPoint> pts{ProjPoint::infinity()};
  for (int i = 0; i < 13; ++i) pts.push_back(pt(F, i));
  std::mt19937 rng(5);
  for (int it = 0; it < 300; ++it) {
    std::shuffle(pts.begin(), pts.end(), rng);
    std::array<ProjPoint, 3> s, d;
    std::copy_n(pts.begin(), 3, s.begin());
    const ProjPoint fourth = pts[3];
    std::shuffle(pts.begin(), pts.end(), rng);
    std::copy_n(pts.begin(), 3, d.begin());
    const Mobius m = Mobius::from_triple(F, s, d);
    const Fel before = cross_ratio(*F, s[0], s[1], s[2], fourth);
    const Fel after = cross_ratio(*F, m.apply(s[1]), m.apply(s[0]), m.apply(fourth), m.apply(s[2]));
    CHECK(legendre_equivalent(*F, before, after));
  }
}

TEST_CASE("ram sets of enumerated models are Frobenius-stable") {
  for (std::uint64_t q : {7, 9, 11}) {
    auto F = base_field(prime_power(q));
    for (const auto& c : enumerate_classes(F)) {
      if (c.two_torsion == 1) {
        CHECK_THROWS_AS(ram_set(c.representative), MathError);
        continue;
      }
      const RamSet R = ram_set(c.representative);
      CHECK(R.pts.size() == 4);
      CHECK(R.frobenius_stable());
      CHECK(R.rational_count() == c.two_torsion);
    }
  }
}

TEST_CASE("align_third_curve") {
  auto F7 = make_field(7, 1);
  const auto m1 = legendre_model(F7, 2), m2 = legendre_model(F7, 3);
  const EllipticModel m3 = align_third_curve(m1, m2);
  CHECK(isomorphic_curves(m3, m2));
  const RamSet R1 = ram_set(m1), R3 = ram_set(m3);
  CHECK(intersection_size(R1.pts, R3.pts) == 3);
  CHECK(R3.frobenius_stable());

  CHECK_THROWS_AS(align_third_curve(m1, m1), MathError);
  CHECK_THROWS_AS(align_third_curve(m1, EllipticModel(Poly::from_ints(F7, {-1, 1, -1, 1}))), MathError);

  // postconditions for every non-isomorphic pair with matching 2-torsion at q = 11 and 9
  for (std::uint64_t q : {9, 11}) {
    auto F = base_field(prime_power(q));
    std::vector<CurveClass> cs;
    for (const auto& c : enumerate_classes(F))
      if (c.two_torsion >= 2) cs.push_back(c);
    for (const auto& a : cs)
      for (const auto& b : cs) {
        if (a.two_torsion != b.two_torsion || a.j == b.j) continue;
        const auto m = align_third_curve(a.representative, b.representative);
        CHECK(isomorphic_curves(m, b.representative));
        CHECK(intersection_size(ram_set(a.representative).pts, ram_set(m).pts) == 3);
      }
  }
}
