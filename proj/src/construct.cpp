#include "genus3/construct.hpp"

#include <algorithm>
#include <sstream>

namespace genus3 {

std::string_view case_name(ArrangementCase c) { return c == ArrangementCase::kWeak ? "weak" : "strong"; }

namespace {

bool has_infinity(const Poly& f) { return f.degree() % 2 == 1; }

std::vector<ProjPoint> sorted_points(std::vector<ProjPoint> v) {
  std::sort(v.begin(), v.end());
  return v;
}

int set_intersection_size(const std::vector<std::vector<ProjPoint>>& sets) {
  int n = 0;
  for (const auto& P : sets.front()) {
    bool all = true;
    for (std::size_t i = 1; i < sets.size(); ++i) all &= std::find(sets[i].begin(), sets[i].end(), P) != sets[i].end();
    n += all;
  }
  return n;
}

Intersections meets_of(const std::array<std::vector<ProjPoint>, 3>& R) {
  Intersections m;
  m.pairwise = {set_intersection_size({R[0], R[1]}), set_intersection_size({R[0], R[2]}),
                set_intersection_size({R[1], R[2]})};
  m.triple = set_intersection_size({R[0], R[1], R[2]});
  std::vector<ProjPoint> all;
  for (const auto& r : R) all.insert(all.end(), r.begin(), r.end());
  std::sort(all.begin(), all.end());
  m.union_size = static_cast<int>(std::unique(all.begin(), all.end()) - all.begin());
  return m;
}

bool pattern_ok(const Intersections& m) {
  return m.pairwise == std::array<int, 3>{3, 3, 3} && m.triple == 2 && m.union_size == 5;
}

std::string describe(const Intersections& m) {
  std::ostringstream os;
  os << "pairwise " << m.pairwise[0] << "/" << m.pairwise[1] << "/" << m.pairwise[2] << ", triple " << m.triple
     << ", union " << m.union_size;
  return os.str();
}

// The three branch sets of a certificate, from its points.
std::array<std::vector<ProjPoint>, 3> cert_sets(const ConstructionCertificate& c) {
  const auto P = [&](int i) { return ProjPoint::finite(c.points[i]); };
  const ProjPoint inf = ProjPoint::infinity();
  std::array<std::vector<ProjPoint>, 3> R{sorted_points({inf, P(0), P(1), P(2)}), sorted_points({inf, P(0), P(1), P(3)}),
                                          {}};
  if (c.arrangement == ArrangementCase::kWeak)
    R[2] = sorted_points({P(0), P(1), P(2), P(3)});
  else
    R[2] = sorted_points({inf, P(0), P(2), P(3)});
  return R;
}

}  // namespace

Intersections intersections(const std::array<Poly, 3>& f) {
  Intersections m;
  auto r = [&](int i) { return f[i].degree() + (has_infinity(f[i]) ? 1 : 0); };
  auto pair = [&](int i, int j) {
    return poly_gcd(f[i], f[j]).degree() + (has_infinity(f[i]) && has_infinity(f[j]) ? 1 : 0);
  };
  m.pairwise = {pair(0, 1), pair(0, 2), pair(1, 2)};
  m.triple = poly_gcd(poly_gcd(f[0], f[1]), f[2]).degree() +
             (has_infinity(f[0]) && has_infinity(f[1]) && has_infinity(f[2]) ? 1 : 0);
  m.union_size = r(0) + r(1) + r(2) - m.pairwise[0] - m.pairwise[1] - m.pairwise[2] + m.triple;
  return m;
}

int hurwitz_ram_count(const std::array<Poly, 3>& f) { return intersections(f).union_size; }
int hurwitz_ram_count(const Genus3Cover& cover) { return hurwitz_ram_count(cover.f); }

// 2g - 2 = 8 (2 * 0 - 2) + 4u
int hurwitz_genus(int ram_union) { return 2 * ram_union - 7; }

bool degree8_check(const std::array<Poly, 3>& f) {
  for (int S = 1; S < 8; ++S) {
    Poly g = Poly::constant(f[0].field(), f[0].field()->one());
    for (int i = 0; i < 3; ++i)
      if (S >> i & 1) g = g * f[i];
    if (odd_part(g).degree() < 1) return false;
  }
  return true;
}

bool degree8_check(const Genus3Cover& cover) { return degree8_check(cover.f); }

Genus3Cover make_cover(const std::array<Poly, 3>& f) {
  const FieldPtr base = f[0].field();
  for (const auto& g : f) {
    if (g.field() != base) throw StructureError("cover polynomials live over different fields");
    try {
      EllipticModel check(g);
    } catch (const MathError& e) {
      throw StructureError(std::string("cover polynomial rejected: ") + e.what());
    }
  }
  const Intersections m = intersections(f);
  if (!pattern_ok(m))
    throw StructureError("branch sets do not meet in the genus-3 pattern (" + describe(m) +
                         "); Hurwitz genus would be " + std::to_string(hurwitz_genus(m.union_size)));
  if (!degree8_check(f)) throw StructureError("some product f_S is a constant times a square");
  return Genus3Cover{base, f, m.union_size, true};
}

void check_certificate(const ConstructionCertificate& c) {
  const Field& E = *c.ext;
  const std::uint64_t q = c.base->order();
  const auto R = cert_sets(c);
  const Intersections m = meets_of(R);
  if (!pattern_ok(m)) throw StructureError("certificate branch sets: " + describe(m));
  if (m.pairwise != c.meets.pairwise || m.triple != c.meets.triple || m.union_size != c.meets.union_size)
    throw StructureError("certificate intersection record disagrees with its points");
  for (int i = 0; i < 3; ++i) {
    if (c.models[i].base() != c.base) throw StructureError("certificate model over the wrong field");
    if (ram_set(c.models[i]).pts != R[i])
      throw StructureError("model " + std::to_string(i + 1) + " does not branch at the certificate points");
  }
  auto rational = [&](const Fel& u) { return E.pow(u, q) == u; };
  if (c.arrangement == ArrangementCase::kWeak) {
    if (rational(c.points[0]) || E.pow(c.points[0], q) != c.points[1])
      throw StructureError("weak certificate: p1, p2 are not a conjugate pair");
    if (!rational(c.points[2]) || !rational(c.points[3]))
      throw StructureError("weak certificate: p3, p4 must be rational");
  } else {
    for (const Fel& u : c.points)
      if (!rational(u)) throw StructureError("strong certificate: all points must be rational");
  }
  const Fel& p1 = c.points[0];
  const Fel d21 = E.sub(c.points[1], p1);
  const Fel l1 = E.div(E.sub(c.points[2], p1), d21), l2 = E.div(E.sub(c.points[3], p1), d21);
  if (c.lambdas[0].value != l1 || c.lambdas[1].value != l2)
    throw StructureError("certificate Legendre coefficients disagree with its points");
  const Fel l3 = c.arrangement == ArrangementCase::kWeak ? case1_lambda(E, l1, l2) : case2_lambda(E, l1, l2);
  if (c.lambdas[2].value != l3) throw StructureError("certificate third Legendre coefficient is wrong");
}

Genus3Cover build_cover(const ConstructionCertificate& cert) {
  check_certificate(cert);
  return make_cover({cert.models[0].f(), cert.models[1].f(), cert.models[2].f()});
}

namespace {

// Models, Legendre records and intersections for points (p1, p2, p3, p4) in
// the normalized layout. Empty if `third` is given and the third model is not
// geometrically isomorphic to it.
std::optional<ConstructionCertificate> certificate_from_points(const FieldPtr& base, const FieldPtr& ext,
                                                             ArrangementCase mode, const std::array<Fel, 4>& pts,
                                                             const EllipticModel* third_like) {
  const Field& E = *ext;
  const auto fin = [&](int i) { return ProjPoint::finite(pts[i]); };
  const Poly f1 = poly_from_points({fin(0), fin(1), fin(2)}, ext, base);
  const Poly f2 = poly_from_points({fin(0), fin(1), fin(3)}, ext, base);
  const Poly f3 = mode == ArrangementCase::kWeak ? poly_from_points({fin(0), fin(1), fin(2), fin(3)}, ext, base)
                                                 : poly_from_points({fin(0), fin(2), fin(3)}, ext, base);
  const EllipticModel third(f3);
  if (third_like && !isomorphic_curves(third, *third_like)) return std::nullopt;

  const Fel d21 = E.sub(pts[1], pts[0]);
  const Fel l1 = E.div(E.sub(pts[2], pts[0]), d21);
  const Fel l2 = E.div(E.sub(pts[3], pts[0]), d21);
  LambdaRecord r3;
  if (mode == ArrangementCase::kWeak) {
    r3 = {case1_lambda(E, l1, l2), "l2(1-l1)/(l2-l1)"};
    // lambda of sigma(R3) for sigma = [[0, 1], [1, -p3]]
    const auto inv_from_p3 = [&](int i) { return ProjPoint::finite(E.inv(E.sub(pts[i], pts[2]))); };
    if (lambda_from_points(E, inv_from_p3(0), inv_from_p3(1), inv_from_p3(3)) != r3.value)
      throw std::logic_error("weak-case Legendre identity failed");
  } else {
    r3 = {case2_lambda(E, l1, l2), "l2/l1"};
    if (lambda_from_points(E, fin(0), fin(2), fin(3)) != r3.value)
      throw std::logic_error("strong-case Legendre identity failed");
  }

  ConstructionCertificate cert{base,
                               ext,
                               mode,
                               pts,
                               {EllipticModel(f1), EllipticModel(f2), third},
                               {LambdaRecord{l1, "(p3-p1)/(p2-p1)"}, LambdaRecord{l2, "(p4-p1)/(p2-p1)"}, r3},
                               {},
                               {0, 1, 2},
                               {}};
  cert.meets = meets_of(cert_sets(cert));
  for (int i = 0; i < 3; ++i) cert.traces[i] = trace(cert.models[i]);
  check_certificate(cert);
  return cert;
}

}  // namespace

ConstructionCertificate legendre_certificate(const FieldPtr& base, ArrangementCase mode, const Fel& l1,
                                             const Fel& l2) {
  const FieldPtr ext = quadratic_extension(base);
  const Field& E = *ext;
  const std::uint64_t q = base->order();
  const Fel one = E.one();
  for (const Fel& l : {l1, l2})
    if (E.is_zero(l) || l == one) throw MathError("Legendre coefficient must avoid 0 and 1");
  if (l1 == l2) throw MathError("Legendre coefficients must differ");
  std::array<Fel, 4> pts;
  if (mode == ArrangementCase::kStrong) {
    for (const Fel& l : {l1, l2})
      if (E.pow(l, q) != l) throw MathError("strong layout needs Legendre coefficients in F_q");
    pts = {E.zero(), one, l1, l2};
  } else {
    for (const Fel& l : {l1, l2})
      if (E.pow(l, q) != E.sub(one, l)) throw MathError("weak layout needs l^q = 1 - l");
    // p1, p2 = the square roots of the first non-square, lex order
    const Fel d = embed(base->first_nonsquare(), base, ext);
    const std::vector<Fel> roots = roots_in(Poly(ext, {E.neg(d), E.zero(), one}), ext);
    const Fel p1 = roots.at(0), p2 = roots.at(1), gap = E.sub(p2, p1);
    pts = {p1, p2, E.add(p1, E.mul(l1, gap)), E.add(p1, E.mul(l2, gap))};
  }
  return *certificate_from_points(base, ext, mode, pts, nullptr);
}

std::vector<ConstructionCertificate> arrangements(const EllipticModel& m1, const EllipticModel& m2,
                                                  const EllipticModel& m3) {
  if (m1.base() != m2.base() || m1.base() != m3.base()) throw MathError("models over different fields");
  if (isomorphic_curves(m1, m2) || isomorphic_curves(m1, m3) || isomorphic_curves(m2, m3))
    throw MathError("arrangement needs pairwise non-isomorphic curves");
  const RamSet R1 = ram_set(m1), R2 = ram_set(m2), R3 = ram_set(m3);
  const int c = R1.rational_count();
  if (c != R2.rational_count() || c != R3.rational_count() || (c != 2 && c != 4))
    throw MathError("arrangement needs equal rational 2-torsion counts in {2, 4}");
  const ArrangementCase mode = c == 2 ? ArrangementCase::kWeak : ArrangementCase::kStrong;
  const FieldPtr base = m1.base(), ext = R1.ext;
  const Field& E = *ext;
  const std::uint64_t q = base->order();
  auto is_rational = [&](const ProjPoint& P) { return frobenius(P, E, q) == P; };

  std::vector<ConstructionCertificate> out;
  for (const Mobius& sigma : alignments(m1, m2)) {
    const std::vector<ProjPoint> R2s = apply(sigma, R2.pts);
    std::vector<ProjPoint> shared, only1, only2;
    for (const auto& P : R1.pts) (std::find(R2s.begin(), R2s.end(), P) != R2s.end() ? shared : only1).push_back(P);
    for (const auto& P : R2s)
      if (std::find(R1.pts.begin(), R1.pts.end(), P) == R1.pts.end()) only2.push_back(P);
    const ProjPoint a = only1.front(), b = only2.front();

    // (u, v, w): u goes to infinity; R3 keeps u and v (strong) or v and w (weak)
    std::vector<std::array<ProjPoint, 3>> choices;
    if (mode == ArrangementCase::kWeak) {
      std::vector<ProjPoint> pair;
      ProjPoint u;
      for (const auto& P : shared) {
        if (is_rational(P))
          u = P;
        else
          pair.push_back(P);
      }
      if (pair.size() != 2) continue;
      choices.push_back({u, pair[0], pair[1]});
    } else {
      for (const auto& u : shared)
        for (const auto& v : shared) {
          if (u == v) continue;
          ProjPoint w;
          for (const auto& x : shared)
            if (x != u && x != v) w = x;
          choices.push_back({u, v, w});
        }
    }

    for (const auto& [u, v, w] : choices) {
      const Mobius tau = Mobius::send_to_infinity(ext, u);
      ProjPoint P1 = tau.apply(v), P2 = tau.apply(w);
      if (mode == ArrangementCase::kWeak && P2 < P1) std::swap(P1, P2);
      const std::array<Fel, 4> pts{*P1.x, *P2.x, *tau.apply(a).x, *tau.apply(b).x};
      std::optional<ConstructionCertificate> cert = certificate_from_points(base, ext, mode, pts, &m3);
      if (!cert) continue;
      const bool dup = std::any_of(out.begin(), out.end(), [&](const ConstructionCertificate& o) {
        return o.models[0] == cert->models[0] && o.models[1] == cert->models[1] && o.models[2] == cert->models[2];
      });
      if (!dup) out.push_back(std::move(*cert));
    }
  }
  return out;
}

ConstructionCertificate arrange_triple(const EllipticModel& m1, const EllipticModel& m2, const EllipticModel& m3) {
  auto all = arrangements(m1, m2, m3);
  if (all.empty()) throw MathError("no arrangement reproduces the third curve; the Legendre condition fails");
  return std::move(all.front());
}

// ---------------------------------------------------------------------------
// Consistency search

ClassCatalog::ClassCatalog(FieldPtr base) : ClassCatalog(base, enumerate_classes(base)) {}

ClassCatalog::ClassCatalog(FieldPtr base, std::vector<CurveClass> classes)
    : base_(std::move(base)), ext_(quadratic_extension(base_)) {
  const Field& E = *ext_;
  const std::uint64_t q = base_->order();
  for (auto& c : classes) {
    ClassInfo info{std::move(c), {}, {}};
    if (info.cls.two_torsion >= 2) {
      const RamSet R = ram_set(info.cls.representative);
      info.orbit = orbit(E, cross_ratio(E, R.pts[0], R.pts[1], R.pts[2], R.pts[3]));
      for (const Fel& l : info.orbit)
        if (info.cls.two_torsion == 4 || E.pow(l, q) == E.sub(E.one(), l)) info.usable.push_back(l);
    }
    info_.push_back(std::move(info));
  }
}

std::vector<const ClassInfo*> ClassCatalog::with(std::int64_t t, int two_torsion) const {
  std::vector<const ClassInfo*> out;
  for (const auto& c : info_)
    if (c.cls.t == t && c.cls.two_torsion == two_torsion) out.push_back(&c);
  return out;
}

std::vector<ArrangementCase> trace_triple_modes(std::uint64_t q, const std::array<std::int64_t, 3>& t,
                                               const SearchOptions& opt) {
  try {
    prime_power(q);
  } catch (const MathError& e) {
    throw InputError(e.what());
  }
  for (auto ti : t) {
    if (!hasse_bound_ok(q, ti))
      throw InputError("t = " + std::to_string(ti) + " violates the Hasse bound t^2 <= 4q for q = " + std::to_string(q));
    if (!waterhouse_admissible(q, ti))
      throw InputError("t = " + std::to_string(ti) + " satisfies none of the admissibility clauses (i)-(vi) for q = " +
                       std::to_string(q));
  }
  if (!opt.relaxed && (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]))
    throw InputError("traces must be distinct (use the relaxed mode to allow repeats)");
  std::array<std::uint64_t, 3> res{};
  for (int i = 0; i < 3; ++i) res[i] = static_cast<std::uint64_t>(static_cast<std::int64_t>(q + 1) + t[i]) % 4;
  const bool all0 = res == std::array<std::uint64_t, 3>{0, 0, 0};
  // strict: residues 2 / 0 pick weak / strong. relaxed: only the 2-torsion
  // counts matter, and a point count that is 0 mod 4 can still have 2-torsion 2.
  const bool weak_ok = opt.relaxed ? (res[0] | res[1] | res[2]) % 2 == 0 : res == std::array<std::uint64_t, 3>{2, 2, 2};
  auto residues = [&] {
    return std::to_string(res[0]) + ", " + std::to_string(res[1]) + ", " + std::to_string(res[2]);
  };
  const std::string weak_need = opt.relaxed ? "even" : "2 mod 4";
  switch (opt.mode) {
    case ModeRequest::kWeak:
      if (!weak_ok) throw NotConsistent("weak mode needs q + 1 + t " + weak_need + " for all three traces; got " + residues() + " mod 4");
      return {ArrangementCase::kWeak};
    case ModeRequest::kStrong:
      if (!all0) throw NotConsistent("strong mode needs q + 1 + t = 0 mod 4 for all three traces; got " + residues());
      return {ArrangementCase::kStrong};
    case ModeRequest::kAuto:
      if (all0 && weak_ok) return {ArrangementCase::kStrong, ArrangementCase::kWeak};
      if (all0) return {ArrangementCase::kStrong};
      if (weak_ok) return {ArrangementCase::kWeak};
      throw NotConsistent("q + 1 + t mod 4 is " + residues() + "; fits neither the weak (" + weak_need +
                          ") nor the strong (0 mod 4) split");
  }
  return {ArrangementCase::kStrong};
}

ArrangementCase check_trace_triple(std::uint64_t q, const std::array<std::int64_t, 3>& t, const SearchOptions& opt) {
  return trace_triple_modes(q, t, opt).front();
}

std::uint64_t for_each_witness(const ClassCatalog& cat, const std::array<std::int64_t, 3>& t, ArrangementCase mode,
                               const std::function<bool(const ConsistencyWitness&)>& visit) {
  const Field& E = *cat.ext();
  const int tt = mode == ArrangementCase::kWeak ? 2 : 4;
  const std::array<std::vector<const ClassInfo*>, 3> lists{cat.with(t[0], tt), cat.with(t[1], tt), cat.with(t[2], tt)};
  static constexpr std::array<std::array<int, 3>, 6> kPerms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::uint64_t examined = 0;
  for (const ClassInfo* c0 : lists[0])
    for (const ClassInfo* c1 : lists[1])
      for (const ClassInfo* c2 : lists[2]) {
        const std::array<const ClassInfo*, 3> cs{c0, c1, c2};
        if (c0->cls.j == c1->cls.j || c0->cls.j == c2->cls.j || c1->cls.j == c2->cls.j) continue;
        for (const auto& perm : kPerms) {
          const ClassInfo& A = *cs[perm[0]];
          const ClassInfo& B = *cs[perm[1]];
          const ClassInfo& C = *cs[perm[2]];
          for (const Fel& l1 : A.usable)
            for (const Fel& l2 : B.usable) {
              if (l1 == l2) continue;
              ++examined;
              const Fel v = mode == ArrangementCase::kWeak ? case1_lambda(E, l1, l2) : case2_lambda(E, l1, l2);
              if (!std::binary_search(C.orbit.begin(), C.orbit.end(), v)) continue;
              if (visit(ConsistencyWitness{mode, perm, {l1, l2, v}, cs})) return examined;
            }
        }
      }
  return examined;
}

ConsistencyWitness decide_consistency(const ClassCatalog& cat, const std::array<std::int64_t, 3>& t,
                                      const SearchOptions& opt) {
  std::optional<ConsistencyWitness> found;
  std::string tried;
  std::uint64_t n = 0;
  for (const ArrangementCase mode : trace_triple_modes(cat.base()->order(), t, opt)) {
    n += for_each_witness(cat, t, mode, [&](const ConsistencyWitness& w) {
      found = w;
      return true;
    });
    if (found) return *found;
    tried += (tried.empty() ? "" : "/") + std::string(case_name(mode));
  }
  throw NotConsistent("no " + tried + " Legendre-consistent witness; " + std::to_string(n) +
                      " candidate coefficient pairs examined");
}

Construction construct_from_traces(const ClassCatalog& cat, const std::array<std::int64_t, 3>& t,
                                   const SearchOptions& opt) {
  const Fel d = cat.base()->first_nonsquare();
  std::optional<Construction> result;
  std::uint64_t witnesses = 0, examined = 0;
  std::string tried;
  auto realize = [&](const ConsistencyWitness& w) {
    ++witnesses;
    const std::array<std::int64_t, 3> target{t[w.perm[0]], t[w.perm[1]], t[w.perm[2]]};
    ConstructionCertificate cert = legendre_certificate(cat.base(), w.mode, w.lambdas[0], w.lambdas[1]);
    for (int r = 0; r < 3; ++r) {
      if (!isomorphic_curves(cert.models[r], w.classes[w.perm[r]]->cls.representative))
        throw std::logic_error("Legendre layout does not reproduce the witness class");
      if (cert.traces[r] == target[r]) continue;
      // j = 0 or 1728 can leave a trace that no quadratic twist fixes
      if (cert.traces[r] != -target[r]) return false;
      cert.models[r] = quadratic_twist(cert.models[r], d);
      cert.traces[r] = trace(cert.models[r]);
      if (cert.traces[r] != target[r]) throw std::logic_error("quadratic twist did not flip the trace sign");
    }
    cert.input_index = w.perm;
    Genus3Cover cover = build_cover(cert);
    result = Construction{w, std::move(cert), std::move(cover)};
    return true;
  };
  for (const ArrangementCase mode : trace_triple_modes(cat.base()->order(), t, opt)) {
    examined += for_each_witness(cat, t, mode, realize);
    if (result) return std::move(*result);
    tried += (tried.empty() ? "" : "/") + std::string(case_name(mode));
  }
  if (witnesses == 0)
    throw NotConsistent("no " + tried + " Legendre-consistent witness; " + std::to_string(examined) +
                        " candidate coefficient pairs examined");
  throw NotConsistent(std::to_string(witnesses) +
                      " Legendre-consistent witnesses found but none is realized with the requested signed traces");
}

}  // namespace genus3
