#include "genus3/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace genus3::io {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<std::uint32_t> modulus_digits(const Field& F) { return F.modulus(); }

std::filesystem::path cache_file(const std::filesystem::path& dir, std::uint64_t q) {
  return dir / ("classes-q" + std::to_string(q) + ".json");
}

}  // namespace

Json int_json(std::int64_t v) { return std::to_string(v); }

std::int64_t int_from(const Json& j) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (!j.is_string()) throw FormatError("expected an integer as a decimal string");
  const auto& s = j.get_ref<const std::string&>();
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw FormatError("not a decimal integer: \"" + s + "\"");
  return v;
}

Json fel_json(const Field& F, const Fel& u) { return F.digits(u); }

Fel fel_from(const Field& F, const Json& j) {
  if (!j.is_array() || j.size() != F.degree())
    throw FormatError("field element needs " + std::to_string(F.degree()) + " digits");
  std::vector<std::uint32_t> d;
  for (const auto& x : j) {
    if (!x.is_number_unsigned() && !x.is_number_integer()) throw FormatError("field digit is not an integer");
    const auto v = x.get<std::int64_t>();
    if (v < 0 || v >= static_cast<std::int64_t>(F.p())) throw FormatError("field digit out of range");
    d.push_back(static_cast<std::uint32_t>(v));
  }
  return F.from_digits(d);
}

Json point_json(const Field& F, const ProjPoint& P) {
  if (P.is_infinity()) return "inf";
  return Json{{"x", fel_json(F, *P.x)}};
}

Json poly_json(const Poly& f) {
  Json a = Json::array();
  for (const Fel& c : f.coeffs()) a.push_back(fel_json(*f.field(), c));
  return a;
}

Poly poly_from(const FieldPtr& F, const Json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("polynomial must be a nonempty coefficient array");
  std::vector<Fel> c;
  for (const auto& x : j) c.push_back(fel_from(*F, x));
  if (c.back() == Fel{}) throw FormatError("polynomial has a zero leading coefficient");
  return Poly(F, c);
}

Json lpoly_json(const std::vector<std::int64_t>& c) {
  Json a = Json::array();
  for (auto v : c) a.push_back(int_json(v));
  return a;
}

Json field_json(const FieldPtr& base) {
  const FieldPtr ext = quadratic_extension(base);
  return Json{{"q", int_json(static_cast<std::int64_t>(base->order()))},
              {"p", int_json(base->p())},
              {"r", int_json(base->degree())},
              {"modulus", modulus_digits(*base)},
              {"ext_modulus", modulus_digits(*ext)}};
}

FieldPtr field_from(const Json& j) {
  FieldPtr F;
  try {
    if (j.contains("q")) {
      F = base_field(prime_power(static_cast<std::uint64_t>(int_from(j.at("q")))));
    } else {
      const auto p = int_from(need(j, "p")), r = int_from(need(j, "r"));
      if (p < 3 || r < 1 || r > 2) throw MathError("field needs an odd prime p and r in {1, 2}");
      F = base_field(prime_power(ipow(static_cast<std::uint64_t>(p), static_cast<unsigned>(r))));
    }
  } catch (const MathError& e) {
    throw FormatError(std::string("bad field: ") + e.what());
  }
  if (j.contains("p") && int_from(j.at("p")) != F->p()) throw FormatError("field p disagrees with q");
  if (j.contains("r") && int_from(j.at("r")) != F->degree()) throw FormatError("field r disagrees with q");
  if (j.contains("modulus") && j.at("modulus") != Json(modulus_digits(*F)))
    throw FormatError("field modulus differs from the canonical one");
  if (j.contains("ext_modulus") && j.at("ext_modulus") != Json(modulus_digits(*quadratic_extension(F))))
    throw FormatError("extension modulus differs from the canonical one");
  return F;
}

Json class_json(const Field& F, const CurveClass& c) {
  return Json{{"t", int_json(c.t)},
              {"j", fel_json(F, c.j)},
              {"two_torsion", int_json(c.two_torsion)},
              {"model", poly_json(c.representative.f())}};
}

CurveClass class_from(const FieldPtr& base, const Json& j) {
  try {
    EllipticModel m(poly_from(base, need(j, "model")));
    return CurveClass{fel_from(*base, need(j, "j")), int_from(need(j, "t")),
                      static_cast<int>(int_from(need(j, "two_torsion"))), std::move(m)};
  } catch (const MathError& e) {
    throw FormatError(std::string("bad curve class: ") + e.what());
  }
}

Json witness_json(const ClassCatalog& cat, const ConsistencyWitness& w) {
  const Field& E = *cat.ext();
  Json lambdas = Json::array(), classes = Json::array();
  for (const Fel& l : w.lambdas) lambdas.push_back(fel_json(E, l));
  for (const ClassInfo* c : w.classes) classes.push_back(class_json(*cat.base(), c->cls));
  return Json{{"mode", std::string(case_name(w.mode))},
              {"perm", w.perm},
              {"lambdas", lambdas},
              {"classes", classes}};
}

Json certificate_json(const ConstructionCertificate& c) {
  const Field& E = *c.ext;
  Json pts = Json::array(), models = Json::array(), lambdas = Json::array(), traces = Json::array();
  for (const Fel& u : c.points) pts.push_back(point_json(E, ProjPoint::finite(u)));
  for (const auto& m : c.models) models.push_back(poly_json(m.f()));
  for (const auto& l : c.lambdas) lambdas.push_back(Json{{"value", fel_json(E, l.value)}, {"formula", l.provenance}});
  for (auto t : c.traces) traces.push_back(int_json(t));
  return Json{{"case", std::string(case_name(c.arrangement))},
              {"field", field_json(c.base)},
              {"infinity", "inf"},
              {"points", pts},
              {"models", models},
              {"lambdas", lambdas},
              {"traces", traces},
              {"input_index", c.input_index},
              {"intersections",
               Json{{"pairwise", c.meets.pairwise}, {"triple", c.meets.triple}, {"union", c.meets.union_size}}}};
}

Json cover_json(const Genus3Cover& cover, const std::array<std::int64_t, 3>& traces) {
  Json f = Json::array(), t = Json::array();
  for (const auto& g : cover.f) f.push_back(poly_json(g));
  for (auto v : traces) t.push_back(int_json(v));
  Json out = field_json(cover.base);
  out["f"] = f;
  out["traces"] = t;
  out["ramification_points"] = cover.ram_union;
  out["genus"] = hurwitz_genus(cover.ram_union);
  return out;
}

Json report_json(const ZetaReport& r) {
  Json t = Json::array();
  for (auto v : r.traces) t.push_back(int_json(v));
  return Json{{"schema", kSchema},
              {"command", "verify"},
              {"q", int_json(static_cast<std::int64_t>(r.q))},
              {"traces", t},
              {"K", r.max_k},
              {"counts", lpoly_json(r.counts)},
              {"expected", lpoly_json(r.expected)},
              {"reconstructed", r.reconstructed ? lpoly_json(r.reconstructed->c) : Json(nullptr)},
              {"claimed", lpoly_json(r.claimed.c)},
              {"claimed_char_poly", lpoly_json(reversal(r.claimed))},
              {"verdict", std::string(verdict_name(r.verdict))},
              {"mismatch_k", r.mismatch_k},
              {"detail", r.detail}};
}

CoverInput cover_from_json(const Json& doc) {
  try {
    const Json& c = doc.is_object() && doc.contains("cover") ? doc.at("cover") : doc;
    if (doc.contains("schema") && int_from(doc.at("schema")) != kSchema) throw FormatError("unsupported schema version");
    const FieldPtr F = field_from(c);
    const Json& f = need(c, "f");
    const Json& t = need(c, "traces");
    if (!f.is_array() || f.size() != 3 || !t.is_array() || t.size() != 3)
      throw FormatError("cover needs three polynomials and three traces");
    const std::array<std::int64_t, 3> tr{int_from(t[0]), int_from(t[1]), int_from(t[2])};
    return CoverInput{make_cover({poly_from(F, f[0]), poly_from(F, f[1]), poly_from(F, f[2])}), tr};
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed cover: ") + e.what());
  }
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw FormatError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw FormatError("cannot move output into " + path.string());
  }
}

std::optional<std::vector<CurveClass>> load_class_cache(const std::filesystem::path& dir, const FieldPtr& base) {
  const auto file = cache_file(dir, base->order());
  if (!std::filesystem::exists(file)) return std::nullopt;
  try {
    const Json doc = parse(read_file(file));
    if (int_from(need(doc, "schema")) != kSchema || int_from(need(doc, "cache_version")) != kClassCacheVersion)
      return std::nullopt;
    if (field_from(need(doc, "field")) != base) return std::nullopt;
    std::vector<CurveClass> out;
    for (const auto& c : need(doc, "classes")) out.push_back(class_from(base, c));
    return out;
  } catch (const FormatError&) {
    return std::nullopt;
  } catch (const Json::exception&) {
    return std::nullopt;
  }
}

void save_class_cache(const std::filesystem::path& dir, const FieldPtr& base, const std::vector<CurveClass>& classes) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw FormatError("cannot create cache directory " + dir.string());
  Json list = Json::array();
  for (const auto& c : classes) list.push_back(class_json(*base, c));
  const Json doc{{"schema", kSchema}, {"cache_version", kClassCacheVersion}, {"field", field_json(base)}, {"classes", list}};
  write_atomic(cache_file(dir, base->order()), doc.dump(1) + "\n");
}

}  // namespace genus3::io
