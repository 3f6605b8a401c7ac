#pragma once

// JSON encoding (schema 1): field elements are arrays of base-p digits,
// constant first; points are {"x": [...]} or "inf"; polynomials are arrays of
// elements; other integers are decimal strings.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "genus3/construct.hpp"
#include "genus3/zeta.hpp"

namespace genus3::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchema = 1;
inline constexpr int kClassCacheVersion = 1;

// Malformed or unreadable input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json int_json(std::int64_t v);
std::int64_t int_from(const Json& j);

Json fel_json(const Field& F, const Fel& u);
Fel fel_from(const Field& F, const Json& j);
Json point_json(const Field& F, const ProjPoint& P);
Json poly_json(const Poly& f);
Poly poly_from(const FieldPtr& F, const Json& j);
Json lpoly_json(const std::vector<std::int64_t>& c);

// {"p", "r", "q"} plus the moduli of F_q and F_{q^2} (over F_p).
Json field_json(const FieldPtr& base);
// Reads "q" (or "p"/"r") and checks any moduli given.
FieldPtr field_from(const Json& j);

Json class_json(const Field& F, const CurveClass& c);
CurveClass class_from(const FieldPtr& base, const Json& j);
Json witness_json(const ClassCatalog& cat, const ConsistencyWitness& w);
Json certificate_json(const ConstructionCertificate& c);
// traces in role order
Json cover_json(const Genus3Cover& cover, const std::array<std::int64_t, 3>& traces);
Json report_json(const ZetaReport& r);

struct CoverInput {
  Genus3Cover cover;
  std::array<std::int64_t, 3> traces{};
};
// Accepts a cover object or a construct document holding one under "cover".
// FormatError on malformed JSON; StructureError if the polynomials do not
// form a genus-3 cover.
CoverInput cover_from_json(const Json& doc);

Json parse(const std::string& text);
std::string read_file(const std::filesystem::path& path);
// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& text);

// One file per q; a missing, unreadable or stale file gives nullopt.
std::optional<std::vector<CurveClass>> load_class_cache(const std::filesystem::path& dir, const FieldPtr& base);
void save_class_cache(const std::filesystem::path& dir, const FieldPtr& base, const std::vector<CurveClass>& classes);

}  // namespace genus3::io
