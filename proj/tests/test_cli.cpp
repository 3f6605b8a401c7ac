#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "genus3/cli.hpp"
#include "genus3/io.hpp"

using namespace genus3;
using io::Json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("genus3-cli-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::int64_t> digits(const Json& fel) { return fel.get<std::vector<std::int64_t>>(); }

}  // namespace

TEST_CASE("admissible") {
  auto r = run({"admissible", "--q", "7"});
  REQUIRE(r.code == cli::kOk);
  Json d = Json::parse(r.out);
  REQUIRE(d["rows"].size() == 11);
  for (std::size_t i = 0; i < 11; ++i) CHECK(d["rows"][i]["t"] == std::to_string(static_cast<int>(i) - 5));
  CHECK(d["rows"][5]["clause"] == "v");

  r = run({"admissible", "--q", "9", "--format", "tsv"});
  REQUIRE(r.code == cli::kOk);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> ts;
  std::getline(lines, line);
  while (std::getline(lines, line)) ts.push_back(line.substr(0, line.find('\t')));
  CHECK(ts == std::vector<std::string>{"-6", "-5", "-4", "-3", "-2", "-1", "0", "1", "2", "3", "4", "5", "6"});

  CHECK(run({"admissible", "--q", "8"}).code == cli::kInvalidInput);
  CHECK(run({"admissible", "--q", "15"}).code == cli::kInvalidInput);
  CHECK(run({"admissible", "--q", "27"}).code == cli::kInvalidInput);  // r = 3
  CHECK(run({"admissible", "--p", "3", "--r", "2"}).code == cli::kOk);
  CHECK(run({"admissible"}).code == cli::kFormatError);
  CHECK(run({"admissible", "--q", "7", "--p", "7"}).code == cli::kFormatError);
  CHECK(run({"nonsense"}).code == cli::kFormatError);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("enumerate-triples") {
  auto r = run({"enumerate-triples", "--q", "13", "--mode", "strong", "--relaxed"});
  REQUIRE(r.code == cli::kOk);
  bool found = false;
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) {
    const Json d = Json::parse(line);
    CHECK(d["witness"]["mode"] == "strong");
    if (d["traces"] == Json{"-6", "2", "2"}) found = true;
  }
  CHECK(found);

  r = run({"enumerate-triples", "--q", "7", "--mode", "strong"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.empty());

  CHECK(run({"enumerate-triples", "--q", "7", "--mode", "bogus"}).code == cli::kFormatError);

  r = run({"enumerate-triples", "--q", "13", "--mode", "strong", "--relaxed", "--format", "tsv"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("13\t-6\t2\t2\tstrong") != std::string::npos);
}

TEST_CASE("construct, verify and exit codes") {
  auto r = run({"construct", "--q", "13", "--t1", "-6", "--t2", "2", "--t3", "2", "--relaxed"});
  REQUIRE(r.code == cli::kOk);
  const Json doc = Json::parse(r.out);
  const Json& cert = doc["certificate"];
  CHECK(cert["case"] == "strong");
  REQUIRE(cert["points"].size() == 4);
  // points live in F_{q^2}
  CHECK(digits(cert["points"][0]["x"]) == std::vector<std::int64_t>{0, 0});
  CHECK(digits(cert["points"][1]["x"]) == std::vector<std::int64_t>{1, 0});
  CHECK(digits(cert["points"][2]["x"])[1] == 0);
  CHECK(digits(cert["points"][3]["x"])[1] == 0);
  const auto l1 = digits(cert["points"][2]["x"])[0], l2 = digits(cert["points"][3]["x"])[0];
  // f3 = c x (x - l1) (x - l2), constant first; c = 1 or the twist 2
  const Json& f3 = doc["cover"]["f"][2];
  REQUIRE(f3.size() == 4);
  const auto c = digits(f3[3])[0];
  CHECK((c == 1 || c == 2));
  CHECK(digits(f3[0])[0] == 0);
  CHECK(digits(f3[1])[0] == c * l1 * l2 % 13);
  CHECK(digits(f3[2])[0] == c * (26 - l1 - l2) % 13);
  CHECK(doc["cover"]["genus"] == 3);
  CHECK(doc["cover"]["ramification_points"] == 5);
  CHECK(doc["claimed_char_poly"] == Json{"2197", "-338", "247", "-76", "19", "-2", "1"});

  // byte-stable
  CHECK(run({"construct", "--q", "13", "--t1", "-6", "--t2", "2", "--t3", "2", "--relaxed"}).out == r.out);

  const auto dir = scratch("construct");
  const auto path = (dir / "c.json").string();
  REQUIRE(run({"construct", "--q", "13", "--t1", "-6", "--t2", "2", "--t3", "2", "--relaxed", "--out", path}).code ==
          cli::kOk);
  CHECK(io::read_file(path) == r.out);
  CHECK(!std::filesystem::exists(path + ".tmp"));

  auto v = run({"verify", "--in", path, "--max-k", "6"});
  CHECK(v.code == cli::kOk);
  const Json rep = Json::parse(v.out);
  CHECK(rep["verdict"] == "Match");
  CHECK(rep["counts"][0] == "12");
  CHECK(rep["counts"][1] == "204");
  CHECK(rep["reconstructed"] == Json{"1", "-2", "19", "-76", "247", "-338", "2197"});

  // inline traces: construct then verify
  v = run({"verify", "--q", "13", "--t1", "-6", "--t2", "2", "--t3", "2", "--relaxed", "--max-k", "2"});
  CHECK(v.code == cli::kOk);

  // twisted f3 (2 is a non-square mod 13)
  Json twisted = doc;
  for (auto& c : twisted["cover"]["f"][2]) c[0] = (c[0].get<int>() * 2) % 13;
  io::write_atomic(dir / "t.json", twisted.dump());
  v = run({"verify", "--in", (dir / "t.json").string(), "--max-k", "2"});
  CHECK(v.code == cli::kMismatch);
  CHECK(Json::parse(v.out)["verdict"] == "CountMismatch");
  CHECK(Json::parse(v.out)["mismatch_k"] == 1);

  // truncated and malformed
  io::write_atomic(dir / "bad.json", r.out.substr(0, r.out.size() / 2));
  CHECK(run({"verify", "--in", (dir / "bad.json").string()}).code == cli::kFormatError);
  Json wrong = doc;
  wrong["cover"]["f"][0][0] = Json{99};
  io::write_atomic(dir / "w.json", wrong.dump());
  CHECK(run({"verify", "--in", (dir / "w.json").string()}).code == cli::kFormatError);
  CHECK(run({"verify", "--in", (dir / "missing.json").string()}).code == cli::kFormatError);
  CHECK(run({"verify", "--in", path, "--max-k", "7"}).code == cli::kInvalidInput);

  // bad union: f3 replaced by f1
  Json same = doc;
  same["cover"]["f"][2] = same["cover"]["f"][0];
  io::write_atomic(dir / "s.json", same.dump());
  CHECK(run({"verify", "--in", (dir / "s.json").string()}).code == cli::kInvalidInput);

  CHECK(run({"construct", "--q", "7", "--t1", "1", "--t2", "2", "--t3", "3"}).code == cli::kNotConsistent);
  auto h = run({"construct", "--q", "7", "--t1", "6", "--t2", "1", "--t3", "2"});
  CHECK(h.code == cli::kInvalidInput);
  CHECK(h.err.find("Hasse") != std::string::npos);
  CHECK(run({"construct", "--q", "13", "--t1", "-6", "--t2", "2"}).code == cli::kFormatError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("class cache round trip") {
  const auto dir = scratch("cache");
  const std::vector<std::string> args{"enumerate-triples", "--q", "13", "--relaxed", "--cache-dir", dir.string()};
  const auto plain = run({"enumerate-triples", "--q", "13", "--relaxed"});
  const auto first = run(args);
  CHECK(std::filesystem::exists(dir / "classes-q13.json"));
  const auto second = run(args);
  CHECK(first.code == cli::kOk);
  CHECK(first.out == plain.out);
  CHECK(second.out == plain.out);

  // stale cache version is ignored and rewritten
  Json cache = Json::parse(io::read_file(dir / "classes-q13.json"));
  cache["cache_version"] = 999;
  io::write_atomic(dir / "classes-q13.json", cache.dump());
  CHECK(run(args).out == plain.out);
  CHECK(Json::parse(io::read_file(dir / "classes-q13.json"))["cache_version"] == io::kClassCacheVersion);
  std::filesystem::remove_all(dir);
}

TEST_CASE("zeta") {
  auto r = run({"zeta", "--q", "13", "--t1", "-6", "--t2", "2", "--t3", "2"});
  REQUIRE(r.code == cli::kOk);
  const Json d = Json::parse(r.out);
  CHECK(d["char_poly"] == Json{"2197", "-338", "247", "-76", "19", "-2", "1"});
  CHECK(d["lpoly"] == Json{"1", "-2", "19", "-76", "247", "-338", "2197"});
  CHECK(d["expected_counts"][0]["N"] == "12");
  CHECK(d["expected_counts"][1]["N"] == "204");
  CHECK(d["expected_counts"].size() == 6);

  const Json z = Json::parse(run({"zeta", "--q", "11", "--t1", "0", "--t2", "0", "--t3", "0"}).out);
  CHECK(z["expected_counts"][0]["N"] == "12");
  CHECK(z["char_poly"] == Json{"1331", "0", "363", "0", "33", "0", "1"});

  CHECK(run({"zeta", "--q", "7", "--t1", "6", "--t2", "0", "--t3", "1"}).code == cli::kInvalidInput);
}
