#include "genus3/cli.hpp"

#include <algorithm>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "genus3/io.hpp"
#include "genus3/parallel.hpp"

namespace genus3::cli {

namespace {

using io::Json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::int64_t q = 0, p = 0, r = 1;
  CLI::Option *q_opt = nullptr, *p_opt = nullptr, *r_opt = nullptr;
  std::array<std::int64_t, 3> t{};
  std::array<CLI::Option*, 3> t_opt{};
  std::string mode = "auto";
  bool relaxed = false;
  unsigned max_k = 0;
  CLI::Option* k_opt = nullptr;
  std::string format = "json";
  std::string out_path, cache_dir, in_path;
  unsigned jobs = 0;
};

void add_field_options(CLI::App& sub, Config& c) {
  c.q_opt = sub.add_option("--q", c.q, "field size q = p^r, p odd, r <= 2");
  c.p_opt = sub.add_option("--p", c.p, "field characteristic (with --r)");
  c.r_opt = sub.add_option("--r", c.r, "extension degree, 1 or 2");
  c.q_opt->excludes(c.p_opt);
  c.r_opt->needs(c.p_opt);
}

void add_trace_options(CLI::App& sub, Config& c, bool required) {
  for (int i = 0; i < 3; ++i) {
    c.t_opt[i] = sub.add_option("--t" + std::to_string(i + 1), c.t[i], "trace of curve " + std::to_string(i + 1));
    if (required) c.t_opt[i]->required();
  }
}

void add_mode_options(CLI::App& sub, Config& c) {
  sub.add_option("--mode", c.mode, "weak, strong or auto")->check(CLI::IsMember({"weak", "strong", "auto"}));
  sub.add_flag("--relaxed", c.relaxed, "allow repeated traces; weak mode takes any even point count");
}

void add_common_options(CLI::App& sub, Config& c, bool tsv) {
  if (tsv)
    sub.add_option("--format", c.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
  else
    sub.add_option("--format", c.format, "json")->check(CLI::IsMember({"json"}));
  sub.add_option("--out", c.out_path, "write the result here (atomically) instead of stdout");
  sub.add_option("--jobs", c.jobs, "worker threads for counting (0 = all cores)");
  sub.add_option("--cache-dir", c.cache_dir, "directory for cached curve classes");
}

FieldPtr resolve_field(const Config& c) {
  std::uint64_t q = 0;
  if (c.q_opt->count()) {
    if (c.q < 3) throw InputError("q must be an odd prime power, got " + std::to_string(c.q));
    q = static_cast<std::uint64_t>(c.q);
  } else if (c.p_opt->count()) {
    if (c.p < 3 || c.r < 1 || c.r > 2) throw InputError("need an odd prime --p and --r in {1, 2}");
    q = ipow(static_cast<std::uint64_t>(c.p), static_cast<unsigned>(c.r));
  } else {
    throw UsageError("give --q or --p/--r");
  }
  PrimePower pq;
  try {
    pq = prime_power(q);
  } catch (const MathError& e) {
    throw InputError(e.what());
  }
  if (c.p_opt->count() && pq.p != static_cast<std::uint64_t>(c.p))
    throw InputError("--p " + std::to_string(c.p) + " is not prime");
  if (pq.r > 2) throw InputError("q = " + std::to_string(q) + " has r = " + std::to_string(pq.r) + "; only r <= 2 is supported");
  return base_field(pq);
}

std::array<std::int64_t, 3> traces(const Config& c) {
  for (auto* o : c.t_opt)
    if (!o->count()) throw UsageError("give --t1, --t2 and --t3");
  return c.t;
}

ModeRequest mode_of(const Config& c) {
  if (c.mode == "weak") return ModeRequest::kWeak;
  if (c.mode == "strong") return ModeRequest::kStrong;
  return ModeRequest::kAuto;
}

ClassCatalog catalog(const Config& c, const FieldPtr& base) {
  if (c.cache_dir.empty()) return ClassCatalog(base);
  if (auto cached = io::load_class_cache(c.cache_dir, base)) return ClassCatalog(base, std::move(*cached));
  std::vector<CurveClass> classes = enumerate_classes(base);
  io::save_class_cache(c.cache_dir, base, classes);
  return ClassCatalog(base, std::move(classes));
}

Json traces_json(const std::array<std::int64_t, 3>& t) {
  Json a = Json::array();
  for (auto v : t) a.push_back(io::int_json(v));
  return a;
}

void emit(const Config& c, std::ostream& out, const std::string& text) {
  if (c.out_path.empty())
    out << text;
  else
    io::write_atomic(c.out_path, text);
}

int cmd_admissible(const Config& c, std::ostream& out) {
  const FieldPtr F = resolve_field(c);
  const std::uint64_t q = F->order();
  std::ostringstream os;
  if (c.format == "tsv") {
    os << "t\tclause\n";
    for (auto t : admissible_traces(q)) os << t << '\t' << clause_label(*waterhouse_clause(q, t)) << '\n';
  } else {
    Json rows = Json::array();
    for (auto t : admissible_traces(q))
      rows.push_back(Json{{"t", io::int_json(t)}, {"clause", std::string(clause_label(*waterhouse_clause(q, t)))}});
    const Json doc{{"schema", io::kSchema}, {"command", "admissible"}, {"field", io::field_json(F)}, {"rows", rows}};
    os << doc.dump(2) << '\n';
  }
  emit(c, out, os.str());
  return kOk;
}

int cmd_enumerate(const Config& c, std::ostream& out) {
  const FieldPtr F = resolve_field(c);
  const ClassCatalog cat = catalog(c, F);
  const Field& E = *cat.ext();
  const std::vector<std::int64_t> ts = admissible_traces(F->order());
  const SearchOptions opt{mode_of(c), c.relaxed};
  std::ostringstream os;
  if (c.format == "tsv") os << "q\tt1\tt2\tt3\tmode\tperm\tlambda1\tlambda2\tlambda3\n";
  for (std::size_t a = 0; a < ts.size(); ++a)
    for (std::size_t b = a; b < ts.size(); ++b)
      for (std::size_t d = b; d < ts.size(); ++d) {
        if (!c.relaxed && (a == b || b == d)) continue;
        const std::array<std::int64_t, 3> t{ts[a], ts[b], ts[d]};
        ConsistencyWitness w;
        try {
          w = decide_consistency(cat, t, opt);
        } catch (const NotConsistent&) {
          continue;
        }
        if (c.format == "tsv") {
          os << F->order() << '\t' << t[0] << '\t' << t[1] << '\t' << t[2] << '\t' << case_name(w.mode) << '\t'
             << w.perm[0] + 1 << w.perm[1] + 1 << w.perm[2] + 1;
          for (const Fel& l : w.lambdas) os << '\t' << E.to_string(l);
          os << '\n';
        } else {
          const Json line{{"schema", io::kSchema},
                          {"q", io::int_json(static_cast<std::int64_t>(F->order()))},
                          {"traces", traces_json(t)},
                          {"relaxed", c.relaxed},
                          {"witness", io::witness_json(cat, w)}};
          os << line.dump() << '\n';
        }
      }
  emit(c, out, os.str());
  return kOk;
}

Json construction_json(const ClassCatalog& cat, const Construction& k, const std::array<std::int64_t, 3>& t,
                       bool relaxed) {
  const std::uint64_t q = cat.base()->order();
  return Json{{"schema", io::kSchema},
              {"command", "construct"},
              {"traces", traces_json(t)},
              {"relaxed", relaxed},
              {"witness", io::witness_json(cat, k.witness)},
              {"certificate", io::certificate_json(k.cert)},
              {"cover", io::cover_json(k.cover, k.cert.traces)},
              {"claimed_char_poly", io::lpoly_json(claimed_char_poly(q, k.cert.traces))},
              {"claimed_lpoly", io::lpoly_json(claimed_lpoly(q, k.cert.traces).c)}};
}

int cmd_construct(const Config& c, std::ostream& out) {
  const FieldPtr F = resolve_field(c);
  const auto t = traces(c);
  check_trace_triple(F->order(), t, {mode_of(c), c.relaxed});  // fail fast, before enumeration
  const ClassCatalog cat = catalog(c, F);
  const Construction k = construct_from_traces(cat, t, {mode_of(c), c.relaxed});
  emit(c, out, construction_json(cat, k, t, c.relaxed).dump(2) + "\n");
  return kOk;
}

io::CoverInput verify_input(const Config& c) {
  if (!c.in_path.empty()) {
    std::string text;
    if (c.in_path == "-") {
      text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
      text = io::read_file(c.in_path);
    }
    return io::cover_from_json(io::parse(text));
  } else {
    const FieldPtr F = resolve_field(c);
    const auto t = traces(c);
    check_trace_triple(F->order(), t, {mode_of(c), c.relaxed});
    const ClassCatalog cat = catalog(c, F);
    const Construction k = construct_from_traces(cat, t, {mode_of(c), c.relaxed});
    return io::CoverInput{k.cover, k.cert.traces};
  }
}

int cmd_verify(const Config& c, std::ostream& out) {
  const io::CoverInput in = verify_input(c);
  const unsigned K = c.k_opt->count() ? c.max_k : default_max_k(in.cover.base->order());
  if (K < 1 || K > 6) throw InputError("--max-k must lie in 1..6");
  const ZetaReport r = verify(in.cover, in.traces, K);
  std::ostringstream os;
  if (c.format == "tsv") {
    os << "k\tN_k\tE_k\n";
    for (unsigned k = 0; k < r.counts.size(); ++k) os << k + 1 << '\t' << r.counts[k] << '\t' << r.expected[k] << '\n';
    os << "verdict\t" << verdict_name(r.verdict) << '\t' << r.detail << '\n';
  } else {
    os << io::report_json(r).dump(2) << '\n';
  }
  emit(c, out, os.str());
  return r.verdict == Verdict::kMatch ? kOk : kMismatch;
}

int cmd_zeta(const Config& c, std::ostream& out) {
  const FieldPtr F = resolve_field(c);
  const std::uint64_t q = F->order();
  const auto t = traces(c);
  for (auto ti : t) {
    if (!hasse_bound_ok(q, ti))
      throw InputError("t = " + std::to_string(ti) + " violates the Hasse bound t^2 <= 4q for q = " + std::to_string(q));
    if (!waterhouse_admissible(q, ti))
      throw InputError("t = " + std::to_string(ti) + " satisfies none of the admissibility clauses (i)-(vi)");
  }
  Json counts = Json::array();
  for (unsigned k = 1; k <= 6; ++k) {
    try {
      counts.push_back(Json{{"k", k}, {"N", io::int_json(expected_count(q, t, k))}});
    } catch (const MathError&) {
      break;  // past 64 bits
    }
  }
  const LPoly P = claimed_lpoly(q, t);
  const Json doc{{"schema", io::kSchema},
                 {"command", "zeta"},
                 {"q", io::int_json(static_cast<std::int64_t>(q))},
                 {"traces", traces_json(t)},
                 {"char_poly", io::lpoly_json(claimed_char_poly(q, t))},
                 {"lpoly", io::lpoly_json(P.c)},
                 {"lpoly_text", to_string(P)},
                 {"expected_counts", counts}};
  emit(c, out, doc.dump(2) + "\n");
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Genus-3 curves with split Jacobians from three elliptic curves", "genus3"};
  app.require_subcommand(1);
  // one Config per subcommand; option pointers differ
  Config ca, ce, cc, cv, cz;

  CLI::App* adm = app.add_subcommand("admissible", "list admissible Frobenius traces for q");
  add_field_options(*adm, ca);
  add_common_options(*adm, ca, true);

  CLI::App* en = app.add_subcommand("enumerate-triples", "list Legendre-consistent trace triples");
  add_field_options(*en, ce);
  add_mode_options(*en, ce);
  add_common_options(*en, ce, true);

  CLI::App* con = app.add_subcommand("construct", "build the genus-3 cover for a trace triple");
  add_field_options(*con, cc);
  add_trace_options(*con, cc, true);
  add_mode_options(*con, cc);
  add_common_options(*con, cc, false);

  CLI::App* ver = app.add_subcommand("verify", "count points of a cover and compare with the claimed zeta function");
  add_field_options(*ver, cv);
  add_trace_options(*ver, cv, false);
  add_mode_options(*ver, cv);
  ver->add_option("--in", cv.in_path, "cover or construct JSON ('-' for stdin)");
  cv.k_opt = ver->add_option("--max-k", cv.max_k, "count over F_{q^k} for k <= K (6 gives full reconstruction)");
  add_common_options(*ver, cv, true);

  CLI::App* zet = app.add_subcommand("zeta", "claimed characteristic polynomial and point counts");
  add_field_options(*zet, cz);
  add_trace_options(*zet, cz, true);
  add_common_options(*zet, cz, false);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kFormatError;
  }

  try {
    const std::array<std::pair<CLI::App*, Config*>, 5> subs{{{adm, &ca}, {en, &ce}, {con, &cc}, {ver, &cv}, {zet, &cz}}};
    for (auto [app_i, cfg] : subs) {
      if (!app_i->parsed()) continue;
      set_parallelism(cfg->jobs);
      if (app_i == adm) return cmd_admissible(*cfg, out);
      if (app_i == en) return cmd_enumerate(*cfg, out);
      if (app_i == con) return cmd_construct(*cfg, out);
      if (app_i == ver) return cmd_verify(*cfg, out);
      return cmd_zeta(*cfg, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kFormatError;
  } catch (const io::FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kFormatError;
  } catch (const NotConsistent& e) {
    err << "not consistent: " << e.what() << '\n';
    return kNotConsistent;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const MathError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const CapExceeded& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kFormatError;
}

}  // namespace genus3::cli
