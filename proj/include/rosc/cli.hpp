#pragma once

// chabauty command-line driver.

#include <boost/program_options.hpp>
#include <chrono>
#include <cstdlib>
#include <iostream>

#include "rosc/report.hpp"
#include "rosc/sieve.hpp"

namespace rosc {

namespace cli {

constexpr int kSchemaVersion = 1;

struct Ctx {
  Config cfg;
  ContentCache* cache;
  ResidueFieldProvider provider;
  std::vector<std::string> warnings;
};

inline NumberField parse_field_spec(const std::string& spec, const std::string& label = {}) {
  if (spec == "Q" || spec == "QQ") return rationals();
  auto c = parse_long_list(spec);
  return parse_number_field(std::vector<Int>(c.begin(), c.end()), label);
}

inline KPoly parse_kpoly(const NumberField& K, const std::string& s) {
  std::vector<NfElem> v;
  for (const auto& t : split_top(s)) v.push_back(parse_element(K, t));
  if (v.empty()) throw Error(Errc::Usage, "empty polynomial");
  return KPoly(std::move(v));
}

inline std::string require(const Config& c, const std::string& k) {
  auto v = c.get(k);
  if (!v) throw Error(Errc::Usage, "missing required key '" + k + "'");
  return *v;
}

inline SubfieldTower tower_from(const Config& c) {
  std::vector<NumberField> chain;
  std::vector<QPoly> emb;
  for (const auto* b : c.blocks_named("field")) {
    auto poly = b->get("poly");
    if (!poly) throw Error(Errc::Usage, "[field] block needs poly");
    chain.push_back(parse_field_spec(*poly, b->get("label").value_or("")));
    if (chain.size() > 1) {
      auto e = b->get("embedding");
      if (!e) throw Error(Errc::Usage, "[field] block " + chain.back().label() + " needs embedding");
      emb.push_back(parse_qpoly_list("[" + *e + "]"));
    }
  }
  if (chain.empty()) {
    auto K = parse_field_spec(c.get_or("field", "Q"), c.get_or("label", ""));
    if (K.degree() == 1) chain = {K};
    else {
      chain = {rationals(), K};
      emb = {QPoly()};
    }
  }
  return SubfieldTower(chain, emb);
}

inline NumberField base_field(const Config& c) {
  if (auto f = c.get("field")) return parse_field_spec(*f, c.get_or("label", ""));
  auto blocks = c.blocks_named("field");
  if (!blocks.empty()) return tower_from(c)[blocks.size() - 1];
  return rationals();
}

inline SSpec s_from(const Config& c) { return SSpec(parse_long_list(c.get_or("S", ""))); }

inline std::vector<Subfield> subfields_from(const Config& c, const NumberField& K) {
  std::vector<Subfield> v;
  for (const auto* b : c.blocks_named("subfield")) {
    auto poly = b->get("poly");
    auto img = b->get("image");
    if (!poly || !img) throw Error(Errc::Usage, "[subfield] block needs poly and image");
    v.push_back({parse_field_spec(*poly, b->get("label").value_or("")), parse_qpoly_list("[" + *img + "]")});
  }
  validate_subfields(K, v);
  return v;
}

inline PuncturedCurve curve_from(Ctx& x, const NumberField& K) {
  KPoly d = parse_kpoly(K, require(x.cfg, "divisor"));
  bool inf = parse_bool(x.cfg.get_or("infinity", "false"));
  return make_curve(K, s_from(x.cfg), d, inf, x.cfg.get_or("curve", ""), x.provider);
}

inline Json opt_int(const std::optional<int>& v) { return v ? Json(*v) : Json(); }

inline Json field_json(const NumberField& K) {
  return {{"label", K.label()},
          {"poly", coeff_list(K.defining_poly())},
          {"degree", K.degree()},
          {"r1", K.r1()},
          {"r2", K.r2()},
          {"poly_discriminant", int_json(K.poly_discriminant())}};
}

// ---- subcommands: each returns the results payload and sets the exit code ----

inline Json cmd_field(Ctx& x, int& code) {
  auto K = parse_field_spec(x.cfg.get_or("field", x.cfg.get_or("poly", "Q")), x.cfg.get_or("label", ""));
  Json r = field_json(K);
  SSpec S = s_from(x.cfg);
  r["s_unit_rank"] = s_unit_rank(K, S);
  Json rows = Json::array();
  for (long p : parse_long_list(x.cfg.get_or("primes", x.cfg.get_or("S", "")))) {
    Json row{{"prime", p}};
    try {
      auto sp = splitting_profile(K, p);
      std::string f;
      for (int d : sp.residue_degrees) f += (f.empty() ? "" : ",") + std::to_string(d);
      row["residue_degrees"] = f;
      row["status"] = "unramified";
    } catch (const Error& e) {
      if (e.code() != Errc::IndexObstruction) throw;
      row["residue_degrees"] = Json();
      row["status"] = "IndexObstruction";
    }
    rows.push_back(row);
  }
  r["rows"] = rows;
  code = 0;
  return r;
}

inline Json cmd_jacobian(Ctx& x, int& code) {
  auto K = base_field(x.cfg);
  auto c = curve_from(x, K);
  auto a = jacobian_profile(c);
  auto b = jacobian_profile_orbit_form(c);
  Json r{{"field", field_json(K)},
         {"dim", a.dim},
         {"rank", a.rank},
         {"galois_orbits", a.galois_orbits},
         {"orbit_form_dim", b.dim},
         {"orbit_form_rank", b.rank},
         {"forms_agree", a.dim == b.dim && a.rank == b.rank}};
  Json rows = Json::array();
  for (std::size_t i = 0; i < c.orbits.size(); ++i) {
    const auto& o = c.orbits[i];
    const auto& op = a.per_orbit[i];
    rows.push_back({{"orbit", o.at_infinity() ? std::string("inf") : kpoly_string(*o.relative_poly)},
                    {"degree", op.degree},
                    {"residue_field", coeff_list(o.residue_field.defining_poly())},
                    {"r1", op.residue_signature.r1},
                    {"r2", op.residue_signature.r2},
                    {"s_unit_rank", op.s_unit_rank},
                    {"places_above_S", op.places_above_S}});
  }
  r["rows"] = rows;
  code = r["forms_agree"].get<bool>() ? 0 : 1;
  return r;
}

inline std::string class_string(const IsogenyClass& c) {
  std::string s;
  for (const auto& f : c.factors) {
    if (!s.empty()) s += " + ";
    s += f.block + "/" + f.member_label + "(" + std::to_string(f.dim) + "," + (f.rank ? std::to_string(*f.rank) : "?") + ")";
  }
  return s.empty() ? "0" : s;
}

inline BcpContext bcp_context(Ctx& x) { return {tower_from(x.cfg), s_from(x.cfg), x.provider}; }

inline Json cmd_bcp(Ctx& x, int& code) {
  auto ctx = bcp_context(x);
  auto curve = curve_from(x, ctx.tower[ctx.tower.size() - 1]);
  int depth = static_cast<int>(parse_long(x.cfg.get_or("depth", "4"), "depth"));
  auto classes = enumerate_bcp_tori(ctx, curve, depth);
  Json rows = Json::array();
  std::map<int, int> by_n;
  for (const auto& e : classes) {
    ++by_n[e.min_n];
    std::string w;
    for (const auto& t : e.witness.trace) w += (w.empty() ? "" : "; ") + step_string(ctx, t);
    rows.push_back({{"min_n", e.min_n},
                    {"dim", e.cls.dim},
                    {"rank_R0", opt_int(e.cls.rank_r0)},
                    {"factors", class_string(e.cls)},
                    {"witness", w.empty() ? std::string("identity") : w}});
  }
  std::string grouping;
  for (int n = 0; n <= depth; ++n) grouping += (n ? "/" : "") + std::to_string(by_n[n]);
  code = 0;
  return {{"class_count", classes.size()}, {"grouping", grouping}, {"depth", depth}, {"rows", rows}};
}

inline std::vector<BcpStep> parse_steps(const SubfieldTower& tower, const std::string& s) {
  std::vector<BcpStep> out;
  for (const auto& t0 : split_top(s, ";")) {
    std::string t = trim(t0);
    if (t.empty()) continue;
    auto sp = t.find(' ');
    std::string verb = t.substr(0, sp), arg = sp == std::string::npos ? "" : trim(t.substr(sp + 1));
    BcpStep st;
    if (verb == "bc" || verb == "BC") {
      st.kind = BcpStep::Kind::BC;
      auto idx = tower.index_of(arg);
      st.target = idx ? *idx : static_cast<std::size_t>(parse_long(arg, "bc target"));
    } else if (verb == "forget") {
      st.kind = BcpStep::Kind::Forget;
      for (long i : parse_long_list(arg)) st.retained.push_back(static_cast<std::size_t>(i));
    } else if (verb == "quotient") {
      st.kind = BcpStep::Kind::Quotient;
      st.delta = static_cast<int>(parse_long(arg, "delta"));
    } else {
      throw Error(Errc::Usage, "unknown step '" + verb + "'");
    }
    out.push_back(st);
  }
  return out;
}

inline VerdictMode mode_from(const Config& c) {
  std::string m = c.get_or("mode", "unconditional");
  if (m == "unconditional") return VerdictMode::Unconditional;
  if (m == "leopoldt") return VerdictMode::LeopoldtAssumed;
  throw Error(Errc::Usage, "mode must be unconditional or leopoldt");
}

inline Json verdict_json(const ObstructionVerdict& v) {
  return {{"mode", to_string(v.mode)},
          {"dim_T", v.dim_T},
          {"rank_T_R0", opt_int(v.rank_T_R0)},
          {"closure_dim_bound", opt_int(v.closure_dim_bound)},
          {"unconditional_bound", opt_int(v.unconditional_bound)},
          {"leopoldt_value", opt_int(v.leopoldt_value)},
          {"intersection_dim", v.intersection_dim},
          {"ledger_lower_bound", v.ledger_lower_bound ? int_json(*v.ledger_lower_bound) : Json()},
          {"verdict", to_string(v.verdict)},
          {"evidence", v.evidence}};
}

inline Json cmd_obstruction(Ctx& x, int& code) {
  auto ctx = bcp_context(x);
  auto curve = curve_from(x, ctx.tower[ctx.tower.size() - 1]);
  auto chain = replay(ctx, curve, parse_steps(ctx.tower, x.cfg.get_or("steps", "")));
  auto L = delta_ledger(ctx, chain);
  auto v = obstruction_verdict(ctx, chain, mode_from(x.cfg));
  Json r = verdict_json(v);
  r["n"] = chain.n;
  r["torus"] = class_string(chain.result);
  Json rows = Json::array();
  for (const auto& e : L.deltas)
    rows.push_back({{"delta", e.label}, {"value", e.unknown ? Json() : int_json(e.value)}, {"is_bound", e.is_bound}});
  r["rows"] = rows;
  code = v.verdict == Verdict::NoObstruction ? 0 : 1;
  return r;
}

inline VerifierInstance verifier_instance(const Config& c) {
  auto K = base_field(c);
  VerifierInstance inst{K, subfields_from(c, K), s_from(c), parse_long(c.get_or("q", "5"), "q"), parse_element(K, c.get_or("alpha", "1"))};
  if (auto e = c.get("epsilon")) inst.epsilon = parse_rat(*e);
  return inst;
}

inline Json cmd_main_bound(Ctx& x, int& code) {
  auto inst = verifier_instance(x.cfg);
  Subfield sub{inst.base, QPoly::x()};
  std::string which = x.cfg.get_or("subfield", "self");
  if (which != "self") {
    bool found = false;
    for (const auto& s : inst.subfields)
      if (s.field.label() == which) sub = s, found = true;
    if (!found) throw Error(Errc::Usage, "unknown subfield '" + which + "'");
  }
  auto r = verify_main_rank_bound(inst, sub, x.provider);
  for (const auto& f : r.hypothesis_flags) x.warnings.push_back("hypothesis: " + f);
  code = r.pass ? 0 : 1;
  Json flags = r.hypothesis_flags;
  return {{"rank", r.rank},
          {"rhs", rat_json(r.rhs)},
          {"epsilon", rat_json(inst.epsilon)},
          {"subfield_degree", r.subfield_degree},
          {"shape", r.shape},
          {"hypothesis_flags", flags},
          {"verdict", r.pass ? "Pass" : "Fail"}};
}

inline Json cmd_no_subgroup(Ctx& x, int& code) {
  auto inst = verifier_instance(x.cfg);
  auto r = verify_no_subgroup_obstruction(inst);
  for (const auto& w : r.warnings) x.warnings.push_back(w);
  Json rows = Json::array();
  for (const auto& c : r.classes)
    rows.push_back({{"m", c.m}, {"dim", c.dim}, {"rank_upper", c.rank_upper}, {"margin", c.margin}, {"degree", inst.base.degree()}, {"pass", c.pass}});
  code = r.pass ? 0 : 1;
  return {{"total_S_prime", r.primes.total_S_prime},
          {"places_S", r.primes.places_S},
          {"correction", r.correction},
          {"failing_m", opt_int(r.failing_m)},
          {"verdict", r.pass ? "NoSubgroupObstruction" : "Inconclusive"},
          {"rows", rows}};
}

inline Json cmd_classical(Ctx& x, int& code) {
  auto K = base_field(x.cfg);
  auto c = curve_from(x, K);
  std::map<std::size_t, std::vector<int>> declared;
  for (const auto* b : x.cfg.blocks_named("abelian")) {
    auto o = b->get("orbit");
    auto g = b->get("group");
    if (!o || !g) throw Error(Errc::Usage, "[abelian] block needs orbit and group");
    std::vector<int> inv;
    for (long n : parse_long_list(*g)) inv.push_back(static_cast<int>(n));
    declared[static_cast<std::size_t>(parse_long(*o, "orbit"))] = inv;
  }
  auto r = classical_chabauty_verdict(c, declared);
  Json rows = Json::array();
  for (const auto& f : r.factors) rows.push_back({{"factor", f.description}, {"dim", f.dim}, {"rank", f.rank}, {"anisotropic", f.anisotropic}});
  code = r.finite ? 0 : 1;
  return {{"verdict", r.verdict},
          {"witness", r.witness ? Json{{"factor", r.witness->description}, {"rank", r.witness->rank}, {"dim", r.witness->dim}} : Json()},
          {"jacobian_dim", r.jacobian_dim},
          {"jacobian_rank", r.jacobian_rank},
          {"rows", rows}};
}

inline Json cmd_cm_witness(Ctx& x, int& code) {
  auto K = base_field(x.cfg);
  auto w = cm_bcp_witness(K, subfields_from(x.cfg, K), parse_long(x.cfg.get_or("q", "7"), "q"), s_from(x.cfg), x.provider);
  code = w.verdict.verdict == Verdict::ObstructionUnderLeopoldt ? 0 : 1;
  return {{"cm_field", w.cm.cm_field->label()},
          {"real_field", w.cm.real_field->label()},
          {"beta", element_string(w.beta)},
          {"minimal_poly", kpoly_string(w.minimal_poly)},
          {"field", field_json(w.field)},
          {"totally_real", w.field.totally_real()},
          {"dim", w.dim},
          {"rank", w.rank},
          {"intersection_dim", w.intersection_dim},
          {"obstruction", verdict_json(w.verdict)}};
}

inline std::vector<SUnitGenerator> generators_from(const Config& c, const NumberField& K) {
  std::vector<SUnitGenerator> g;
  auto s = c.get("generators");
  if (!s) return g;
  // "elem[:order]" separated by ';'
  for (const auto& t : split_top(*s, ";")) {
    if (t.empty()) continue;
    auto colon = t.rfind(':');
    if (colon != std::string::npos && t.find(']', colon) == std::string::npos)
      g.push_back({parse_element(K, trim(t.substr(0, colon))), static_cast<int>(parse_long(t.substr(colon + 1), "torsion order"))});
    else
      g.push_back({parse_element(K, t), 0});
  }
  return g;
}

inline Json cmd_sunit(Ctx& x, int& code) {
  DeskConfig d;
  d.field = base_field(x.cfg);
  d.S = s_from(x.cfg);
  d.generators = generators_from(x.cfg, d.field);
  d.q = parse_long(x.cfg.get_or("q", "0"), "q");
  d.p = parse_long(x.cfg.get_or("p", "0"), "p");
  const char* envN = std::getenv("CHABAUTY_PRECISION");
  d.N = static_cast<int>(parse_long(x.cfg.get_or("N", envN && *envN ? envN : "10"), "N"));
  d.box = static_cast<int>(parse_long(x.cfg.get_or("box", "12"), "box"));
  d.strict = parse_bool(x.cfg.get_or("strict", "false"));
  auto r = solve_sunit_desk(d);
  Json rows = Json::array();
  for (const auto& s : r.solutions) rows.push_back({{"x", element_string(s.x)}, {"y", element_string(s.y)}});
  Json curves = Json::array();
  for (const auto& c : r.curves)
    curves.push_back({{"alpha", c.alpha}, {"shape", c.shape}, {"verdict", c.verdict}, {"evidence", c.evidence}, {"images", c.images}});
  const auto& st = r.sieve.stages;
  code = r.label == "CONFIRMED" ? 0 : 1;
  return {{"label", r.label},
          {"q", r.q},
          {"p", r.sieve.p},
          {"N", r.sieve.N},
          {"box", r.sieve.exhaustive_bound_used},
          {"solution_count", r.solutions.size()},
          {"surviving_unconfirmed", r.sieve.surviving_unconfirmed},
          {"surviving_classes", r.sieve.surviving_classes.size()},
          {"closure_dim", r.sieve.closure.dim},
          {"closure_certified", r.sieve.closure.certified},
          {"oracle_agrees", r.oracle_agrees},
          {"discarded_at_punctures", r.discarded_at_punctures},
          {"stages", {{"universe", st.universe}, {"unit_at_p", st.unit_at_p}, {"tame", st.tame}, {"log_span", st.log_span}, {"exact", st.exact}}},
          {"curves", curves},
          {"rows", rows}};
}

inline const char* kUsage =
    "usage: chabauty <command> [verb] [options]\n"
    "commands: field | jacobian | bcp | obstruction | verify {main-bound|no-subgroup|classical|cm-witness} | sunit\n";

}  // namespace cli

// exit 0: affirmative verdict, 1: inconclusive or negative, 2: error
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  namespace po = boost::program_options;
  using namespace cli;
  auto t0 = std::chrono::steady_clock::now();
  try {
    std::vector<std::string> keys = {"field", "poly", "label", "S", "q", "alpha", "epsilon", "divisor", "infinity", "depth",
                                     "mode", "p", "N", "box", "strict", "primes", "subfield", "generators", "steps", "curve"};
    po::options_description desc("options");
    desc.add_options()("help,h", "show usage")("config,c", po::value<std::string>(), "configuration file")(
        "format,f", po::value<std::string>()->default_value("json"), "json | table | csv")("out,o", po::value<std::string>(), "write report to file")(
        "cache-dir", po::value<std::string>(), "cache directory (default $CHABAUTY_CACHE_DIR)")("no-cache", "disable the cache")(
        "no-timing", "omit the timing block");
    for (const auto& k : keys) desc.add_options()(k.c_str(), po::value<std::string>(), "instance key");
    po::options_description hidden;
    hidden.add_options()("words", po::value<std::vector<std::string>>(), "");
    po::options_description all;
    all.add(desc).add(hidden);
    po::positional_options_description pos;
    pos.add("words", -1);
    po::variables_map vm;
    po::store(po::command_line_parser(argc, argv).options(all).positional(pos).run(), vm);
    po::notify(vm);
    if (vm.count("help")) {
      out << kUsage << desc;
      return 0;
    }
    std::vector<std::string> words = vm.count("words") ? vm["words"].as<std::vector<std::string>>() : std::vector<std::string>{};

    Ctx x;
    if (vm.count("config")) x.cfg = parse_config(read_file(vm["config"].as<std::string>()));
    for (const auto& k : keys)
      if (vm.count(k)) x.cfg.top[k] = vm[k].as<std::string>();
    if (auto c = x.cfg.get("command"); c && words.empty())
      for (const auto& w : split_top(*c, " ")) if (!w.empty()) words.push_back(w);
    if (words.empty()) throw Error(Errc::Usage, "missing command");

    std::optional<std::filesystem::path> dir;
    if (!vm.count("no-cache")) {
      if (vm.count("cache-dir")) dir = vm["cache-dir"].as<std::string>();
      else if (const char* e = std::getenv("CHABAUTY_CACHE_DIR"); e && *e) dir = e;
    }
    ContentCache cache(dir);
    x.cache = &cache;
    x.provider = cached_residue_field(cache);

    std::string cmd = words[0], verb = words.size() > 1 ? words[1] : "";
    if (cmd != "verify" && words.size() > 1) throw Error(Errc::Usage, "unexpected argument '" + words[1] + "'");
    if (words.size() > 2) throw Error(Errc::Usage, "unexpected argument '" + words[2] + "'");
    int code = 2;
    Json results;
    if (cmd == "field") results = cmd_field(x, code);
    else if (cmd == "jacobian") results = cmd_jacobian(x, code);
    else if (cmd == "bcp") results = cmd_bcp(x, code);
    else if (cmd == "obstruction") results = cmd_obstruction(x, code);
    else if (cmd == "sunit") results = cmd_sunit(x, code);
    else if (cmd == "verify") {
      if (verb == "main-bound") results = cmd_main_bound(x, code);
      else if (verb == "no-subgroup") results = cmd_no_subgroup(x, code);
      else if (verb == "classical") results = cmd_classical(x, code);
      else if (verb == "cm-witness") results = cmd_cm_witness(x, code);
      else throw Error(Errc::Usage, "verify needs one of main-bound, no-subgroup, classical, cm-witness");
    } else {
      throw Error(Errc::Usage, "unknown command '" + cmd + "'");
    }

    Json instance = Json::object();
    for (const auto& [k, v] : x.cfg.top) instance[k] = v;
    Json blocks = Json::array();
    for (const auto& b : x.cfg.blocks) {
      Json o{{"block", b.name}};
      for (const auto& [k, v] : b.kv) o[k] = v;
      blocks.push_back(o);
    }
    if (!blocks.empty()) instance["blocks"] = blocks;
    Json warnings = x.warnings;
    for (const auto& w : cache.warnings()) warnings.push_back(w);
    Json report{{"schema_version", kSchemaVersion},
                {"command", verb.empty() ? cmd : cmd + " " + verb},
                {"instance", instance},
                {"results", results},
                {"warnings", warnings},
                {"exit_code", code}};
    if (!vm.count("no-timing")) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
      report["timing"] = {{"elapsed_ms", static_cast<long>(ms)}, {"cache_hits", cache.hits()}, {"cache_misses", cache.misses()}};
    }
    std::string fmt = vm["format"].as<std::string>();
    std::string text;
    if (fmt == "json") text = report.dump(2) + "\n";
    else if (fmt == "table") text = render_table(report);
    else if (fmt == "csv") text = render_csv(report);
    else throw Error(Errc::Usage, "unknown format '" + fmt + "'");
    if (vm.count("out")) {
      std::ofstream o(vm["out"].as<std::string>(), std::ios::binary | std::ios::trunc);
      if (!o) throw Error(Errc::Usage, "cannot write " + vm["out"].as<std::string>());
      o << text;
    } else {
      out << text;
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (!e.witness().empty()) err << " [" << e.witness() << "]";
    err << "\n";
    if (e.code() == Errc::Usage) err << kUsage;
    return 2;
  } catch (const po::error& e) {
    err << "error: Usage: " << e.what() << "\n" << kUsage;
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace rosc
