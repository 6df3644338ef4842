// dwkit command-line interface.  Exit codes: 0 success, 1 fault, 2 a
// definitive negative anomaly verdict.
#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "dwkit/anomaly.hpp"
#include "dwkit/cohomology.hpp"
#include "dwkit/dw.hpp"
#include "dwkit/errors.hpp"
#include "dwkit/io.hpp"

using namespace dwkit;
namespace fs = std::filesystem;

namespace {

struct Options {
  bool json = false;
  std::string group, cocycle, extension, cache, out_dir, omega_prime, theta, lift, file;
  int degree = 0, dim = -1, iterate = 1;
  bool allow_large = false, untwisted = false, timing = false;
  int64_t modulus_multiplier = 1;
};

void emit(const Options& o, const Json& j, const std::string& human) {
  if (o.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << human;
}

std::string names(const FiniteGroup& g, const std::vector<int>& xs, const char* sep = " ") {
  std::string s;
  for (size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + g.element_name(xs[i]);
  return s;
}

Json name_list(const FiniteGroup& g, const std::vector<int>& xs) {
  Json a = Json::array();
  for (int x : xs) a.push_back(g.element_name(x));
  return a;
}

void write_file(const fs::path& p, const Json& j) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << j.dump(2) << "\n";
}

std::string factors_str(const std::vector<int64_t>& f) {
  if (f.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < f.size(); ++i) s += (i ? " x " : "") + std::string("Z") + std::to_string(f[i]);
  return s;
}

int cmd_group(const Options& o, bool validate) {
  GroupPtr g = parse_group_spec(o.file);
  if (validate) {
    emit(o, Json{{"valid", true}, {"order", g->order()}}, "valid group of order " + std::to_string(g->order()) + "\n");
    return 0;
  }
  auto classes = g->conjugacy_classes();
  auto center = g->center();
  Json cl = Json::array();
  for (const auto& c : classes) cl.push_back(name_list(*g, c));
  Json j{{"label", g->label()},     {"order", g->order()},          {"hash", g->canonical_hash()},
         {"abelian", g->is_abelian()}, {"center_order", center.size()}, {"center", name_list(*g, center)},
         {"conjugacy_classes", cl}};
  std::string h = "group " + g->label() + "\norder " + std::to_string(g->order()) + "\ncenter order " +
                  std::to_string(center.size()) + ": " + names(*g, center) + "\nconjugacy classes " +
                  std::to_string(classes.size()) + "\n";
  for (const auto& c : classes) h += "  {" + names(*g, c, ", ") + "}\n";
  emit(o, j, h);
  return 0;
}

CohomologyGroup cached_cohomology(const GroupPtr& g, int degree, const Options& o) {
  CohomologyOptions opt;
  opt.allow_large = o.allow_large;
  auto cache = CohomologyCache::from_flag_or_env(o.cache);
  if (cache) {
    if (auto h = cache->load(g, degree, opt.budget)) {
      std::cerr << "cache hit: " << cache->entry_path(g, degree, opt.budget).string() << "\n";
      return *h;
    }
  }
  CohomologyGroup h = cohomology(g, degree, opt);
  if (cache) {
    cache->store(h, opt.budget);
    std::cerr << "cache store: " << cache->entry_path(g, degree, opt.budget).string() << "\n";
  }
  return h;
}

int cmd_cohomology(const Options& o) {
  GroupPtr g = parse_group_spec(o.group);
  CohomologyGroup h = cached_cohomology(g, o.degree, o);
  Json gens = Json::array();
  for (size_t i = 0; i < h.generators.size(); ++i) {
    if (o.out_dir.empty()) {
      gens.push_back(cochain_to_json(h.generators[i]));
    } else {
      fs::path p = fs::path(o.out_dir) / ("generator_" + std::to_string(o.degree) + "_" + std::to_string(i) + ".json");
      write_file(p, cochain_to_json(h.generators[i]));
      gens.push_back(p.string());
    }
  }
  Json j{{"group", g->label()}, {"degree", o.degree}, {"factors", h.factors}, {"generators", gens}};
  emit(o, j, "H^" + std::to_string(o.degree) + "(" + g->label() + "; U(1)) = " + factors_str(h.factors) + "\n");
  return 0;
}

Cochain cocycle_option(const Options& o, const GroupPtr& g) {
  if (o.untwisted) {
    if (o.dim < 0) throw Error("--untwisted needs --dim");
    return Cochain(g, o.dim, 1);
  }
  if (o.cocycle.empty()) throw Error("give --cocycle or --untwisted");
  Cochain c = parse_cochain_spec(o.cocycle, g);
  if (!is_cocycle(c)) throw NotACocycle("the given cochain is not closed");
  return c;
}

Json invariant_record(const std::string& name, const GroupPtr& g, int degree, const std::string& value) {
  return Json{{"invariant", name}, {"group", g->label()}, {"degree", degree}, {"value", value}};
}

int cmd_dw(const Options& o, const std::string& what) {
  GroupPtr g = parse_group_spec(o.group);
  Cochain theta = cocycle_option(o, g);
  int n = theta.degree();
  if (o.dim >= 0 && o.dim != n) throw DegreeMismatch(n, o.dim);
  Json j;
  std::string h;
  if (what == "torus") {
    TorusPartition z = dw_partition_torus(g, theta, n);
    j = invariant_record("torus_partition", g, n, std::to_string(z.integer));
    h = "Z(T^" + std::to_string(n) + ") = " + std::to_string(z.integer) + "\n";
  } else if (what == "simples") {
    int64_t count;
    if (n == 2)
      count = twisted_irrep_count(g, theta);
    else if (n == 3)
      count = drinfeld_double_simple_count(g, theta);
    else
      throw Error("simples needs a cocycle of degree 2 or 3");
    TorusPartition z = dw_partition_torus(g, theta, n);
    j = invariant_record("simple_count", g, n, std::to_string(count));
    j["torus_partition"] = std::to_string(z.integer);
    j["agree"] = z.integer == count;
    h = "simple objects: " + std::to_string(count) + " (Z(T^" + std::to_string(n) + ") = " +
        std::to_string(z.integer) + ")\n";
    if (z.integer != count) {
      emit(o, j, h);
      throw Error("simple count disagrees with the torus partition function");
    }
  } else if (what == "double") {
    if (n != 3) throw DegreeMismatch(3, n);
    int64_t count = drinfeld_double_simple_count(g, theta);
    j = invariant_record("twisted_double_simples", g, n, std::to_string(count));
    h = "simple modules of the twisted double: " + std::to_string(count) + "\n";
  } else {
    StateSpace s = state_space_torus(g, theta);
    Json basis = Json::array();
    for (int b = 0; b < s.dimension(); ++b) basis.push_back(name_list(*g, s.line.objects()->tuple(s.basis_object(b))));
    j = invariant_record("state_space", g, n, std::to_string(s.dimension()));
    j["basis"] = basis;
    h = "dim Z(T^" + std::to_string(n - 1) + ") = " + std::to_string(s.dimension()) + "\n";
  }
  emit(o, j, h);
  return 0;
}

int cmd_anomaly(const Options& o) {
  Extension e = parse_extension_spec(o.extension);
  Cochain omega = parse_cochain_spec(o.cocycle, e.D);
  if (!is_cocycle(omega)) throw NotACocycle("omega is not closed");
  if (o.modulus_multiplier < 1) throw Error("--modulus-multiplier must be positive");
  ObstructionReport r = anomaly_report(e, omega, o.modulus_multiplier);
  std::cerr << "anomaly report in " << r.seconds << " s\n";
  if (!o.out_dir.empty()) {
    fs::path dir(o.out_dir);
    if (r.closed_lift) write_file(dir / "closed_lift.json", cochain_to_json(*r.closed_lift));
    if (r.boundary_pair) {
      write_file(dir / "omega_prime.json", cochain_to_json(r.boundary_pair->omega_prime));
      write_file(dir / "theta.json", cochain_to_json(r.boundary_pair->theta));
    }
  }
  std::string h = "verdict: " + verdict_name(r.verdict) + "\n";
  if (r.boundary_pair && !r.closed_lift)
    h += "bulk theta class " + Json(r.boundary_pair->theta_class).dump() + " in " +
         factors_str(r.boundary_pair->theta_factors) + "\n";
  emit(o, report_to_json(r, o.timing), h);
  return r.verdict == Verdict::anomaly_free ? 0 : 2;
}

int cmd_transgress(const Options& o) {
  GroupPtr g = parse_group_spec(o.group);
  Cochain theta = parse_cochain_spec(o.cocycle, g);
  if (!is_cocycle(theta)) throw NotACocycle("theta is not closed");
  if (o.iterate < 1 || o.iterate > theta.degree()) throw Error("--iterate must lie in 1..degree");
  LoopCochain t = transgress_iterated(theta, o.iterate);
  if (!is_loop_cocycle(t)) throw Error("internal: transgression is not closed");
  Json j = loop_cochain_to_json(t);
  std::string h = "tau^" + std::to_string(o.iterate) + " theta: degree " + std::to_string(t.degree()) + " on " +
                  std::to_string(t.objects()->count()) + " objects\n";
  const LoopObjects& objs = *t.objects();
  if (o.iterate == 1 && theta.degree() == 3) {
    bool ok = true;
    for (int ob = 0; ob < objs.count(); ++ob)
      for (int x = 0; x < g->order(); ++x)
        for (int y = 0; y < g->order(); ++y)
          ok = ok && t.at(ob, {x, y}) == dpr_cocycle(theta, objs.tuple(ob)[0], x, y) * kDprSign;
    j["dpr_match"] = ok;
    j["dpr_sign"] = kDprSign;
    h += std::string("matches the twisted double cocycle: ") + (ok ? "yes" : "no") + "\n";
  }
  if (o.iterate == theta.degree()) {
    bool ok = true;
    for (int ob = 0; ob < objs.count(); ++ob) ok = ok && t.at(ob, {}) == torus_evaluate(theta, objs.tuple(ob));
    j["torus_match"] = ok;
    h += std::string("matches the torus evaluation: ") + (ok ? "yes" : "no") + "\n";
  }
  emit(o, j, h);
  return 0;
}

int cmd_verify(const Options& o, const std::string& what) {
  if (what == "cocycle") {
    GroupPtr g = parse_group_spec(o.group);
    Cochain c = parse_cochain_spec(o.cocycle, g);
    bool ok = is_cocycle(c);
    emit(o, Json{{"cocycle", ok}}, ok ? "closed\n" : "not closed\n");
    return ok ? 0 : 1;
  }
  Extension e = parse_extension_spec(o.extension);
  Cochain omega = parse_cochain_spec(o.cocycle, e.D);
  if (what == "lift") {
    Cochain w = cochain_from_json(read_json_file(o.lift), e.Ghat);
    bool ok = is_cocycle(w) && pullback(e.iota, w) == omega;
    emit(o, Json{{"closed_lift", ok}}, ok ? "valid closed lift\n" : "not a closed lift\n");
    return ok ? 0 : 1;
  }
  Cochain wp = cochain_from_json(read_json_file(o.omega_prime), e.Ghat);
  Cochain th = cochain_from_json(read_json_file(o.theta), e.G);
  if (pullback(e.iota, wp) != omega) throw NotABoundaryPair("iota^* omega' differs from omega");
  check_boundary_pair(e, wp, th);
  emit(o, Json{{"boundary_pair", true}}, "valid boundary pair\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dijkgraaf-Witten invariants, cohomology of finite groups and anomaly obstructions"};
  app.require_subcommand(1);
  Options o;
  auto json_flag = [&](CLI::App* c) { c->add_flag("--json", o.json, "JSON on stdout"); };

  int code = 0;
  auto* group = app.add_subcommand("group", "Inspect or validate a group");
  group->require_subcommand(1);
  for (const char* name : {"show", "validate"}) {
    auto* c = group->add_subcommand(name, std::string(name) + " a group file or builtin");
    c->add_option("group", o.file, "group file or shorthand")->required();
    json_flag(c);
    bool validate = std::string(name) == "validate";
    c->callback([&, validate] { code = cmd_group(o, validate); });
  }

  auto* coh = app.add_subcommand("cohomology", "H^n(G; U(1)) with generators");
  coh->add_option("--group", o.group)->required();
  coh->add_option("--degree", o.degree)->required()->check(CLI::NonNegativeNumber);
  coh->add_flag("--allow-large", o.allow_large, "lift the size budget");
  coh->add_option("--cache", o.cache, "cache directory (default: $DWKIT_CACHE)");
  coh->add_option("--out-dir", o.out_dir, "write generators as cochain files");
  json_flag(coh);
  coh->callback([&] { code = cmd_cohomology(o); });

  auto* dw = app.add_subcommand("dw", "Dijkgraaf-Witten invariants");
  dw->require_subcommand(1);
  for (const char* name : {"torus", "simples", "double", "states"}) {
    auto* c = dw->add_subcommand(name);
    c->add_option("--group", o.group)->required();
    c->add_option("--cocycle", o.cocycle, "cochain file or catalog name");
    c->add_flag("--untwisted", o.untwisted, "zero cocycle of degree --dim");
    c->add_option("--dim", o.dim, "torus dimension, equal to the cocycle degree");
    json_flag(c);
    std::string what = name;
    c->callback([&, what] { code = cmd_dw(o, what); });
  }

  auto* an = app.add_subcommand("anomaly", "Obstruction report for gauging along an extension");
  an->add_option("--extension", o.extension, "extension file or catalog name")->required();
  an->add_option("--cocycle", o.cocycle, "cocycle on D")->required();
  an->add_option("--modulus-multiplier", o.modulus_multiplier, "scale the working modulus");
  an->add_option("--out-dir", o.out_dir, "write witnesses as cochain files");
  an->add_flag("--timing", o.timing, "include timing in the JSON report");
  json_flag(an);
  an->callback([&] { code = cmd_anomaly(o); });

  auto* tr = app.add_subcommand("transgress", "Iterated circle transgression");
  tr->add_option("--group", o.group)->required();
  tr->add_option("--cocycle", o.cocycle)->required();
  tr->add_option("--iterate", o.iterate, "number of circle factors");
  json_flag(tr);
  tr->callback([&] { code = cmd_transgress(o); });

  auto* ver = app.add_subcommand("verify", "Re-validate emitted witnesses");
  ver->require_subcommand(1);
  auto* vc = ver->add_subcommand("cocycle");
  vc->add_option("--group", o.group)->required();
  vc->add_option("--cocycle", o.cocycle)->required();
  auto* vl = ver->add_subcommand("lift");
  auto* vp = ver->add_subcommand("pair");
  for (auto* c : {vl, vp}) {
    c->add_option("--extension", o.extension)->required();
    c->add_option("--cocycle", o.cocycle)->required();
  }
  vl->add_option("--lift", o.lift)->required();
  vp->add_option("--omega-prime", o.omega_prime)->required();
  vp->add_option("--theta", o.theta)->required();
  for (auto* c : {vc, vl, vp}) json_flag(c);
  vc->callback([&] { code = cmd_verify(o, "cocycle"); });
  vl->callback([&] { code = cmd_verify(o, "lift"); });
  vp->callback([&] { code = cmd_verify(o, "pair"); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
