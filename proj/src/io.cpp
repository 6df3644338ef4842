#include "dwkit/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "dwkit/errors.hpp"

namespace dwkit {

namespace fs = std::filesystem;

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path.string());
}

namespace {

void require_object(const Json& j, const std::string& what) {
  if (!j.is_object()) throw ParseError(what + " must be a JSON object");
}

void check_keys(const Json& j, const std::string& what, const std::set<std::string>& required,
                const std::set<std::string>& optional = {}) {
  require_object(j, what);
  for (const auto& [k, v] : j.items())
    if (!required.count(k) && !optional.count(k)) throw ParseError(what + ": unknown key \"" + k + "\"");
  for (const auto& k : required)
    if (!j.contains(k)) throw ParseError(what + ": missing key \"" + k + "\"");
}

template <class T>
T get_as(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw ParseError(what + " has the wrong type");
  }
}

Json builtin_to_json(const BuiltinSpec& s) {
  Json params = Json::object();
  if (s.name == "cyclic" || s.name == "dihedral") {
    params["n"] = s.n;
  } else if (s.name == "product") {
    Json fs = Json::array();
    for (const auto& f : s.factors) fs.push_back(builtin_to_json(f));
    params["factors"] = fs;
  }
  return Json{{"kind", "builtin"}, {"name", s.name}, {"params", params}};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) {
    std::transform(w.begin(), w.end(), w.begin(), [](unsigned char c) { return std::tolower(c); });
    out.push_back(w);
  }
  return out;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw ParseError(what + ": not an integer: " + s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError(what + ": not an integer: " + s);
  }
}

GroupPtr single_word_group(const std::string& w) {
  if (w == "trivial") return cyclic_group(1);
  if (w == "pauli" || w == "p1") return pauli_group();
  if (w == "s3") return dihedral_group(6);
  if (w.size() > 1 && w[0] == 'z') return cyclic_group(parse_int(w.substr(1), "group"));
  if (w.size() > 1 && w[0] == 'd') return dihedral_group(parse_int(w.substr(1), "group"));
  throw UnknownBuiltin(w);
}

std::string element_list(const FiniteGroup& g, const std::vector<int>& t) {
  std::string s;
  for (size_t i = 0; i < t.size(); ++i) s += (i ? "|" : "") + g.element_name(t[i]);
  return s;
}

std::vector<int> parse_element_list(const FiniteGroup& g, const std::string& key, int expected) {
  std::vector<int> t;
  if (expected == 0) {
    if (!key.empty()) throw ParseError("degree-0 key must be empty");
    return t;
  }
  for (const auto& part : split(key, '|')) {
    auto e = g.element_by_name(part);
    if (!e) throw ParseError("unknown element \"" + part + "\" in key \"" + key + "\"");
    t.push_back(*e);
  }
  if (static_cast<int>(t.size()) != expected)
    throw ParseError("key \"" + key + "\" has " + std::to_string(t.size()) + " entries, expected " +
                     std::to_string(expected));
  return t;
}

GroupPtr resolve_group(const Json& j, const GroupPtr& expected) {
  if (j.is_string()) {
    std::string h = j.get<std::string>();
    if (!expected) throw ParseError("group given by hash " + h + " but no group to resolve it against");
    if (h != expected->canonical_hash()) throw ParseError("group hash " + h + " does not match");
    return expected;
  }
  GroupPtr g = group_from_json(j);
  if (!expected) return g;
  if (!g->same_table(*expected)) throw ParseError("cochain group does not match the expected group table");
  return expected;
}

Json cochain_values(const Cochain& c) {
  Json vals = Json::object();
  for (const auto& [t, v] : c.entries()) vals[element_list(*c.group(), t)] = v.str();
  return vals;
}

Json generator_json(const Cochain& c) {
  Json j = cochain_to_json(c);
  j["group"] = c.group()->canonical_hash();
  return j;
}

}  // namespace

Json group_to_json(const GroupPtr& g) {
  if (g->builtin()) return builtin_to_json(*g->builtin());
  Json table = Json::array();
  for (int a = 0; a < g->order(); ++a) {
    Json row = Json::array();
    for (int b = 0; b < g->order(); ++b) row.push_back(g->mul(a, b));
    table.push_back(row);
  }
  return Json{{"kind", "table"}, {"order", g->order()}, {"table", table}};
}

GroupPtr group_from_json(const Json& j) {
  require_object(j, "group");
  if (!j.contains("kind")) throw ParseError("group: missing key \"kind\"");
  std::string kind = get_as<std::string>(j["kind"], "group kind");
  if (kind == "table") {
    check_keys(j, "table group", {"kind", "order", "table"}, {"label"});
    int order = get_as<int>(j["order"], "order");
    auto table = get_as<std::vector<std::vector<int>>>(j["table"], "table");
    std::string label = j.contains("label") ? get_as<std::string>(j["label"], "label") : "";
    if (order < 1 || static_cast<int>(table.size()) != order)
      throw ParseError("table must have " + std::to_string(order) + " rows");
    for (const auto& row : table) {
      if (static_cast<int>(row.size()) != order) throw ParseError("table rows must have length order");
      for (int v : row)
        if (v < 0 || v >= order) throw ParseError("table entry out of range: " + std::to_string(v));
    }
    return make_group(FiniteGroup::from_table(order, table, label));
  }
  if (kind != "builtin") throw ParseError("group kind must be \"table\" or \"builtin\"");
  check_keys(j, "builtin group", {"kind", "name"}, {"params"});
  std::string name = get_as<std::string>(j["name"], "builtin name");
  Json params = j.contains("params") ? j["params"] : Json::object();
  if (name == "cyclic" || name == "dihedral") {
    check_keys(params, name + " params", {"n"});
    int n = get_as<int>(params["n"], "n");
    if (n < 1) throw ParseError(name + " needs n >= 1");
    return name == "cyclic" ? cyclic_group(n) : dihedral_group(n);
  }
  if (name == "pauli") {
    check_keys(params, "pauli params", {});
    return pauli_group();
  }
  if (name == "product") {
    check_keys(params, "product params", {"factors"});
    if (!params["factors"].is_array() || params["factors"].empty())
      throw ParseError("product factors must be a nonempty array");
    std::vector<GroupPtr> fs;
    for (const auto& f : params["factors"]) fs.push_back(group_from_json(f));
    return product_group(fs);
  }
  throw UnknownBuiltin(name);
}

GroupPtr parse_group_spec(const std::string& spec) {
  if (fs::is_regular_file(spec)) return group_from_json(read_json_file(spec));
  auto w = words(spec);
  if (w.empty()) throw ParseError("empty group argument");
  if (w[0] == "product") {
    if (w.size() < 2) throw ParseError("product needs at least one factor");
    std::vector<GroupPtr> fs;
    for (size_t i = 1; i < w.size(); ++i) fs.push_back(single_word_group(w[i]));
    return product_group(fs);
  }
  if (w[0] == "cyclic" || w[0] == "dihedral") {
    if (w.size() != 2) throw ParseError(w[0] + " takes one parameter");
    int n = parse_int(w[1], w[0]);
    return w[0] == "cyclic" ? cyclic_group(n) : dihedral_group(n);
  }
  if (w.size() != 1) throw ParseError("cannot parse group \"" + spec + "\"");
  return single_word_group(w[0]);
}

Json cochain_to_json(const Cochain& c) {
  return Json{{"group", group_to_json(c.group())},
              {"degree", c.degree()},
              {"modulus", c.denominator()},
              {"values", cochain_values(c)}};
}

Cochain cochain_from_json(const Json& j, const GroupPtr& expected) {
  check_keys(j, "cochain", {"group", "degree", "values"}, {"modulus"});
  GroupPtr g = resolve_group(j["group"], expected);
  int n = get_as<int>(j["degree"], "degree");
  if (n < 0) throw ParseError("degree must be nonnegative");
  int64_t m = j.contains("modulus") ? get_as<int64_t>(j["modulus"], "modulus") : 0;
  if (j.contains("modulus") && m < 1) throw ParseError("modulus must be positive");
  require_object(j["values"], "values");
  Cochain c(g, n, m > 0 ? m : 1);
  for (const auto& [key, val] : j["values"].items()) {
    std::vector<int> t = parse_element_list(*g, key, n);
    PhaseValue v;
    try {
      v = PhaseValue::parse(get_as<std::string>(val, "value at " + key));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("value at \"" + key + "\": " + e.what());
    }
    if (m > 0 && m % v.denominator() != 0)
      throw ParseError("value at \"" + key + "\" has denominator not dividing the modulus");
    try {
      c.set(t, v);
    } catch (const Error& e) {
      throw ParseError("value at \"" + key + "\": " + e.what());
    }
  }
  return c;
}

Cochain rebase(const Cochain& c, const GroupPtr& g) {
  if (!c.group()->same_table(*g)) throw Error("cochain lives on a group with a different table");
  Cochain out(g, c.degree(), c.modulus());
  for (uint64_t k = 0; k < c.size(); ++k)
    if (c.numerator(k)) out.set_numerator(k, c.numerator(k));
  return out;
}

Cochain parse_cochain_spec(const std::string& spec, const GroupPtr& g) {
  if (fs::is_regular_file(spec)) return cochain_from_json(read_json_file(spec), g);
  auto w = words(spec);
  if (w.empty()) throw ParseError("empty cochain argument");
  auto on_group = [&](const Cochain& c, const std::string& needs) {
    if (!c.group()->same_table(*g)) throw ParseError("cocycle \"" + spec + "\" needs the group " + needs);
    return rebase(c, g);
  };
  if (w[0] == "zero") {
    if (w.size() != 2) throw ParseError("zero takes the degree");
    return Cochain(g, parse_int(w[1], "degree"), 1);
  }
  if (w[0].rfind("omega", 0) == 0) {
    std::string k = w[0].substr(5);
    if (k.empty()) {
      if (w.size() != 2) throw ParseError("omega takes one parameter");
      k = w[1];
    } else if (w.size() != 1) {
      throw ParseError("cannot parse cocycle \"" + spec + "\"");
    }
    int n = 1;
    while (n * n < g->order()) ++n;
    if (n * n != g->order()) throw ParseError("omega needs a group Z_N x Z_N");
    return on_group(omega_zn_zn(n, parse_int(k, "omega")), "product zN zN");
  }
  if (w[0] == "d8" && w.size() == 1) return on_group(d8_cocycle(), "d8");
  if (w[0] == "zn3") {
    if (w.size() != 2) throw ParseError("zn3 takes one parameter");
    return on_group(zn_cocycle3(g->order(), parse_int(w[1], "zn3")), "cyclic N");
  }
  if (w[0] == "generator") {
    if (w.size() != 3) throw ParseError("generator takes a degree and an index");
    CohomologyGroup h = cohomology(g, parse_int(w[1], "degree"));
    int i = parse_int(w[2], "index");
    if (i < 0 || i >= static_cast<int>(h.generators.size()))
      throw ParseError("H^" + w[1] + " has " + std::to_string(h.generators.size()) + " generators");
    return h.generators[i];
  }
  throw UnknownFamily(spec);
}

Json extension_to_json(const Extension& e) {
  return Json{{"D", group_to_json(e.D)},       {"Ghat", group_to_json(e.Ghat)}, {"G", group_to_json(e.G)},
              {"iota", e.iota.map()},          {"lambda", e.lambda.map()},     {"section", e.section}};
}

Extension extension_from_json(const Json& j) {
  check_keys(j, "extension", {"D", "Ghat", "G", "iota", "lambda"}, {"section"});
  GroupPtr d = group_from_json(j["D"]);
  GroupPtr ghat = group_from_json(j["Ghat"]);
  GroupPtr g = group_from_json(j["G"]);
  auto iota = get_as<std::vector<int>>(j["iota"], "iota");
  auto lambda = get_as<std::vector<int>>(j["lambda"], "lambda");
  std::vector<int> section;
  if (j.contains("section")) section = get_as<std::vector<int>>(j["section"], "section");
  if (static_cast<int>(iota.size()) != d->order()) throw ParseError("iota must have |D| entries");
  if (static_cast<int>(lambda.size()) != ghat->order()) throw ParseError("lambda must have |Ghat| entries");
  for (int v : iota)
    if (v < 0 || v >= ghat->order()) throw ParseError("iota entry out of range");
  for (int v : lambda)
    if (v < 0 || v >= g->order()) throw ParseError("lambda entry out of range");
  try {
    return make_extension(d, ghat, g, iota, lambda, section);
  } catch (const InvalidExtension&) {
    throw;
  } catch (const SectionNotValid&) {
    throw;
  } catch (const Error& e) {
    throw InvalidExtension(e.what());
  }
}

Extension parse_extension_spec(const std::string& spec) {
  if (fs::is_regular_file(spec)) return extension_from_json(read_json_file(spec));
  auto w = words(spec);
  if (w.size() == 1 && w[0] == "pauli") return pauli_extension();
  if (w.size() == 3) {
    int n = parse_int(w[1], w[0]), m = parse_int(w[2], w[0]);
    if (w[0] == "cyclic") return cyclic_extension(n, m);
    if (w[0] == "cyclic-square") return cyclic_square_extension(n, m);
    if (w[0] == "shear") return shear_extension(n, m);
  }
  throw ParseError("cannot parse extension \"" + spec + "\"");
}

Json loop_cochain_to_json(const LoopCochain& c) {
  const LoopObjects& obj = *c.objects();
  const FiniteGroup& g = *c.group();
  Json vals = Json::object();
  int64_t den = c.denominator();
  for (int o = 0; o < obj.count(); ++o)
    for (uint64_t k = 0; k < c.stride(); ++k) {
      int64_t num = c.numerator(o, k);
      if (!num) continue;
      vals[element_list(g, obj.tuple(o)) + ";" + element_list(g, c.tuple(k))] =
          PhaseValue(num, c.modulus()).str();
    }
  return Json{{"group", group_to_json(c.group())},
              {"torus_dim", c.base_dim()},
              {"degree", c.degree()},
              {"modulus", den},
              {"values", vals}};
}

Json cohomology_to_json(const CohomologyGroup& h) {
  Json gens = Json::array();
  for (const auto& c : h.generators) gens.push_back(generator_json(c));
  return Json{{"group", h.group->canonical_hash()},
              {"degree", h.degree},
              {"factors", h.factors},
              {"modulus", h.modulus},
              {"generators", gens}};
}

CohomologyGroup cohomology_from_json(const Json& j, const GroupPtr& g) {
  check_keys(j, "cohomology", {"group", "degree", "factors", "modulus", "generators"});
  if (get_as<std::string>(j["group"], "group") != g->canonical_hash())
    throw ParseError("cohomology record belongs to another group");
  CohomologyGroup h;
  h.group = g;
  h.degree = get_as<int>(j["degree"], "degree");
  h.factors = get_as<std::vector<int64_t>>(j["factors"], "factors");
  h.modulus = get_as<int64_t>(j["modulus"], "modulus");
  if (!j["generators"].is_array() || j["generators"].size() != h.factors.size())
    throw ParseError("one generator per factor expected");
  for (const auto& c : j["generators"]) h.generators.push_back(cochain_from_json(c, g));
  for (const auto& c : h.generators)
    if (c.degree() != h.degree) throw ParseError("generator of the wrong degree");
  return h;
}

Json report_to_json(const ObstructionReport& r, bool with_timing) {
  Json j;
  j["verdict"] = verdict_name(r.verdict);
  j["invariant_class"] = r.invariant_class;
  j["first_obstruction_trivial"] =
      r.first_obstruction_trivial ? Json(*r.first_obstruction_trivial) : Json(nullptr);
  j["moduli"] = Json{{"obstruction", r.obstruction_modulus}, {"lift", r.lift_modulus}, {"pair", r.pair_modulus}};
  j["closed_lift"] = r.closed_lift ? cochain_to_json(*r.closed_lift) : Json(nullptr);
  if (r.boundary_pair) {
    const BoundaryPair& p = *r.boundary_pair;
    j["boundary_pair"] = Json{{"omega_prime", cochain_to_json(p.omega_prime)},
                              {"theta", cochain_to_json(p.theta)},
                              {"theta_factors", p.theta_factors},
                              {"theta_class", p.theta_class}};
  } else {
    j["boundary_pair"] = nullptr;
  }
  if (with_timing) j["seconds"] = r.seconds;
  return j;
}

bool verify_cohomology(const CohomologyGroup& h) {
  if (h.generators.size() != h.factors.size()) return false;
  for (size_t i = 0; i < h.factors.size(); ++i) {
    int64_t f = h.factors[i];
    if (f < 2 || (i + 1 < h.factors.size() && h.factors[i + 1] % f != 0)) return false;
    const Cochain& c = h.generators[i];
    if (c.degree() != h.degree || !is_cocycle(c)) return false;
    if (!solve_coboundary(c * f)) return false;
    for (int64_t p = 2, r = f; p <= r; ++p) {
      if (r % p) continue;
      while (r % p == 0) r /= p;
      if (solve_coboundary(c * (f / p))) return false;
    }
  }
  return true;
}

CohomologyCache::CohomologyCache(fs::path dir) : dir_(std::move(dir)) {}

std::optional<CohomologyCache> CohomologyCache::from_flag_or_env(const std::string& flag) {
  if (!flag.empty()) return CohomologyCache(flag);
  if (const char* env = std::getenv("DWKIT_CACHE"); env && *env) return CohomologyCache(env);
  return std::nullopt;
}

fs::path CohomologyCache::entry_path(const GroupPtr& g, int degree, int64_t budget) const {
  return dir_ / ("h" + g->canonical_hash() + "-n" + std::to_string(degree) + "-b" + std::to_string(budget) + ".json");
}

std::optional<CohomologyGroup> CohomologyCache::load(const GroupPtr& g, int degree, int64_t budget) const {
  fs::path p = entry_path(g, degree, budget);
  if (!fs::is_regular_file(p)) return std::nullopt;
  try {
    Json j = read_json_file(p);
    if (!j.is_object() || j.value("version", "") != kVersion) return std::nullopt;
    Json key{{"group", g->canonical_hash()}, {"degree", degree}, {"budget", budget}};
    if (j["key"] != key) return std::nullopt;
    CohomologyGroup h = cohomology_from_json(j["payload"], g);
    if (h.degree != degree || !verify_cohomology(h)) return std::nullopt;
    return h;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void CohomologyCache::store(const CohomologyGroup& h, int64_t budget) const {
  fs::create_directories(dir_);
  fs::path p = entry_path(h.group, h.degree, budget);
  Json j{{"version", kVersion},
         {"key", {{"group", h.group->canonical_hash()}, {"degree", h.degree}, {"budget", budget}}},
         {"payload", cohomology_to_json(h)}};
  fs::path tmp = p;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache entry " + tmp.string());
    out << j.dump() << "\n";
    if (!out) throw Error("cannot write cache entry " + tmp.string());
  }
  fs::rename(tmp, p);
}

}  // namespace dwkit
