#include "flagsurge/scene.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "flagsurge/error.hpp"
#include "flagsurge/surgery.hpp"

namespace flagsurge {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SceneInvalid, "field '" + path + "': " + what);
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

double real(const json& j, const std::string& path) {
  if (!j.is_number()) invalid(path, "expected a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) invalid(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::vector<double> reals(const json& j, const std::string& path, std::size_t n) {
  json flat = j;
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    flat = json::array();
    for (const auto& row : j)
      for (const auto& x : row) flat.push_back(x);
  }
  if (!flat.is_array() || flat.size() != n) invalid(path, "expected " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(real(flat[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

template <class T, class F>
T guarded(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SceneInvalid) throw;
    invalid(path, e.what());
  }
}

GroupElem matrix_literal(const json& j, const std::string& path) {
  const std::vector<double> v = reals(j, path, 9);
  std::array<double, 9> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return guarded<GroupElem>(path, [&] { return GroupElem::from_rows(a); });
}

Flag flag_literal(const json& j, const std::string& path) {
  std::vector<double> p, n;
  if (j.is_object()) {
    if (!j.contains("p") || !j.contains("n")) invalid(path, "expected keys 'p' and 'n'");
    p = reals(j["p"], path + ".p", 3);
    n = reals(j["n"], path + ".n", 3);
  } else {
    const std::vector<double> v = reals(j, path, 6);
    p.assign(v.begin(), v.begin() + 3);
    n.assign(v.begin() + 3, v.end());
  }
  return guarded<Flag>(path, [&] { return make_flag({p[0], p[1], p[2]}, {n[0], n[1], n[2]}); });
}

json flag_json(const Flag& x) {
  return json::array({x.p.v[0], x.p.v[1], x.p.v[2], x.d.n[0], x.d.n[1], x.d.n[2]});
}

struct Parser {
  Scene& s;

  GroupElem matrix_ref(const json& j, const std::string& path) {
    if (j.is_string()) {
      const auto it = s.matrices.find(j.get<std::string>());
      if (it == s.matrices.end()) invalid(path, "unknown matrix '" + j.get<std::string>() + "'");
      return it->second;
    }
    return matrix_literal(j, path);
  }

  Flag flag_ref(const json& j, const std::string& path) {
    if (j.is_string()) {
      const auto it = s.flags.find(j.get<std::string>());
      if (it == s.flags.end()) invalid(path, "unknown flag '" + j.get<std::string>() + "'");
      return it->second;
    }
    return flag_literal(j, path);
  }

  Tube tube_literal(const json& j, const std::string& path) {
    if (!j.is_object()) invalid(path, "expected a tube object");
    if (!j.contains("center")) invalid(path, "missing 'center'");
    const Flag c = flag_ref(j["center"], path + ".center");
    double ra = 0.0, rb = 0.0;
    if (j.contains("radius")) {
      ra = rb = real(j["radius"], path + ".radius");
    } else {
      if (!j.contains("r_alpha") || !j.contains("r_beta")) invalid(path, "missing 'r_alpha'/'r_beta' or 'radius'");
      ra = real(j["r_alpha"], path + ".r_alpha");
      rb = real(j["r_beta"], path + ".r_beta");
    }
    return guarded<Tube>(path, [&] { return Tube::make(c, ra, rb); });
  }

  Tube tube_ref(const json& j, const std::string& path) {
    if (j.is_string()) {
      const auto it = s.tubes.find(j.get<std::string>());
      if (it == s.tubes.end()) invalid(path, "unknown tube '" + j.get<std::string>() + "'");
      return it->second;
    }
    return tube_literal(j, path);
  }

  SchottkyConfig schottky(const json& j, const std::string& path) {
    if (!j.is_object()) invalid(path, "expected an object");
    if (!j.contains("generators") || !j["generators"].is_array()) invalid(path + ".generators", "expected a list");
    if (!j.contains("pairs") || !j["pairs"].is_array()) invalid(path + ".pairs", "expected a list");
    std::vector<GroupElem> gens;
    for (std::size_t i = 0; i < j["generators"].size(); ++i)
      gens.push_back(matrix_ref(j["generators"][i], path + ".generators[" + std::to_string(i) + "]"));
    std::vector<TubePair> pairs;
    for (std::size_t i = 0; i < j["pairs"].size(); ++i) {
      const std::string p = path + ".pairs[" + std::to_string(i) + "]";
      const json& e = j["pairs"][i];
      if (!e.is_object() || !e.contains("minus") || !e.contains("plus")) invalid(p, "expected 'minus' and 'plus'");
      pairs.push_back({tube_ref(e["minus"], p + ".minus"), tube_ref(e["plus"], p + ".plus")});
    }
    const double margin = j.contains("margin") ? real(j["margin"], path + ".margin") : 0.05;
    return guarded<SchottkyConfig>(path, [&] { return SchottkyConfig::make(gens, pairs, margin); });
  }
};

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) invalid(path.empty() ? k : path + "." + k, "unknown key");
}

}  // namespace

const GroupElem& Scene::matrix(const std::string& name) const {
  if (name.empty()) {
    if (auto it = matrices.find("g"); it != matrices.end()) return it->second;
    if (matrices.size() == 1) return matrices.begin()->second;
    throw Error(ErrorKind::SceneInvalid, "field 'matrices': name a matrix with --matrix");
  }
  const auto it = matrices.find(name);
  if (it == matrices.end()) throw Error(ErrorKind::SceneInvalid, "field 'matrices." + name + "': not defined");
  return it->second;
}

const Tube& Scene::tube(const std::string& name) const {
  if (name.empty()) {
    if (auto it = tubes.find("P"); it != tubes.end()) return it->second;
    if (tubes.size() == 1) return tubes.begin()->second;
    throw Error(ErrorKind::SceneInvalid, "field 'tubes': name a tube with --tube");
  }
  const auto it = tubes.find(name);
  if (it == tubes.end()) throw Error(ErrorKind::SceneInvalid, "field 'tubes." + name + "': not defined");
  return it->second;
}

const Flag& Scene::flag(const std::string& name) const {
  if (name.empty()) {
    if (auto it = flags.find("x"); it != flags.end()) return it->second;
    if (flags.size() == 1) return flags.begin()->second;
    throw Error(ErrorKind::SceneInvalid, "field 'flags': name a flag with --flag");
  }
  const auto it = flags.find(name);
  if (it == flags.end()) throw Error(ErrorKind::SceneInvalid, "field 'flags." + name + "': not defined");
  return it->second;
}

std::uint64_t Scene::require_seed() const {
  if (!seed) throw Error(ErrorKind::SceneInvalid, "field 'seed': required for sampling commands");
  return *seed;
}

Scene parse_scene(const std::string& text) {
  // Track keys per open object to reject duplicates.
  std::vector<std::set<std::string>> open;
  std::string duplicate;
  const json::parser_callback_t cb = [&](int, json::parse_event_t ev, json& parsed) {
    if (ev == json::parse_event_t::object_start) open.emplace_back();
    if (ev == json::parse_event_t::object_end && !open.empty()) open.pop_back();
    if (ev == json::parse_event_t::key && !open.empty() && duplicate.empty()) {
      const std::string k = parsed.get<std::string>();
      if (!open.back().insert(k).second) duplicate = k;
    }
    return true;
  };
  json j;
  try {
    j = json::parse(text, cb);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SceneInvalid, line_col(text, e.byte) + ": " + e.what());
  }
  if (!duplicate.empty()) invalid(duplicate, "duplicate key");
  if (!j.is_object()) throw Error(ErrorKind::SceneInvalid, "line 1: scene must be a JSON object");
  check_keys(j, "",
             {"seed", "sampling", "matrices", "tubes", "flags", "schottky", "surgery", "combine", "deform", "comment"});

  Scene s;
  Parser p{s};
  json r = json::object();

  if (j.contains("seed")) {
    const json& v = j["seed"];
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      invalid("seed", "expected a non-negative integer");
    s.seed = v.get<std::uint64_t>();
    r["seed"] = *s.seed;
  } else {
    r["seed"] = nullptr;
  }

  if (j.contains("sampling")) {
    const json& v = j["sampling"];
    if (!v.is_object()) invalid("sampling", "expected an object");
    check_keys(v, "sampling", {"m", "margin", "bouquet_m"});
    if (v.contains("m")) s.m = count(v["m"], "sampling.m");
    if (v.contains("margin")) s.margin = real(v["margin"], "sampling.margin");
    if (v.contains("bouquet_m")) s.bouquet_m = count(v["bouquet_m"], "sampling.bouquet_m");
  }
  if (s.m == 0) invalid("sampling.m", "must be positive");
  if (s.bouquet_m < 3) invalid("sampling.bouquet_m", "must be at least 3");
  r["sampling"] = {{"m", s.m}, {"margin", s.margin}, {"bouquet_m", s.bouquet_m}};

  std::set<std::string> names;
  auto claim = [&](const std::string& section, const std::string& name) {
    if (!names.insert(name).second) invalid(section + "." + name, "name already used");
  };

  r["matrices"] = json::object();
  if (j.contains("matrices")) {
    if (!j["matrices"].is_object()) invalid("matrices", "expected an object");
    for (const auto& [k, v] : j["matrices"].items()) {
      claim("matrices", k);
      s.matrices.emplace(k, matrix_literal(v, "matrices." + k));
      r["matrices"][k] = v;
    }
  }
  r["flags"] = json::object();
  if (j.contains("flags")) {
    if (!j["flags"].is_object()) invalid("flags", "expected an object");
    for (const auto& [k, v] : j["flags"].items()) {
      claim("flags", k);
      s.flags.emplace(k, flag_literal(v, "flags." + k));
      r["flags"][k] = flag_json(s.flags.at(k));
    }
  }
  r["tubes"] = json::object();
  if (j.contains("tubes")) {
    if (!j["tubes"].is_object()) invalid("tubes", "expected an object");
    for (const auto& [k, v] : j["tubes"].items()) {
      claim("tubes", k);
      const Tube t = p.tube_literal(v, "tubes." + k);
      s.tubes.emplace(k, t);
      r["tubes"][k] = {{"center", flag_json(t.center)}, {"r_alpha", t.r_alpha}, {"r_beta", t.r_beta}};
    }
  }

  if (j.contains("schottky")) {
    s.schottky = p.schottky(j["schottky"], "schottky");
    r["schottky"] = j["schottky"];
    r["schottky"]["margin"] = s.schottky->margin;
  }

  if (j.contains("surgery")) {
    const json& v = j["surgery"];
    if (!v.is_object()) invalid("surgery", "expected an object");
    check_keys(v, "surgery", {"g", "H2", "n_max", "fit_slack"});
    if (!v.contains("g")) invalid("surgery.g", "missing");
    if (!v.contains("H2")) invalid("surgery.H2", "missing");
    SurgeryScene ss;
    ss.g = p.matrix_ref(v["g"], "surgery.g");
    ss.h2 = p.tube_ref(v["H2"], "surgery.H2");
    if (v.contains("n_max")) ss.n_max = count(v["n_max"], "surgery.n_max");
    if (v.contains("fit_slack")) ss.fit_slack = real(v["fit_slack"], "surgery.fit_slack");
    s.surgery = ss;
    r["surgery"] = v;
    r["surgery"]["n_max"] = ss.n_max;
    r["surgery"]["fit_slack"] = ss.fit_slack;
  }

  if (j.contains("combine")) {
    const json& v = j["combine"];
    if (!v.is_object()) invalid("combine", "expected an object");
    check_keys(v, "combine", {"conjugator", "schottky2", "depth", "syllable_len"});
    if (!v.contains("conjugator")) invalid("combine.conjugator", "missing");
    CombineScene cs;
    cs.conjugator = p.matrix_ref(v["conjugator"], "combine.conjugator");
    if (v.contains("depth")) cs.depth = count(v["depth"], "combine.depth");
    if (v.contains("syllable_len")) cs.syllable_len = count(v["syllable_len"], "combine.syllable_len");
    if (v.contains("schottky2")) {
      cs.second = p.schottky(v["schottky2"], "combine.schottky2");
    } else if (s.schottky) {
      cs.second = guarded<SchottkyConfig>("combine.conjugator",
                                          [&] { return conjugate_config(*s.schottky, cs.conjugator); });
    }
    s.combine = cs;
    r["combine"] = v;
    r["combine"]["depth"] = cs.depth;
    r["combine"]["syllable_len"] = cs.syllable_len;
  }

  if (j.contains("deform")) {
    const json& v = j["deform"];
    if (!v.is_object()) invalid("deform", "expected an object");
    check_keys(v, "deform", {"base", "eps", "eps_alt", "N", "tol", "trace_N"});
    if (!v.contains("base")) invalid("deform.base", "missing");
    if (!v.contains("eps")) invalid("deform.eps", "missing");
    DeformScene d;
    d.base = p.matrix_ref(v["base"], "deform.base");
    const auto e = reals(v["eps"], "deform.eps", 4);
    std::copy(e.begin(), e.end(), d.eps.begin());
    if (v.contains("eps_alt")) {
      const auto a = reals(v["eps_alt"], "deform.eps_alt", 4);
      d.eps_alt = std::array<double, 4>{a[0], a[1], a[2], a[3]};
    }
    if (v.contains("N")) d.N = count(v["N"], "deform.N");
    if (v.contains("tol")) d.tol = real(v["tol"], "deform.tol");
    if (v.contains("trace_N")) d.trace_N = count(v["trace_N"], "deform.trace_N");
    s.deform = d;
    r["deform"] = v;
    r["deform"]["N"] = d.N;
    r["deform"]["tol"] = d.tol;
    r["deform"]["trace_N"] = d.trace_N;
  }

  s.resolved = std::move(r);
  return s;
}

Scene load_scene(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::SceneInvalid, "cannot open scene file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scene(ss.str());
}

}  // namespace flagsurge
