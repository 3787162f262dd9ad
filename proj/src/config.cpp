#include "mshj/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace mshj {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(const IniSection& s, const std::string& msg) {
  throw ConfigError("[" + s.name + "] (line " + std::to_string(s.line) + "): " + msg);
}

double to_double(const IniSection& s, const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  fail(s, key + " = '" + text + "' is not a number");
}

long to_int(const IniSection& s, const std::string& key, const std::string& text, long min) {
  try {
    std::size_t used = 0;
    long v = std::stol(text, &used);
    if (trim(text.substr(used)).empty() && v >= min) return v;
  } catch (const std::exception&) {
  }
  fail(s, key + " = '" + text + "' must be an integer >= " + std::to_string(min));
}

void only_keys(const IniSection& s, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : s.entries)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) fail(s, "unknown key '" + k + "'");
}

}  // namespace

const std::string* IniSection::get(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

std::vector<IniSection> parse_ini(std::istream& in) {
  std::vector<IniSection> out;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == ';' || s[0] == '#') continue;
    if (s[0] == '[') {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated section header");
      std::string name = trim(std::string_view(s).substr(1, s.size() - 2));
      if (name.empty()) throw ConfigError("line " + std::to_string(line) + ": empty section name");
      if (!seen.insert(name).second) throw ConfigError("line " + std::to_string(line) + ": duplicate section [" + name + "]");
      out.push_back({name, line, {}});
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    if (out.empty()) throw ConfigError("line " + std::to_string(line) + ": key outside of any section");
    std::string key = trim(std::string_view(s).substr(0, eq));
    std::string value = trim(std::string_view(s).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
    if (out.back().get(key)) throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    out.back().entries.emplace_back(key, value);
  }
  return out;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string t = trim(item);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(t, &used));
      if (used != t.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError(what + ": '" + t + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

RunConfig RunConfig::parse(std::istream& in) {
  RunConfig c;
  bool have_model = false;
  for (const IniSection& s : parse_ini(in)) {
    const std::string& name = s.name;
    if (name == "model") {
      have_model = true;
      only_keys(s, {"builtin", "m", "n", "lagrangian", "hamiltonian"});
      if (auto v = s.get("builtin")) c.builtin = *v;
      if (auto v = s.get("m")) c.m = static_cast<int>(to_int(s, "m", *v, 1));
      if (auto v = s.get("n")) c.n = static_cast<int>(to_int(s, "n", *v, 1));
      if (auto v = s.get("lagrangian")) c.lagrangian = *v;
      if (auto v = s.get("hamiltonian")) c.hamiltonian = *v;
      if (c.builtin && (c.m || c.n || c.lagrangian || c.hamiltonian))
        fail(s, "builtin models take their parameters from [model.params]");
      if (!c.builtin && !c.lagrangian && !c.hamiltonian) fail(s, "needs builtin, lagrangian or hamiltonian");
    } else if (name == "model.params") {
      for (const auto& [k, v] : s.entries) c.params[k] = v;
    } else if (name.rfind("candidates.", 0) == 0) {
      CandidateSpec cs;
      cs.name = name.substr(11);
      if (cs.name.empty()) fail(s, "candidate needs a name");
      const std::string* kind = s.get("kind");
      if (!kind) fail(s, "missing kind");
      static const std::set<std::string> kinds{"jetfield", "section", "generating", "coefficients", "family"};
      if (!kinds.count(*kind)) fail(s, "unknown kind '" + *kind + "'");
      cs.kind = *kind;
      for (const auto& [k, v] : s.entries)
        if (k != "kind") cs.entries[k] = v;
      c.candidates.push_back(std::move(cs));
    } else if (name.rfind("grid.", 0) == 0) {
      only_keys(s, {"lo", "hi", "count"});
      Axis a;
      a.name = name.substr(5);
      const std::string *lo = s.get("lo"), *hi = s.get("hi"), *count = s.get("count");
      if (!lo || !hi || !count) fail(s, "grid axes need lo, hi and count");
      a.lo = to_double(s, "lo", *lo);
      a.hi = to_double(s, "hi", *hi);
      a.count = static_cast<std::size_t>(to_int(s, "count", *count, 1));
      if (a.lo > a.hi) fail(s, "lo > hi");
      c.grid.push_back(a);
    } else if (name == "run") {
      only_keys(s, {"tolerance", "jobs", "policy"});
      if (auto v = s.get("tolerance")) c.tolerance = to_double(s, "tolerance", *v);
      if (auto v = s.get("jobs")) c.jobs = static_cast<unsigned>(to_int(s, "jobs", *v, 1));
      if (auto v = s.get("policy")) {
        if (*v == "fail_fast") c.policy = ErrorPolicy::FailFast;
        else if (*v == "skip") c.policy = ErrorPolicy::RecordAndSkip;
        else fail(s, "policy must be fail_fast or skip");
      }
    } else if (name == "reconstruct") {
      only_keys(s, {"x0", "u0", "lo", "hi", "steps", "order", "holonomy_tol", "el_tol", "path_tol"});
      ReconstructSpec r;
      for (auto [key, dst] : {std::pair{"x0", &r.x0}, {"u0", &r.u0}, {"lo", &r.lo}, {"hi", &r.hi}}) {
        const std::string* v = s.get(key);
        if (!v) fail(s, std::string("missing ") + key);
        *dst = parse_number_list(*v, std::string("[reconstruct] ") + key);
      }
      if (auto v = s.get("steps")) r.steps = static_cast<std::size_t>(to_int(s, "steps", *v, 2));
      if (auto v = s.get("order"))
        for (double k : parse_number_list(*v, "[reconstruct] order")) r.order.push_back(static_cast<int>(k) - 1);
      if (auto v = s.get("holonomy_tol")) r.holonomy_tol = to_double(s, "holonomy_tol", *v);
      if (auto v = s.get("el_tol")) r.el_tol = to_double(s, "el_tol", *v);
      if (auto v = s.get("path_tol")) r.path_tol = to_double(s, "path_tol", *v);
      c.reconstruct = r;
    } else if (name == "output") {
      only_keys(s, {"csv"});
      if (auto v = s.get("csv")) c.csv = *v;
    } else {
      fail(s, "unknown section");
    }
  }
  if (!have_model) throw ConfigError("config has no [model] section");
  if (!c.params.empty() && !c.builtin) throw ConfigError("[model.params] is only valid with a builtin model");
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse(in);
}

ModelBundle resolve_model(const RunConfig& config) {
  ModelBundle b;
  if (config.builtin) {
    b = builtin(*config.builtin, config.params);
  } else {
    const Dimensions d{config.m.value_or(1), config.n.value_or(1)};
    b.name = "custom";
    if (config.lagrangian) b.theory = std::make_shared<FieldTheory>(d, parse_in(*config.lagrangian, d, jet_slots(d)));
    std::shared_ptr<const ExplicitHamiltonian> closed;
    if (config.hamiltonian)
      closed = std::make_shared<ExplicitHamiltonian>(d, parse_in(*config.hamiltonian, d, momentum_slots(d)));
    b.closed_form = closed;
    if (b.theory) b.derived = std::make_shared<DerivedHamiltonian>(b.theory);
    b.hamiltonian = closed ? HamiltonianPtr(closed) : b.derived;
    if (d.m == 1) {
      b.F = LagCoefficients::solved(d);
      b.G = HamCoefficients::solved(d);
    } else {
      b.F = LagCoefficients::induced(d);
      b.G = HamCoefficients::induced(d);
    }
  }

  if (!config.grid.empty()) {
    const Dimensions d = b.theory ? b.theory->dims() : b.hamiltonian->dims();
    std::vector<std::string> want = base_slots(d);
    std::vector<std::string> got;
    for (const auto& a : config.grid) got.push_back(a.name);
    auto aliases = coordinate_aliases(d);
    for (auto& g : got)
      if (auto it = aliases.find(g); it != aliases.end()) g = it->second;
    std::vector<Axis> axes;
    for (const auto& w : want) {
      auto it = std::find(got.begin(), got.end(), w);
      if (it == got.end()) throw ConfigError("grid is missing axis [grid." + w + "]");
      Axis a = config.grid[static_cast<std::size_t>(it - got.begin())];
      a.name = w;
      axes.push_back(a);
    }
    if (got.size() != want.size()) throw ConfigError("grid axes must be exactly the coordinates x1..xm, u1..un");
    b.grid.axes = axes;
    b.jet_grid.axes = axes;
    for (auto& a : b.jet_grid.axes) a.count = std::min<std::size_t>(a.count, 3);
    const std::size_t vc = d.jets() <= 2 ? 9 : 5;
    for (int al = 0; al < d.n; ++al)
      for (int i = 0; i < d.m; ++i) b.jet_grid.axes.push_back({v_name(al, i), -2, 2, vc});
  }
  if (b.grid.axes.empty()) throw ConfigError("custom models need [grid.*] sections");
  b.grid.validate();
  return b;
}

}  // namespace mshj
