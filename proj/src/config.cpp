#include "rydmf/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rydmf {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> entries;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

class Parser {
 public:
  Parser(const std::string& text, std::string source) : source_(std::move(source)) { parse(text); }

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
  }

  const Section* section(const std::string& name) {
    auto it = sections_.find(name);
    if (it == sections_.end()) return nullptr;
    used_sections_.insert(name);
    return &it->second;
  }

  // Marks every known key; anything left over is rejected by finish().
  void allow(const std::string& sec, std::initializer_list<const char*> keys) {
    for (const char* k : keys) known_[sec].insert(k);
  }

  void finish() const {
    for (const auto& [name, sec] : sections_) {
      auto known = known_.find(name);
      if (known == known_.end()) fail(sec.line, "unknown section [" + name + "]");
      for (const auto& [key, e] : sec.entries) {
        if (!known->second.count(key)) fail(e.line, "unknown key '" + key + "' in [" + name + "]");
      }
    }
  }

  std::optional<double> number(const Section* s, const std::string& key) const {
    const Entry* e = find(s, key);
    if (!e) return std::nullopt;
    double v = 0.0;
    const char* b = e->value.data();
    const char* end = b + e->value.size();
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end) fail(e->line, "'" + key + "' is not a number: " + e->value);
    return v;
  }

  std::optional<std::uint64_t> integer(const Section* s, const std::string& key) const {
    const Entry* e = find(s, key);
    if (!e) return std::nullopt;
    std::uint64_t v = 0;
    const char* b = e->value.data();
    const char* end = b + e->value.size();
    auto [ptr, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || ptr != end) {
      fail(e->line, "'" + key + "' is not a non-negative integer: " + e->value);
    }
    return v;
  }

  std::optional<std::string> text(const Section* s, const std::string& key) const {
    const Entry* e = find(s, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::vector<double> list(const Section* s, const std::string& key) const {
    std::vector<double> out;
    const Entry* e = find(s, key);
    if (!e) return out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        fail(e->line, "'" + key + "' must be a comma-separated list of numbers");
      }
      out.push_back(v);
    }
    return out;
  }

  int line_of(const Section* s, const std::string& key) const {
    const Entry* e = find(s, key);
    return e ? e->line : s->line;
  }

 private:
  const Entry* find(const Section* s, const std::string& key) const {
    if (!s) return nullptr;
    auto it = s->entries.find(key);
    return it == s->entries.end() ? nullptr : &it->second;
  }

  void parse(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    Section* current = nullptr;
    while (std::getline(in, raw)) {
      ++line;
      const auto cut = raw.find_first_of("#;");
      const std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') fail(line, "malformed section header");
        const std::string name = trim(s.substr(1, s.size() - 2));
        if (name.empty()) fail(line, "empty section name");
        if (sections_.count(name)) fail(line, "duplicate section [" + name + "]");
        current = &sections_[name];
        current->line = line;
        continue;
      }
      const auto eq = s.find('=');
      if (eq == std::string::npos) fail(line, "expected 'key = value'");
      if (!current) fail(line, "key outside of any section");
      const std::string key = trim(s.substr(0, eq));
      const std::string value = trim(s.substr(eq + 1));
      if (key.empty()) fail(line, "empty key");
      if (value.empty()) fail(line, "empty value for '" + key + "'");
      if (current->entries.count(key)) fail(line, "duplicate key '" + key + "'");
      current->entries[key] = {value, line};
    }
  }

  std::string source_;
  std::map<std::string, Section> sections_;
  std::set<std::string> used_sections_;
  std::map<std::string, std::set<std::string>> known_;
};

// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

SchemeParams RunConfig::scheme_params() const {
  SchemeParams p;
  p.omega1 = mhz_to_angular(scheme.omega1);
  p.omega2 = mhz_to_angular(scheme.omega2);
  p.omega3 = mhz_to_angular(scheme.omega3);
  p.delta1 = mhz_to_angular(scheme.delta1);
  p.delta2 = mhz_to_angular(scheme.delta2);
  p.delta3 = mhz_to_angular(scheme.delta3);
  p.gamma1 = mhz_to_angular(scheme.gamma1);
  p.gamma2 = mhz_to_angular(scheme.gamma2);
  p.gamma3 = mhz_to_angular(scheme.gamma3);
  return p;
}

InteractionParams RunConfig::interaction_params() const {
  InteractionParams ip;
  ip.c6_ref = mhz_to_angular(interaction.c6_ref);
  ip.n_ref = interaction.n_ref;
  ip.n = interaction.n;
  if (interaction.c6) ip.c6_direct = mhz_to_angular(*interaction.c6);
  return ip;
}

double RunConfig::to_internal(double v) const {
  return is_frequency(sweep.parameter) ? mhz_to_angular(v) : v;
}

double RunConfig::to_config_units(double v) const {
  return is_frequency(sweep.parameter) ? angular_to_mhz(v) : v;
}

void RunConfig::require_sweep_sections() const {
  if (!has_interaction) throw ConfigError("missing section [interaction]");
  if (!has_cloud) throw ConfigError("missing section [cloud]");
  if (!has_sweep) throw ConfigError("missing section [sweep]");
}

SweepSpec RunConfig::sweep_spec() const {
  require_sweep_sections();
  SweepSpec s;
  s.parameter = sweep.parameter;
  s.start = to_internal(sweep.start);
  s.stop = to_internal(sweep.stop);
  s.points = sweep.points;
  s.n_realizations = sweep.realizations;
  s.base.scheme = scheme_params();
  s.base.interaction = interaction_params();
  s.base.geometry = cloud.geometry;
  s.base.solver = solver;
  return s;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  Parser ps(text, source);
  ps.allow("scheme", {"omega1", "omega2", "omega3", "delta1", "delta2", "delta3", "gamma1",
                      "gamma2", "gamma3"});
  ps.allow("interaction", {"c6_ref", "n_ref", "n", "c6"});
  ps.allow("cloud", {"n_atoms", "shape", "radius", "density", "edges", "r_min"});
  ps.allow("sweep", {"parameter", "start", "stop", "points", "realizations", "master_seed"});
  ps.allow("solver", {"tolerance", "damping", "max_iterations", "initial_guess", "provided_rho44"});
  ps.allow("susceptibility", {"prefactor"});
  ps.allow("feature", {"window_lo", "window_hi", "significance"});
  ps.allow("output", {"csv", "summary"});
  ps.finish();

  RunConfig c;
  // Re-throws library validation errors with the offending line attached.
  const auto checked = [&](int line, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError& e) {
      ps.fail(line, e.what());
    }
  };

  const Section* scheme = ps.section("scheme");
  if (!scheme) throw ConfigError(source + ": missing section [scheme]");
  {
    SchemeConfig& s = c.scheme;
    s.omega1 = ps.number(scheme, "omega1").value_or(0.0);
    s.omega2 = ps.number(scheme, "omega2").value_or(0.0);
    s.omega3 = ps.number(scheme, "omega3").value_or(0.0);
    s.delta1 = ps.number(scheme, "delta1").value_or(0.0);
    s.delta2 = ps.number(scheme, "delta2").value_or(0.0);
    s.delta3 = ps.number(scheme, "delta3").value_or(0.0);
    s.gamma1 = ps.number(scheme, "gamma1").value_or(0.0);
    s.gamma2 = ps.number(scheme, "gamma2").value_or(0.0);
    s.gamma3 = ps.number(scheme, "gamma3").value_or(0.0);
    checked(scheme->line, [&] { c.scheme_params().validate(); });
  }

  if (const Section* s = ps.section("interaction")) {
    c.has_interaction = true;
    c.interaction.c6_ref = ps.number(s, "c6_ref").value_or(0.0);
    c.interaction.n_ref = ps.number(s, "n_ref").value_or(0.0);
    c.interaction.n = ps.number(s, "n").value_or(0.0);
    c.interaction.c6 = ps.number(s, "c6");
    checked(s->line, [&] { c.interaction_params().validate(); });
  }

  if (const Section* s = ps.section("cloud")) {
    c.has_cloud = true;
    CloudGeometry& g = c.cloud.geometry;
    const auto n = ps.integer(s, "n_atoms");
    if (!n) ps.fail(s->line, "[cloud] requires n_atoms");
    g.n_atoms = *n;
    checked(ps.line_of(s, "shape"), [&] { g.shape = parse_cloud_shape(ps.text(s, "shape").value_or("sphere")); });
    g.r_min = ps.number(s, "r_min").value_or(0.5);
    const auto radius = ps.number(s, "radius");
    const auto density = ps.number(s, "density");
    if (g.shape == CloudShape::sphere) {
      if (radius && density) ps.fail(ps.line_of(s, "density"), "give either radius or density, not both");
      if (!radius && !density) ps.fail(s->line, "[cloud] sphere requires radius or density");
      if (density) {
        checked(ps.line_of(s, "density"), [&] { g.radius = sphere_radius_for_density(g.n_atoms, *density); });
        c.cloud.density = density;
      } else {
        g.radius = *radius;
      }
    } else {
      const auto edges = ps.list(s, "edges");
      if (edges.size() != 3) ps.fail(ps.line_of(s, "edges"), "[cloud] box requires edges = a, b, c");
      g.edges = {edges[0], edges[1], edges[2]};
    }
    checked(s->line, [&] { g.validate(); });
  }

  if (const Section* s = ps.section("sweep")) {
    c.has_sweep = true;
    SweepSettings& w = c.sweep;
    const auto param = ps.text(s, "parameter");
    if (!param) ps.fail(s->line, "[sweep] requires parameter");
    checked(ps.line_of(s, "parameter"), [&] { w.parameter = parse_sweep_parameter(*param); });
    const auto start = ps.number(s, "start");
    const auto stop = ps.number(s, "stop");
    const auto points = ps.integer(s, "points");
    if (!start || !stop || !points) ps.fail(s->line, "[sweep] requires start, stop and points");
    w.start = *start;
    w.stop = *stop;
    w.points = *points;
    if (w.points < 2) ps.fail(ps.line_of(s, "points"), "points must be at least 2");
    w.realizations = ps.integer(s, "realizations").value_or(1);
    if (w.realizations < 1) ps.fail(ps.line_of(s, "realizations"), "realizations must be at least 1");
    w.master_seed = ps.integer(s, "master_seed").value_or(0);
  }

  if (const Section* s = ps.section("solver")) {
    SolverConfig& v = c.solver;
    v.tolerance = ps.number(s, "tolerance").value_or(v.tolerance);
    v.damping = ps.number(s, "damping").value_or(v.damping);
    v.max_iterations = static_cast<int>(ps.integer(s, "max_iterations").value_or(v.max_iterations));
    if (auto g = ps.text(s, "initial_guess")) {
      checked(ps.line_of(s, "initial_guess"), [&] { v.initial_guess = parse_initial_guess(*g); });
    }
    v.provided = ps.list(s, "provided_rho44");
    if (v.initial_guess == InitialGuess::provided && v.provided.empty()) {
      ps.fail(ps.line_of(s, "initial_guess"), "initial_guess = provided needs provided_rho44");
    }
    checked(s->line, [&] { v.validate(); });
  }

  if (const Section* s = ps.section("susceptibility")) {
    SusceptibilityParams sp;
    const auto pre = ps.number(s, "prefactor");
    if (!pre) ps.fail(s->line, "[susceptibility] requires prefactor");
    sp.prefactor = *pre;
    checked(ps.line_of(s, "prefactor"), [&] { sp.validate(); });
    c.susceptibility = sp;
  }

  if (const Section* s = ps.section("feature")) {
    FeatureWindow f;
    const auto lo = ps.number(s, "window_lo");
    const auto hi = ps.number(s, "window_hi");
    if (!lo || !hi) ps.fail(s->line, "[feature] requires window_lo and window_hi");
    f.lo = *lo;
    f.hi = *hi;
    f.significance = ps.number(s, "significance").value_or(f.significance);
    c.feature = f;
  }

  if (const Section* s = ps.section("output")) {
    c.output_csv = ps.text(s, "csv").value_or("");
    c.output_summary = ps.text(s, "summary").value_or("");
  }

  if (c.has_sweep && c.has_interaction) {
    checked(scheme->line, [&] {
      if (c.sweep.parameter == SweepParameter::n && c.interaction.c6) {
        throw ConfigError("cannot sweep n when c6 is given directly");
      }
    });
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ": invalid JSON: " + e.what());
    }
    if (!j.contains("resolved_config") || !j["resolved_config"].is_string()) {
      throw ConfigError(path + ": JSON summary lacks resolved_config");
    }
    return parse_config(j["resolved_config"].get<std::string>(), path + "#resolved_config");
  }
  return parse_config(text, path);
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  const SchemeConfig& s = c.scheme;
  os << "[scheme]\n"
     << "omega1 = " << num(s.omega1) << "\n"
     << "omega2 = " << num(s.omega2) << "\n"
     << "omega3 = " << num(s.omega3) << "\n"
     << "delta1 = " << num(s.delta1) << "\n"
     << "delta2 = " << num(s.delta2) << "\n"
     << "delta3 = " << num(s.delta3) << "\n"
     << "gamma1 = " << num(s.gamma1) << "\n"
     << "gamma2 = " << num(s.gamma2) << "\n"
     << "gamma3 = " << num(s.gamma3) << "\n";
  if (c.has_interaction) {
    os << "\n[interaction]\n";
    if (c.interaction.c6) {
      os << "c6 = " << num(*c.interaction.c6) << "\n";
    } else {
      os << "c6_ref = " << num(c.interaction.c6_ref) << "\n"
         << "n_ref = " << num(c.interaction.n_ref) << "\n"
         << "n = " << num(c.interaction.n) << "\n";
    }
  }
  if (c.has_cloud) {
    const CloudGeometry& g = c.cloud.geometry;
    os << "\n[cloud]\n"
       << "n_atoms = " << g.n_atoms << "\n"
       << "shape = " << to_string(g.shape) << "\n";
    if (g.shape == CloudShape::sphere) {
      // The radius is a deterministic function of the density, so the
      // density alone reproduces it exactly.
      if (c.cloud.density) {
        os << "density = " << num(*c.cloud.density) << "\n";
      } else {
        os << "radius = " << num(g.radius) << "\n";
      }
    } else {
      os << "edges = " << num(g.edges[0]) << ", " << num(g.edges[1]) << ", " << num(g.edges[2]) << "\n";
    }
    os << "r_min = " << num(g.r_min) << "\n";
  }
  if (c.has_sweep) {
    os << "\n[sweep]\n"
       << "parameter = " << to_string(c.sweep.parameter) << "\n"
       << "start = " << num(c.sweep.start) << "\n"
       << "stop = " << num(c.sweep.stop) << "\n"
       << "points = " << c.sweep.points << "\n"
       << "realizations = " << c.sweep.realizations << "\n"
       << "master_seed = " << c.sweep.master_seed << "\n";
  }
  os << "\n[solver]\n"
     << "tolerance = " << num(c.solver.tolerance) << "\n"
     << "damping = " << num(c.solver.damping) << "\n"
     << "max_iterations = " << c.solver.max_iterations << "\n"
     << "initial_guess = " << to_string(c.solver.initial_guess) << "\n";
  if (!c.solver.provided.empty()) {
    os << "provided_rho44 = ";
    for (std::size_t i = 0; i < c.solver.provided.size(); ++i) {
      os << (i ? ", " : "") << num(c.solver.provided[i]);
    }
    os << "\n";
  }
  if (c.susceptibility) {
    os << "\n[susceptibility]\nprefactor = " << num(c.susceptibility->prefactor) << "\n";
  }
  if (c.feature) {
    os << "\n[feature]\n"
       << "window_lo = " << num(c.feature->lo) << "\n"
       << "window_hi = " << num(c.feature->hi) << "\n"
       << "significance = " << num(c.feature->significance) << "\n";
  }
  return os.str();
}

std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_config_text(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rydmf
