#include "spinorlab/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace spinorlab {

const char* const kVersion = "spinorlab 0.1.0";

namespace {

const std::map<std::string, std::string>& known_keys() {
  static const std::map<std::string, std::string> defaults = {
      {"grid.n", "32"},
      {"grid.length", "5"},
      {"mass", "1"},
      {"coupling", "1"},
      {"potential.kind", "yukawa"},
      {"potential.gamma", "0"},
      {"potential.mu0", "1"},
      {"potential.zero_mode", "zero"},
      {"solver.dt", "0.015625"},
      {"solver.T", "1"},
      {"solver.picard_iters", "3"},
      {"solver.s", "0.25"},
      {"solver.record_stride", "1"},
      {"sweep.kind", "strichartz"},
      {"sweep.kmin", "0"},
      {"sweep.kmax", "4"},
      {"sweep.k1", "5"},
      {"sweep.k2", "5"},
      {"sweep.theta1", "1"},
      {"sweep.theta2", "-1"},
      {"sweep.p", "4"},
      {"sweep.q", "3"},
      {"sweep.kprime", "0"},
      {"sweep.trials", "8"},
      {"sweep.slices", "32"},
      {"sweep.seed", "12345"},
      {"data.amplitude", "0.01"},
      {"data.sigma", "1"},
      {"data.freq", "2"},
      {"illposed.lams", "8,16,32"},
      {"illposed.eps", "0.05"},
      {"illposed.samples", "100000"},
      {"illposed.s", "-0.25"},
      {"illposed.m", "0"},
      {"output.dir", "out"},
  };
  return defaults;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

int RunConfig::geti(const std::string& key) const {
  return int(std::stol(gets(key)));
}

double RunConfig::getd(const std::string& key) const {
  return std::stod(gets(key));
}

std::uint64_t RunConfig::getu(const std::string& key) const {
  return std::stoull(gets(key));
}

std::string RunConfig::gets(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end())
    throw std::invalid_argument("config: unknown key '" + key + "'");
  return it->second;
}

std::vector<double> RunConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(gets(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.kv = known_keys();
  return cfg;
}

void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (!known_keys().count(key))
    throw std::invalid_argument("config: unknown key '" + key + "'");
  cfg.kv[key] = value;
  cfg.explicit_keys.insert(key);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  RunConfig cfg = default_config();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: " + path + ":" +
                                  std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      set_key(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " +
                                  e.what());
    }
  }
  return cfg;
}

void apply_env_overrides(RunConfig& cfg) {
  for (const auto& [key, def] : known_keys()) {
    (void)def;
    std::string env = "SPINORLAB_";
    for (char c : key)
      env += (c == '.') ? '_' : char(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(env.c_str())) set_key(cfg, key, v);
  }
}

void validate(const RunConfig& cfg) {
  const long n = cfg.geti("grid.n");
  if (!is_power_of_two(n) || n < 8)
    throw std::invalid_argument("grid.n: power of two required (>= 8)");
  if (!(cfg.getd("grid.length") > 0))
    throw std::invalid_argument("grid.length: must be positive");
  if (!(cfg.getd("mass") >= 0))
    throw std::invalid_argument("mass: must be >= 0");
  const std::string kind = cfg.gets("potential.kind");
  if (kind != "yukawa" && kind != "coulomb" && kind != "interp" &&
      kind != "constant")
    throw std::invalid_argument("potential.kind: unknown kind '" + kind + "'");
  if (kind != "yukawa" && cfg.was_set("potential.mu0"))
    throw std::invalid_argument("potential.mu0: mu0 only for yukawa");
  const std::string zm = cfg.gets("potential.zero_mode");
  if (zm != "zero" && zm != "error")
    throw std::invalid_argument("potential.zero_mode: must be zero or error");
  potential_from(cfg);  // per-kind gamma/mu0 constraints
  validate(evolution_from(cfg));
  if (!(cfg.geti("sweep.trials") >= 1))
    throw std::invalid_argument("sweep.trials: must be >= 1");
  if (!(cfg.geti("sweep.slices") >= 2))
    throw std::invalid_argument("sweep.slices: must be >= 2");
  if (!(cfg.getd("illposed.eps") > 0 && cfg.getd("illposed.eps") < 1))
    throw std::invalid_argument("illposed.eps: must be in (0, 1)");
}

BoxGrid grid_from(const RunConfig& cfg) {
  return make_grid(cfg.geti("grid.n"), cfg.getd("grid.length"));
}

PotentialSpec potential_from(const RunConfig& cfg) {
  const std::string kind = cfg.gets("potential.kind");
  const ZeroModePolicy pol = cfg.gets("potential.zero_mode") == "error"
                                 ? ZeroModePolicy::error
                                 : ZeroModePolicy::zero;
  PotentialKind pk;
  if (kind == "yukawa") pk = PotentialKind::yukawa;
  else if (kind == "coulomb") pk = PotentialKind::coulomb;
  else if (kind == "interp") pk = PotentialKind::interp;
  else pk = PotentialKind::constant;
  return make_potential(pk, cfg.getd("potential.gamma"),
                        cfg.getd("potential.mu0"), pol);
}

EvolutionConfig evolution_from(const RunConfig& cfg) {
  EvolutionConfig e;
  e.m = cfg.getd("mass");
  e.coupling = cfg.getd("coupling");
  e.potential = potential_from(cfg);
  e.dt = cfg.getd("solver.dt");
  e.T = cfg.getd("solver.T");
  e.picard_iters = cfg.geti("solver.picard_iters");
  e.s = cfg.getd("solver.s");
  e.record_stride = cfg.geti("solver.record_stride");
  return e;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& [k, v] : cfg.kv) {  // std::map: sorted
    mix(k);
    mix("=");
    mix(v);
    mix("\n");
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  // Shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepPoint>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_sweep_csv: cannot open " + path);
  out << "k,k1,k2,l,theta1,theta2,m,p,q,trials,seed,measured,bound,ratio\n";
  for (const SweepPoint& p : points)
    out << p.k << ',' << p.k1 << ',' << p.k2 << ',' << p.l << ',' << p.theta1
        << ',' << p.theta2 << ',' << format_double(p.m) << ','
        << format_double(p.p) << ',' << format_double(p.q) << ',' << p.trials
        << ',' << p.seed << ',' << format_double(p.measured) << ','
        << format_double(p.bound) << ',' << format_double(p.ratio) << '\n';
}

bool report_pass(const Report& rep) {
  for (const auto& [name, ok] : rep.checks)
    if (!ok) return false;
  return true;
}

std::string report_json(const Report& rep) {
  nlohmann::ordered_json j;
  j["suite"] = rep.suite;
  j["version"] = rep.version.empty() ? kVersion : rep.version;
  char hash[20];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(rep.config_hash));
  j["config_hash"] = hash;
  j["seed"] = rep.seed;
  j["pass"] = report_pass(rep);
  nlohmann::ordered_json checks = nlohmann::ordered_json::object();
  for (const auto& [name, ok] : rep.checks) checks[name] = ok;
  j["checks"] = checks;
  nlohmann::ordered_json values = nlohmann::ordered_json::object();
  for (const auto& [name, v] : rep.values) values[name] = format_double(v);
  j["values"] = values;
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();
  for (const auto& [name, v] : rep.notes) notes[name] = v;
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

void write_report(const std::string& path, const Report& rep) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_report: cannot open " + path);
  out << report_json(rep);
}

}  // namespace spinorlab
