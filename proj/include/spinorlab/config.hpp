#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spinorlab/estimates.hpp"
#include "spinorlab/evolution.hpp"
#include "spinorlab/grid.hpp"
#include "spinorlab/potential.hpp"

// Flat dotted-key run configuration with strict unknown-key rejection,
// environment overrides, and the deterministic CSV/JSON writers.
namespace spinorlab {

struct RunConfig {
  // Every known key with its current textual value; defaults pre-filled.
  std::map<std::string, std::string> kv;
  // Keys that were set explicitly (file, flag or environment).
  std::set<std::string> explicit_keys;

  int geti(const std::string& key) const;
  double getd(const std::string& key) const;
  std::string gets(const std::string& key) const;
  std::uint64_t getu(const std::string& key) const;
  std::vector<double> get_list(const std::string& key) const;  // comma-separated
  bool was_set(const std::string& key) const {
    return explicit_keys.count(key) > 0;
  }
};

RunConfig default_config();

// "key = value" lines, '#' comments. Unknown keys are errors with a line
// diagnostic.
RunConfig parse_config_file(const std::string& path);

// Unknown key -> std::invalid_argument.
void set_key(RunConfig& cfg, const std::string& key, const std::string& value);

// SPINORLAB_GRID_N=64 overrides grid.n, and so on for every known key.
void apply_env_overrides(RunConfig& cfg);

// Cross-field validation; throws std::invalid_argument with the offending key.
void validate(const RunConfig& cfg);

// Typed views (validate first).
BoxGrid grid_from(const RunConfig& cfg);
PotentialSpec potential_from(const RunConfig& cfg);
EvolutionConfig evolution_from(const RunConfig& cfg);

// FNV-1a over the sorted key=value list.
std::uint64_t config_hash(const RunConfig& cfg);

// Shortest round-trip decimal formatting ("%.17g" trimmed); used by every
// writer so outputs are byte-stable.
std::string format_double(double v);

// Schema: k,k1,k2,l,theta1,theta2,m,p,q,trials,seed,measured,bound,ratio.
void write_sweep_csv(const std::string& path,
                     const std::vector<SweepPoint>& points);

struct Report {
  std::string suite;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<std::pair<std::string, bool>> checks;     // invariant -> pass
  std::vector<std::pair<std::string, double>> values;   // measured quantities
  std::vector<std::pair<std::string, std::string>> notes;
};

extern const char* const kVersion;

bool report_pass(const Report& rep);
std::string report_json(const Report& rep);  // deterministic field order
void write_report(const std::string& path, const Report& rep);

}  // namespace spinorlab
