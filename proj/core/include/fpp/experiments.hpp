#ifndef FPP_EXPERIMENTS_HPP
#define FPP_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fpp/weights.hpp"

namespace fpp {

// Flat key-value experiment configuration. Core keys are typed fields; all
// experiment-specific parameters live in `extra` as strings (comma grids,
// interval-set literals).
struct ExperimentConfig {
  std::string name;
  int dimension = 2;
  DistributionSpec dist = DistributionSpec::exponential(1.0);
  bool dist_set = false;  // false: the experiment's default marginal applies
  std::uint64_t master_seed = 1;
  std::size_t replicas = 0;  // 0 = experiment default
  int workers = 1;
  std::map<std::string, std::string> extra;

  // Parses "key = value" lines; '#' comments; unknown keys land in extra.
  // Throws std::invalid_argument with line/column context.
  static ExperimentConfig parse_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  std::string canonical_text() const;  // sorted, normalized; hashed below
  std::uint64_t hash() const;          // FNV-1a of canonical_text

  double get_real(const std::string& key, double def) const;
  long long get_int(const std::string& key, long long def) const;
  std::vector<double> get_grid(const std::string& key,
                               const std::vector<double>& def) const;
};

enum class Verdict { Consistent, Violated, Inconclusive };
std::string to_string(Verdict v);

struct Cell {
  std::string label;
  double param = 0.0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double reference = 0.0;           // bound / comparison value, NaN if none
  std::vector<double> values;       // raw per-replica values
};

struct ExperimentReport {
  std::string name;
  ExperimentConfig config;
  std::string inequality;           // the inequality being probed
  std::vector<Cell> cells;
  Verdict verdict = Verdict::Inconclusive;
  double fitted_constant = 0.0;
  std::string note;
  double runtime_seconds = 0.0;     // manifest only, never in report.json
  std::uint64_t config_hash = 0;
  std::uint64_t constants_hash = 0;
};

const std::vector<std::string>& experiment_names();

// Experiment defaults (replica counts, grids) for a named experiment.
ExperimentConfig default_config(const std::string& name);

// Validates without running. Throws std::invalid_argument on problems.
void validate_config(const ExperimentConfig& cfg);

ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Writes report.json, cells.csv, plot.svg into dir and appends a line to
// dir/manifest.txt; returns that manifest line. report.json is byte-stable
// for a fixed config and seed.
std::string write_report(const ExperimentReport& rep, const std::string& dir);

}  // namespace fpp

#endif
