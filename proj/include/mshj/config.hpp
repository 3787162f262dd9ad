#pragma once

// Run configuration: a sectioned key = value text format.
//
//   [model]              builtin = NAME   |   m, n, lagrangian, hamiltonian
//   [model.params]       builtin parameters (strings)
//   [candidates.NAME]    kind = jetfield | section | generating | coefficients | family
//   [grid.AXIS]          lo, hi, count
//   [run]                tolerance, jobs, policy = fail_fast | skip
//   [reconstruct]        x0, u0, lo, hi, steps, order, holonomy_tol, el_tol, path_tol
//   [output]             csv
//
// Lines starting with ';' or '#' are comments.

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mshj/models.hpp"

namespace mshj {

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* get(const std::string& key) const;
};

/// Throws ConfigError (with the line number) on malformed input, duplicate
/// sections or duplicate keys.
std::vector<IniSection> parse_ini(std::istream& in);

struct CandidateSpec {
  std::string name;
  std::string kind;
  std::map<std::string, std::string> entries;  // everything except `kind`
};

struct ReconstructSpec {
  std::vector<double> x0, u0, lo, hi;
  std::size_t steps = 100;
  std::vector<int> order;
  double holonomy_tol = 1e-4;
  double el_tol = 1e-4;
  double path_tol = 1e-6;
};

struct RunConfig {
  std::optional<std::string> builtin;
  ModelParams params;
  std::optional<int> m, n;
  std::optional<std::string> lagrangian, hamiltonian;

  std::vector<CandidateSpec> candidates;
  std::vector<Axis> grid;  // empty: the model's standard grid
  double tolerance = 1e-8;
  std::optional<unsigned> jobs;
  ErrorPolicy policy = ErrorPolicy::FailFast;
  std::optional<ReconstructSpec> reconstruct;
  std::optional<std::string> csv;

  static RunConfig parse(std::istream& in);
  static RunConfig load(const std::string& path);
};

/// Model assembled from a config: a builtin bundle, or a custom theory
/// and/or explicit Hamiltonian.
ModelBundle resolve_model(const RunConfig& config);

/// Comma separated doubles; throws ConfigError.
std::vector<double> parse_number_list(const std::string& text, const std::string& what);

}  // namespace mshj
