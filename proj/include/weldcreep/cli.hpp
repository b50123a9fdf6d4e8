#pragma once

// Problem files and pipeline stages behind the weldcreep executable.
//
// Problem file grammar (YAML):
//   geometry: {r_i: <num>, r_o: <num>, H: <num>}
//   load:     {p: <num>}
//   material: {n: <num>, A: [<num>, ...], interfaces: [<num>, ...]}
//   run:      {nr: <int>, nz: <int>, disc_basis: <bool>, quad_order: <int>,
//              line_r: [<num>, ...], z_points: <int>, s: [<num>, ...]}
// geometry, load and material are required; every `run` key is optional.

#include "weldcreep/core.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace weldcreep::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Stage { baseline, jumps, ritz, kantorovich, solve, compare, sweep };

Stage parse_stage(const std::string& name);
std::string stage_name(Stage s);

struct RunManifest {
  std::string config_path;
  Stage stage = Stage::baseline;
  std::string out_dir = ".";
  int nr = 25;
  int nz = 25;
  bool disc_basis = true;
  int quad_order = 12;
  std::vector<double> line_r{1.5};
  int z_points = 801;
  std::vector<double> s_values;

  // Stage-specific requirements; throws ConfigError.
  void validate(const PipeConfig& config) const;
};

struct ParsedInput {
  PipeConfig config;
  RunManifest manifest;
};

// Throws ConfigError naming unknown keys, missing keys or the field whose
// invariant fails.
ParsedInput parse_config(const std::string& text);
ParsedInput load_config(const std::string& path);

// The effective configuration with all defaults, in the input grammar.
std::string echo_config(const PipeConfig& config, const RunManifest& manifest);

// Writes CSV files and summary.txt into manifest.out_dir. Returns the
// process exit status; diagnostics go to `log`.
int run_stage(const PipeConfig& config, const RunManifest& manifest, std::ostream& log);

}  // namespace weldcreep::cli
