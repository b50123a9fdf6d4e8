#include "weldcreep/cli.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace weldcreep::cli {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"geometry", {"r_i", "r_o", "H"}},
      {"load", {"p"}},
      {"material", {"n", "A", "interfaces"}},
      {"run", {"nr", "nz", "disc_basis", "quad_order", "line_r", "z_points", "s"}},
  };
  return s;
}

void check_keys(const YAML::Node& root) {
  std::vector<std::string> unknown;
  if (!root.IsMap()) throw ConfigError("config: top level must be a mapping");
  for (const auto& kv : root) {
    const auto section = kv.first.as<std::string>();
    const auto it = schema().find(section);
    if (it == schema().end()) {
      unknown.push_back(section);
      continue;
    }
    if (!kv.second.IsMap()) throw ConfigError("config: section '" + section + "' must be a mapping");
    for (const auto& inner : kv.second) {
      const auto key = inner.first.as<std::string>();
      if (!it->second.count(key)) unknown.push_back(section + "." + key);
    }
  }
  if (!unknown.empty()) throw ConfigError(fmt::format("config: unknown keys: {}", fmt::join(unknown, ", ")));
}

template <class T>
T required(const YAML::Node& root, const std::string& section, const std::string& key) {
  const YAML::Node node = root[section][key];
  if (!node) throw ConfigError("config: missing required key '" + key + "' in section '" + section + "'");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config: key '" + key + "' in section '" + section + "' has the wrong type");
  }
}

template <class T>
void optional(const YAML::Node& root, const std::string& section, const std::string& key, T& out) {
  if (!root[section]) return;
  const YAML::Node node = root[section][key];
  if (!node) return;
  try {
    out = node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config: key '" + key + "' in section '" + section + "' has the wrong type");
  }
}

std::string fmt_list(const std::vector<double>& v) { return fmt::format("[{}]", fmt::join(v, ", ")); }

}  // namespace

Stage parse_stage(const std::string& name) {
  static const std::map<std::string, Stage> m{{"baseline", Stage::baseline}, {"jumps", Stage::jumps},
                                              {"ritz", Stage::ritz},         {"kantorovich", Stage::kantorovich},
                                              {"solve", Stage::solve},       {"compare", Stage::compare},
                                              {"sweep", Stage::sweep}};
  const auto it = m.find(name);
  if (it == m.end()) throw ConfigError("unknown stage '" + name + "'");
  return it->second;
}

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::baseline: return "baseline";
    case Stage::jumps: return "jumps";
    case Stage::ritz: return "ritz";
    case Stage::kantorovich: return "kantorovich";
    case Stage::solve: return "solve";
    case Stage::compare: return "compare";
    case Stage::sweep: return "sweep";
  }
  return "?";
}

void RunManifest::validate(const PipeConfig& config) const {
  if (nr < 1) throw ConfigError("run: nr must be >= 1");
  if (nz < 0) throw ConfigError("run: nz must be >= 0");
  if (quad_order < 1) throw ConfigError("run: quad_order must be >= 1");
  if (z_points < 2) throw ConfigError("run: z_points must be >= 2");
  for (double r : line_r) {
    if (r < config.r_i || r > config.r_o) throw ConfigError(fmt::format("run: line_r value {} outside the wall", r));
  }
  if (line_r.empty() && stage != Stage::baseline && stage != Stage::jumps) {
    throw ConfigError("run: line_r must list at least one radius");
  }
  if (stage == Stage::sweep) {
    if (s_values.empty()) throw ConfigError("run: stage sweep needs a list of s values (run.s or --s)");
    if (config.layup.interfaces.empty()) throw ConfigError("run: stage sweep needs at least one material interface");
  }
}

ParsedInput parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: malformed input: ") + e.what());
  }
  check_keys(root);
  for (const char* section : {"geometry", "load", "material"}) {
    if (!root[section]) throw ConfigError(std::string("config: missing required section '") + section + "'");
  }

  ParsedInput in;
  PipeConfig& c = in.config;
  c.r_i = required<double>(root, "geometry", "r_i");
  c.r_o = required<double>(root, "geometry", "r_o");
  c.H = required<double>(root, "geometry", "H");
  c.p = required<double>(root, "load", "p");
  c.n = required<double>(root, "material", "n");
  c.layup.coefficients = required<std::vector<double>>(root, "material", "A");
  optional(root, "material", "interfaces", c.layup.interfaces);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  RunManifest& m = in.manifest;
  optional(root, "run", "nr", m.nr);
  optional(root, "run", "nz", m.nz);
  optional(root, "run", "disc_basis", m.disc_basis);
  optional(root, "run", "quad_order", m.quad_order);
  optional(root, "run", "line_r", m.line_r);
  optional(root, "run", "z_points", m.z_points);
  optional(root, "run", "s", m.s_values);
  return in;
}

ParsedInput load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  ParsedInput in = parse_config(ss.str());
  in.manifest.config_path = path;
  return in;
}

std::string echo_config(const PipeConfig& c, const RunManifest& m) {
  std::string out;
  out += fmt::format("geometry:\n  r_i: {:.9g}\n  r_o: {:.9g}\n  H: {:.9g}\n", c.r_i, c.r_o, c.H);
  out += fmt::format("load:\n  p: {:.9g}\n", c.p);
  out += fmt::format("material:\n  n: {:.9g}\n  A: {}\n  interfaces: {}\n", c.n, fmt_list(c.layup.coefficients),
                     fmt_list(c.layup.interfaces));
  out += fmt::format("run:\n  nr: {}\n  nz: {}\n  disc_basis: {}\n  quad_order: {}\n  line_r: {}\n  z_points: {}\n"
                     "  s: {}\n",
                     m.nr, m.nz, m.disc_basis ? "true" : "false", m.quad_order, fmt_list(m.line_r), m.z_points,
                     fmt_list(m.s_values));
  return out;
}

}  // namespace weldcreep::cli
