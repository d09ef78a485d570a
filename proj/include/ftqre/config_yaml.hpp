#pragma once

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "ftqre/config.hpp"
#include "ftqre/widget_file.hpp"

namespace ftqre {

namespace detail {

template <typename T>
T yaml_get(const YAML::Node& n, const std::string& where) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw validation_error("config: " + where + " has the wrong type");
  }
}

inline void check_keys(const YAML::Node& n, const std::string& section, const std::set<std::string>& known,
                       std::vector<std::string>& warnings) {
  for (const auto& kv : n) {
    std::string k = kv.first.as<std::string>();
    if (!known.count(k)) warnings.push_back("unknown config key '" + section + "." + k + "' ignored");
  }
}

template <typename T>
void take(const YAML::Node& sec, const std::string& section, const char* key, T& out) {
  if (sec[key]) out = yaml_get<T>(sec[key], section + "." + key);
}

}  // namespace detail

// Overlays a YAML document onto `cfg`. Absent keys keep their current value.
inline void apply_yaml(ArchConfig& cfg, const YAML::Node& root, std::vector<std::string>& warnings) {
  using detail::take;
  if (!root || root.IsNull()) return;
  if (!root.IsMap()) throw validation_error("config: top level must be a mapping");
  detail::check_keys(root, "", {"physical", "scaling", "timing", "synthesis", "architecture", "thermal", "factories"},
                     warnings);
  auto section = [&](const char* name) {
    YAML::Node s = root[name];
    if (s && !s.IsMap() && std::string(name) != "factories")
      throw validation_error(std::string("config: section '") + name + "' must be a mapping");
    return s;
  };
  if (auto s = section("physical")) {
    detail::check_keys(s, "physical", {"p"}, warnings);
    take(s, "physical", "p", cfg.p);
  }
  if (auto s = section("scaling")) {
    detail::check_keys(s, "scaling", {"preset", "kappa", "p_thresh"}, warnings);
    if (s["preset"]) {
      auto name = detail::yaml_get<std::string>(s["preset"], "scaling.preset");
      bool found = false;
      for (const auto& p : scaling_presets())
        if (name == p.name) {
          cfg.kappa = p.kappa;
          cfg.p_thresh = p.p_thresh;
          found = true;
        }
      if (!found) throw validation_error("config: scaling.preset '" + name + "' is unknown");
    }
    take(s, "scaling", "kappa", cfg.kappa);
    take(s, "scaling", "p_thresh", cfg.p_thresh);
  }
  if (auto s = section("timing")) {
    detail::check_keys(s, "timing", {"t_gate", "t_inter", "t_decoder"}, warnings);
    take(s, "timing", "t_gate", cfg.t);
    take(s, "timing", "t_inter", cfg.t_inter);
    take(s, "timing", "t_decoder", cfg.t_decoder);
  }
  if (auto s = section("synthesis")) {
    detail::check_keys(s, "synthesis", {"preset", "c0", "c1"}, warnings);
    if (s["preset"]) {
      auto name = detail::yaml_get<std::string>(s["preset"], "synthesis.preset");
      bool found = false;
      for (const auto& p : synthesis_presets())
        if (name == p.name) {
          cfg.c0 = p.c0;
          cfg.c1 = p.c1;
          found = true;
        }
      if (!found) throw validation_error("config: synthesis.preset '" + name + "' is unknown");
    }
    take(s, "synthesis", "c0", cfg.c0);
    take(s, "synthesis", "c1", cfg.c1);
  }
  if (auto s = section("architecture")) {
    detail::check_keys(s, "architecture",
                       {"n_phys_per_module", "n_inter_pipes", "n_algo_reps", "p_algo_fail", "max_fanout",
                        "qubit_density", "couplers_per_qubit"},
                       warnings);
    take(s, "architecture", "n_phys_per_module", cfg.n_phys);
    take(s, "architecture", "n_inter_pipes", cfg.n_pipes);
    take(s, "architecture", "n_algo_reps", cfg.n_algo_reps);
    take(s, "architecture", "p_algo_fail", cfg.p_algo_fail);
    take(s, "architecture", "max_fanout", cfg.fanout);
    take(s, "architecture", "qubit_density", cfg.qubit_density);
    take(s, "architecture", "couplers_per_qubit", cfg.couplers_per_qubit);
  }
  if (auto s = section("thermal")) {
    detail::check_keys(s, "thermal", {"eta_4K", "eta_20mK", "p_decoding_core", "lines"}, warnings);
    take(s, "thermal", "eta_4K", cfg.thermal.eta_4K);
    take(s, "thermal", "eta_20mK", cfg.thermal.eta_20mK);
    take(s, "thermal", "p_decoding_core", cfg.thermal.p_decoding_core);
    if (s["lines"]) {
      if (!s["lines"].IsSequence()) throw validation_error("config: thermal.lines must be a list");
      cfg.thermal.lines.clear();
      for (const auto& l : s["lines"]) {
        detail::check_keys(l, "thermal.lines", {"name", "per_qubit", "load_4K", "load_20mK"}, warnings);
        LineClass c;
        take(l, "thermal.lines", "name", c.name);
        take(l, "thermal.lines", "per_qubit", c.per_qubit);
        take(l, "thermal.lines", "load_4K", c.load_4K);
        take(l, "thermal.lines", "load_20mK", c.load_20mK);
        cfg.thermal.lines.push_back(c);
      }
    }
  }
  if (auto s = root["factories"]) {
    if (!s.IsSequence()) throw validation_error("config: factories must be a list");
    cfg.factories.clear();
    for (const auto& f : s) {
      detail::check_keys(f, "factories", {"name", "p_out", "L_width", "L_length", "Q", "C"}, warnings);
      TFactory t;
      for (const char* k : {"name", "p_out", "L_width", "L_length", "Q", "C"})
        if (!f[k]) throw validation_error(std::string("config: factories entry lacks '") + k + "'");
      take(f, "factories", "name", t.name);
      take(f, "factories", "p_out", t.p_out);
      take(f, "factories", "L_width", t.L_width);
      take(f, "factories", "L_length", t.L_length);
      take(f, "factories", "Q", t.Q);
      take(f, "factories", "C", t.C);
      cfg.factories.push_back(t);
    }
  }
}

inline ArchConfig config_from_yaml_text(const std::string& text, std::vector<std::string>& warnings) {
  ArchConfig cfg;
  try {
    apply_yaml(cfg, YAML::Load(text), warnings);
  } catch (const YAML::Exception& e) {
    throw validation_error(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

inline ArchConfig load_config(const std::string& path, std::vector<std::string>& warnings) {
  return config_from_yaml_text(read_text_file(path), warnings);
}

// Keys accepted by sweeps, as section.key.
inline const std::set<std::string>& sweepable_keys() {
  static const std::set<std::string> k = {
      "physical.p",          "scaling.preset",        "scaling.kappa",          "scaling.p_thresh",
      "timing.t_gate",       "timing.t_inter",        "timing.t_decoder",       "synthesis.preset",
      "synthesis.c0",        "synthesis.c1",          "architecture.n_inter_pipes", "architecture.n_algo_reps",
      "architecture.p_algo_fail", "architecture.n_phys_per_module", "architecture.max_fanout"};
  return k;
}

inline ArchConfig with_override(const ArchConfig& base, const std::string& key, const std::string& value) {
  if (!sweepable_keys().count(key)) throw validation_error("sweep: key '" + key + "' is not sweepable");
  auto dot = key.find('.');
  ArchConfig cfg = base;
  std::vector<std::string> warnings;
  try {
    YAML::Node root;
    root[key.substr(0, dot)][key.substr(dot + 1)] = YAML::Load(value);
    apply_yaml(cfg, root, warnings);
  } catch (const YAML::Exception& e) {
    throw validation_error("sweep: bad value '" + value + "': " + e.what());
  }
  cfg.validate();
  return cfg;
}

inline std::string config_hash(const ArchConfig& c) {
  nlohmann::json j = {c.p, c.kappa, c.p_thresh, c.t, c.t_inter, c.t_decoder, c.c0, c.c1, c.n_phys, c.n_pipes,
                      c.n_algo_reps, c.p_algo_fail, c.fanout, c.qubit_density, c.couplers_per_qubit};
  for (const auto& f : c.factories) j.push_back({f.name, f.p_out, f.L_width, f.L_length, f.Q, f.C});
  for (const auto& l : c.thermal.lines) j.push_back({l.name, l.per_qubit, l.load_4K, l.load_20mK});
  j.push_back({c.thermal.eta_4K, c.thermal.eta_20mK, c.thermal.p_decoding_core});
  return hex64(fnv1a(j.dump()));
}

}  // namespace ftqre
