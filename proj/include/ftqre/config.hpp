#pragma once

#include <string>
#include <vector>

#include "ftqre/architecture.hpp"

namespace ftqre {

// Wiring class: lines per physical qubit and static heat load per line.
struct LineClass {
  std::string name;
  double per_qubit = 0;
  double load_4K = 0;    // W per line
  double load_20mK = 0;  // W per line
  bool operator==(const LineClass&) const = default;
};

// Defaults are calibrated so a 1e6-qubit module dissipates 420 W at 4 K and
// 84 nW at 20 mK. Qubit drive and flux share one line through a diplexer.
inline std::vector<LineClass> default_line_classes() {
  return {
      {"qubit_control", 1.0, 50e-6, 2e-14},
      {"coupler_bias", 2.0, 50e-6, 2e-14},
      {"readout_in", 0.1, 50e-6, 1.2e-13},
      {"readout_out", 0.1, 50e-6, 1.2e-13},
      {"hemt", 0.1, 2.6e-3, 0.0},
  };
}

struct ThermalConfig {
  std::vector<LineClass> lines = default_line_classes();
  double eta_4K = 500;
  double eta_20mK = 1e9;
  double p_decoding_core = 100;  // W per decoding core
  bool operator==(const ThermalConfig&) const = default;
};

struct ScalingPreset {
  const char* name;
  double kappa;
  double p_thresh;
};

inline const std::vector<ScalingPreset>& scaling_presets() {
  static const std::vector<ScalingPreset> presets = {
      {"mwpm-circuit", 0.009, 0.016},
      {"mwpm-code-capacity", 0.52, 0.14},
      {"astra-gnn", 0.56, 0.17},
  };
  return presets;
}

struct SynthesisPreset {
  const char* name;
  double c0;
  double c1;
};

inline const std::vector<SynthesisPreset>& synthesis_presets() {
  static const std::vector<SynthesisPreset> presets = {
      {"mixed-fallback", 0.57, 8.83},
      {"gridsynth", 3.0, 0.0},
  };
  return presets;
}

struct ArchConfig {
  // physical
  double p = 1e-3;
  // scaling law
  double kappa = 0.009;
  double p_thresh = 0.016;
  // timing (s)
  double t = 25e-9;
  double t_inter = 1e-6;
  double t_decoder = 1e-6;
  // gate synthesis
  double c0 = 0.57;
  double c1 = 8.83;
  // architecture
  long long n_phys = 1000000;
  long long n_pipes = 1;
  long long n_algo_reps = 1;
  double p_algo_fail = 0.01;
  int fanout = 4;
  double qubit_density = 1e6;     // physical qubits per m^2
  double couplers_per_qubit = 2;  // one tunable coupler per neighbouring pair
  std::vector<TFactory> factories = default_factories();
  ThermalConfig thermal;

  bool operator==(const ArchConfig&) const = default;

  void validate() const {
    auto bad = [](const std::string& field, const std::string& why) {
      throw validation_error("config: " + field + " " + why);
    };
    if (!(p > 0)) bad("physical.p", "must be positive");
    if (!(p_thresh > 0)) bad("scaling.p_thresh", "must be positive");
    if (!(p < p_thresh)) bad("physical.p", "must be below scaling.p_thresh");
    if (!(kappa >= 0)) bad("scaling.kappa", "must be non-negative");
    if (!(p_algo_fail > 0 && p_algo_fail < 1)) bad("architecture.p_algo_fail", "must be in (0,1)");
    if (!(t > 0)) bad("timing.t_gate", "must be positive");
    if (!(t_inter > 0)) bad("timing.t_inter", "must be positive");
    if (!(t_decoder > 0)) bad("timing.t_decoder", "must be positive");
    if (!(c0 >= 0) || !(c1 >= 0)) bad("synthesis", "constants must be non-negative");
    if (n_phys < 8) bad("architecture.n_phys_per_module", "is too small for any patch");
    if (n_pipes < 1) bad("architecture.n_inter_pipes", "must be >= 1");
    if (n_algo_reps < 1) bad("architecture.n_algo_reps", "must be >= 1");
    if (fanout < 1) bad("architecture.max_fanout", "must be >= 1");
    if (!(qubit_density > 0)) bad("architecture.qubit_density", "must be positive");
    if (!(couplers_per_qubit >= 0)) bad("architecture.couplers_per_qubit", "must be non-negative");
    if (factories.empty()) bad("factories", "must list at least one factory");
    for (const auto& f : factories) validate_factory(f);
    for (const auto& l : thermal.lines)
      if (!(l.per_qubit >= 0 && l.load_4K >= 0 && l.load_20mK >= 0))
        bad("thermal.lines." + l.name, "loads and multiplicities must be non-negative");
    if (!(thermal.eta_4K > 1)) bad("thermal.eta_4K", "must exceed 1");
    if (!(thermal.eta_20mK > 1)) bad("thermal.eta_20mK", "must exceed 1");
    if (!(thermal.p_decoding_core >= 0)) bad("thermal.p_decoding_core", "must be non-negative");
  }
};

}  // namespace ftqre
