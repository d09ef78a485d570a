#pragma once

#include "ftqre/config.hpp"

namespace ftqre {

struct ModuleDissipation {
  double P_4K = 0;
  double P_20mK = 0;
};

inline ModuleDissipation module_dissipation(const ThermalConfig& cfg, double n_phys_per_module) {
  ModuleDissipation d;
  for (const auto& l : cfg.lines) {
    double lines = l.per_qubit * n_phys_per_module;
    d.P_4K += lines * l.load_4K;
    d.P_20mK += lines * l.load_20mK;
  }
  return d;
}

inline ModuleDissipation machine_dissipation(const ThermalConfig& cfg, double n_phys_per_module, long long modules) {
  auto m = module_dissipation(cfg, n_phys_per_module);
  return {m.P_4K * static_cast<double>(modules), m.P_20mK * static_cast<double>(modules)};
}

// Wall-plug energy in joules.
inline double total_energy(double P_4K, double P_20mK, double cores, double t_FT, const ThermalConfig& cfg) {
  return (cfg.p_decoding_core * cores + cfg.eta_4K * P_4K + cfg.eta_20mK * P_20mK) * t_FT;
}

inline double joules_to_wh(double e) { return e / 3600.0; }

}  // namespace ftqre
