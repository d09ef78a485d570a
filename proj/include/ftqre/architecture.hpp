#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftqre/util.hpp"

namespace ftqre {

struct TFactory {
  std::string name;
  double p_out = 0;
  long long L_width = 0;
  long long L_length = 0;
  long long Q = 0;
  double C = 0;

  bool has_20to4_layer() const { return name.find("20-to-4") != std::string::npos; }
  bool operator==(const TFactory&) const = default;
};

inline void validate_factory(const TFactory& f) {
  if (!(f.p_out > 0 && f.p_out < 1)) throw validation_error("factory " + f.name + ": p_out must be in (0,1)");
  if (f.Q <= 0) throw validation_error("factory " + f.name + ": Q must be positive");
  if (!(f.C > 0)) throw validation_error("factory " + f.name + ": C must be positive");
  if (f.L_width <= 0 || f.L_length <= 0) throw validation_error("factory " + f.name + ": footprint must be positive");
}

// Distillation protocols ordered by decreasing output error.
inline std::vector<TFactory> default_factories() {
  return {
      {"(15-to-1)_17,7,7", 4.5e-8, 64, 72, 4620, 42.6},
      {"(15-to-1)^6_15,5,5 x (20-to-4)_23,11,13", 1.4e-10, 387, 155, 43300, 130},
      {"(15-to-1)^4_13,5,5 x (20-to-4)_27,13,15", 2.6e-11, 382, 142, 46800, 157},
      {"(15-to-1)^6_11,5,5 x (15-to-1)_25,11,11", 2.7e-12, 279, 117, 30700, 82.5},
      {"(15-to-1)^6_13,5,5 x (15-to-1)_29,11,13", 3.3e-14, 292, 138, 39100, 97.5},
      {"(15-to-1)^6_17,7,7 x (15-to-1)_41,17,17", 4.5e-20, 426, 181, 73400, 128},
      {"(15-to-1)^8_23,9,9 x (15-to-1)_49,19,21", 9.0e-23, 696, 234, 133842, 157.5},
  };
}

struct ModuleLayout {
  int d = 0;
  long long n_logical = 0;  // total logical qubits to host
  long long n_per_leg = 0;
  long long l_edge = 0;
  long long memory_per_module = 0;
  long long l_qbus = 0;
  long long n_row_qbus = 0;
  long long factory_w = 0;  // factory width in patches
  long long factory_l = 0;  // factory length in patches
  long long n_col_T_factories = 0;
  long long n_T_factories = 0;
  long long l_transfer_bus = 0;
  long long n_prime = 0;      // before the 20-to-4 quadrupling
  long long n_prime_eff = 0;  // after it, and at least one per factor
  long long n_unalloc_logical = 0;

  long long allocated_logical_per_module() const {
    return 2 * memory_per_module + l_transfer_bus + n_T_factories * factory_w * factory_l;
  }
  bool operator==(const ModuleLayout&) const = default;
};

// Smallest k >= 0 with k * sqrt(2) * d >= L, in exact integer arithmetic.
inline long long patches_for(long long L, int d) {
  if (L <= 0) return 0;
  auto ok = [&](long long k) { return 2 * k * k * d * d >= L * L; };
  long long k = static_cast<long long>(static_cast<double>(L) / (1.4142135623730951 * d));
  while (k > 0 && ok(k - 1)) --k;
  while (!ok(k)) ++k;
  return k;
}

inline long long module_edge(long long n_phys, int d) {
  return static_cast<long long>(isqrt(static_cast<std::uint64_t>(n_phys / (2LL * d * d))));
}

inline std::optional<ModuleLayout> compute_layout(long long n_phys, long long n_logical, int d, const TFactory& f,
                                                  long long n_per_leg) {
  if (d < 3 || d % 2 == 0) throw validation_error("compute_layout: d must be odd and >= 3");
  if (n_per_leg < 1) throw validation_error("compute_layout: n_per_leg must be >= 1");
  if (n_logical < 1) throw validation_error("compute_layout: need at least one logical qubit");
  ModuleLayout L;
  L.d = d;
  L.n_logical = n_logical;
  L.n_per_leg = n_per_leg;
  L.l_edge = module_edge(n_phys, d);
  L.memory_per_module = ceil_div(n_logical, n_per_leg);
  long long bus_rows = 2 * floor_div(L.l_edge - 2, 4LL) + 1;
  if (bus_rows <= 0) return std::nullopt;
  L.l_qbus = std::max(ceil_div(L.memory_per_module, bus_rows), 3LL);
  L.factory_w = patches_for(f.L_width, d);
  L.factory_l = patches_for(f.L_length, d);
  L.n_col_T_factories = floor_div(L.l_edge - L.l_qbus - 1, L.factory_l + 1);
  L.n_T_factories = floor_div(L.l_edge - 1, L.factory_w) * L.n_col_T_factories;
  L.l_transfer_bus =
      (L.l_edge - L.l_qbus - L.n_col_T_factories * L.factory_l) * L.l_edge + L.n_col_T_factories * L.factory_l;
  L.n_row_qbus = floor_div(L.memory_per_module + 1, L.l_qbus);
  L.n_prime = std::min(L.n_T_factories, L.n_row_qbus);
  // At least one bus row can always take a T state, even when the memory is
  // too small to fill one.
  L.n_prime_eff = std::max(1LL, L.n_prime) * (f.has_20to4_layer() ? 4 : 1);
  L.n_unalloc_logical = L.l_edge * L.l_edge - L.allocated_logical_per_module();
  if (L.n_col_T_factories < 1 || L.n_T_factories < 1 || L.n_unalloc_logical < 0)
    return std::nullopt;
  return L;
}

inline constexpr long long kMaxModulesPerLeg = 1000000;

// Smallest feasible number of modules per leg. Layouts depend on n_per_leg
// only through the memory size per module, so the scan jumps between
// distinct values of that size.
inline std::optional<ModuleLayout> choose_modules_per_leg(long long n_phys, long long n_logical, int d,
                                                          const TFactory& f) {
  long long k = 1;
  while (k <= kMaxModulesPerLeg) {
    if (auto L = compute_layout(n_phys, n_logical, d, f, k)) return L;
    long long mem = ceil_div(n_logical, k);
    if (mem == 1) break;
    k = ceil_div(n_logical, mem - 1);
  }
  return std::nullopt;
}

inline long long interconnect_count(long long n_pipes, long long n_per_leg) { return n_pipes * (3 * n_per_leg - 2); }

}  // namespace ftqre
