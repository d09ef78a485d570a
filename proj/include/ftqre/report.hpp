#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ftqre/estimator.hpp"
#include "ftqre/format.hpp"
#include "ftqre/thermal.hpp"

namespace ftqre {

struct identity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Parameter {
  int id = 0;
  std::string name;
  double value = 0;
  std::string unit;

  bool operator==(const Parameter& o) const {
    bool same = value == o.value || (std::isnan(value) && std::isnan(o.value));
    return id == o.id && name == o.name && unit == o.unit && same;
  }
};

struct Provenance {
  std::string config_hash;
  std::string circuit_hash;
  std::string version = kVersion;
  bool operator==(const Provenance&) const = default;
};

struct ResourceReport {
  std::vector<Parameter> params;
  Provenance provenance;
  bool operator==(const ResourceReport&) const = default;

  const Parameter& at(int id) const { return params.at(static_cast<size_t>(id - 1)); }
  double value(int id) const { return at(id).value; }
};

struct ParamSpec {
  const char* name;
  const char* unit;
};

inline const std::vector<ParamSpec>& parameter_table() {
  static const std::vector<ParamSpec> t = {
      {"code_distance", ""},
      {"logical_memory_register", "qubits"},
      {"t_factories_per_module", "factories"},
      {"logical_memory_per_module", "qubits"},
      {"physical_memory_per_module", "qubits"},
      {"logical_aux_bus_per_module", "qubits"},
      {"physical_aux_bus_per_module", "qubits"},
      {"logical_transfer_bus_per_module", "qubits"},
      {"physical_transfer_bus_per_module", "qubits"},
      {"logical_t_factory_per_module", "qubits"},
      {"physical_t_factory_per_module", "qubits"},
      {"total_modules", "modules"},
      {"total_interconnects", "pipes"},
      {"allocated_physical_per_module", "qubits"},
      {"algorithmic_logical_qubits", "qubits"},
      {"synthesis_precision", ""},
      {"t_count", "gates"},
      {"effective_t_depth", "layers"},
      {"rz_gates", "gates"},
      {"t_gates", "gates"},
      {"clifford_gates", "gates"},
      {"graph_nodes", "nodes"},
      {"consumption_steps", "steps"},
      {"preparation_steps", "steps"},
      {"widgets", "widgets"},
      {"distinct_widgets", "widgets"},
      {"decoder_tock", "s"},
      {"intra_tock", "s"},
      {"t_factory_tock", "s"},
      {"available_physical_qubits", "qubits"},
      {"available_logical_per_module", "qubits"},
      {"unallocated_logical_qubits", "qubits"},
      {"unallocated_physical_qubits", "qubits"},
      {"allocated_logical_qubits", "qubits"},
      {"allocated_physical_qubits", "qubits"},
      {"decoding_cores", "cores"},
      {"qpu_area", "m^2"},
      {"couplers", "couplers"},
      {"decoding_power", "W"},
      {"power_4K", "W"},
      {"power_20mK", "W"},
      {"consumption_time", "s"},
      {"handover_time", "s"},
      {"distillation_delay", "s"},
      {"preparation_delay", "s"},
      {"decoding_delay", "s"},
      {"hardware_time", "s"},
      {"ft_time", "s"},
      {"energy", "J"},
  };
  return t;
}

inline constexpr int kParameterCount = 49;

// Everything the report is computed from.
struct EstimateResult {
  ArchConfig cfg;
  StitchedEstimationSet est;
  std::uint64_t n_Clifford_init = 0;
  std::uint64_t L_prep_total = 0;
  SelectionResult sel;
  TimingBreakdown timing;
};

inline void check_identities(const EstimateResult& r) {
  const ModuleLayout& L = r.sel.layout;
  const double n = static_cast<double>(L.n_per_leg), d2 = static_cast<double>(r.sel.d) * r.sel.d;
  const double alloc = static_cast<double>(L.allocated_logical_per_module());
  const double unalloc = static_cast<double>(L.n_unalloc_logical);
  if (2 * n * alloc + 2 * n * unalloc != 2 * n * static_cast<double>(L.l_edge * L.l_edge))
    throw identity_error("identity failed: allocated + unallocated logical != 2 n_per_leg l_edge^2");
  const double mem = static_cast<double>(L.memory_per_module);
  const double per_module = 2 * d2 * mem * 2 + 2 * d2 * static_cast<double>(L.l_transfer_bus) +
                            static_cast<double>(L.n_T_factories) * static_cast<double>(r.sel.factory.Q);
  const double eq = 4 * static_cast<double>(r.est.n_logical) * d2 +
                    n * (static_cast<double>(L.n_T_factories) * static_cast<double>(r.sel.factory.Q) +
                         2 * d2 * static_cast<double>(L.l_transfer_bus));
  const double slack = n * per_module - eq;
  if (slack < 0 || slack > 4 * d2 * (n - 1))
    throw identity_error("identity failed: physical allocation differs from per-module components beyond slack");
  const TimingBreakdown& t = r.timing;
  if (t.t_hardware_total != t.t_consump_total + t.t_handover_inter_total + t.t_decode_delay_total)
    throw identity_error("identity failed: t_hardware != t_consump + t_handover + t_decode");
}

inline ResourceReport assemble_report(const EstimateResult& r, Provenance prov = {}) {
  check_identities(r);
  const ArchConfig& cfg = r.cfg;
  const SelectionResult& s = r.sel;
  const ModuleLayout& L = s.layout;
  const TimingBreakdown& t = r.timing;
  const double d = s.d, d2 = d * d, n = static_cast<double>(L.n_per_leg);
  const double mem = static_cast<double>(L.memory_per_module);
  const double ltb = static_cast<double>(L.l_transfer_bus);
  const double nTF = static_cast<double>(L.n_T_factories);
  const double Q = static_cast<double>(s.factory.Q);
  const double n_log = r.est.n_logical;
  const double n_avail = 2 * n * static_cast<double>(cfg.n_phys);
  const double modules = 2 * n;
  auto diss = machine_dissipation(cfg.thermal, static_cast<double>(cfg.n_phys), L.n_per_leg * 2);

  std::vector<double> v = {
      d,
      n_log,
      nTF,
      mem,
      2 * d2 * mem,
      mem,
      2 * d2 * mem,
      ltb,
      2 * d2 * ltb,
      nTF * static_cast<double>(L.factory_w * L.factory_l),
      nTF * Q,
      modules,
      static_cast<double>(interconnect_count(cfg.n_pipes, L.n_per_leg)),
      2 * mem * d2 + nTF * Q + 2 * ltb * d2,
      static_cast<double>(r.est.n_input),
      s.eps ? *s.eps : std::nan(""),
      static_cast<double>(s.counts.N_tot_T),
      static_cast<double>(ceil_div<std::uint64_t>(s.counts.N_tot_T, static_cast<std::uint64_t>(r.est.n_logical))),
      static_cast<double>(r.est.n_Rz_init),
      static_cast<double>(r.est.n_T_init),
      static_cast<double>(r.n_Clifford_init),
      static_cast<double>(r.est.n_nodes_total),
      static_cast<double>(r.est.consump_steps),
      static_cast<double>(r.L_prep_total),
      static_cast<double>(r.est.n_widgets),
      static_cast<double>(r.est.n_distinct),
      d * cfg.t_decoder,
      8 * d * cfg.t,
      8 * s.factory.C * cfg.t,
      n_avail,
      static_cast<double>(L.l_edge * L.l_edge),
      2 * static_cast<double>(L.n_unalloc_logical) * n,
      4 * static_cast<double>(L.n_unalloc_logical) * n * d2,
      2 * static_cast<double>(L.allocated_logical_per_module()) * n,
      4 * static_cast<double>(L.allocated_logical_per_module()) * n * d2,
      t.cores,
      n_avail / cfg.qubit_density,
      cfg.couplers_per_qubit * n_avail,
      cfg.thermal.p_decoding_core * t.cores,
      diss.P_4K,
      diss.P_20mK,
      t.t_consump_total,
      t.t_handover_inter_total,
      t.t_distill_delay_total,
      t.t_prep_delay_total,
      t.t_decode_delay_total,
      t.t_hardware_total,
      t.t_FT_total,
      total_energy(diss.P_4K, diss.P_20mK, t.cores, t.t_FT_total, cfg.thermal),
  };
  ResourceReport rep;
  rep.provenance = std::move(prov);
  const auto& table = parameter_table();
  for (int i = 0; i < kParameterCount; ++i) rep.params.push_back({i + 1, table[i].name, v[i], table[i].unit});
  return rep;
}

inline std::string format_value(const Parameter& p) {
  if (std::isnan(p.value)) return "n/a";
  if (p.unit == "s") return format_time(p.value);
  if (p.id == 16) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", p.value);
    return buf;
  }
  if (p.unit == "W") return format_si(p.value, "W");
  if (p.unit == "m^2") return format_si(p.value, "") + " m^2";
  if (p.id == 49) return format_si(p.value, "J") + " (" + format_si(joules_to_wh(p.value), "Wh") + ")";
  return format_si(p.value);
}

inline void print_table(std::ostream& os, const ResourceReport& r) {
  char line[256];
  for (const auto& p : r.params) {
    bool unit_in_value = p.unit == "s" || p.unit == "W" || p.unit == "J" || p.unit == "m^2";
    std::snprintf(line, sizeof line, "%3d  %-36s %18s  %s\n", p.id, p.name.c_str(), format_value(p).c_str(),
                  unit_in_value ? "" : p.unit.c_str());
    os << line;
  }
  // T patches aggregate factories and the transfer bus.
  os << "     t_patches_per_module (P8+P10)        " << format_si(r.value(8) + r.value(10)) << "\n";
  os << "provenance: config=" << r.provenance.config_hash << " circuit=" << r.provenance.circuit_hash
     << " version=" << r.provenance.version << "\n";
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const ResourceReport& r) {
  os << "# config_hash=" << r.provenance.config_hash << "\n";
  os << "# circuit_hash=" << r.provenance.circuit_hash << "\n";
  os << "# version=" << r.provenance.version << "\n";
  os << "param_id,param_name,value,unit\n";
  for (const auto& p : r.params) os << p.id << ',' << p.name << ',' << format_double(p.value) << ',' << p.unit << '\n';
}

inline ResourceReport read_csv(std::istream& is) {
  ResourceReport r;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(2, eq - 2), val = line.substr(eq + 1);
      if (key == "config_hash") r.provenance.config_hash = val;
      else if (key == "circuit_hash") r.provenance.circuit_hash = val;
      else if (key == "version") r.provenance.version = val;
      continue;
    }
    if (!header) {
      if (line != "param_id,param_name,value,unit") throw validation_error("report csv: bad header");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string id, name, value, unit;
    std::getline(ss, id, ',');
    std::getline(ss, name, ',');
    std::getline(ss, value, ',');
    std::getline(ss, unit);
    try {
      r.params.push_back({std::stoi(id), name, std::strtod(value.c_str(), nullptr), unit});
    } catch (const std::exception&) {
      throw validation_error("report csv: bad row '" + line + "'");
    }
  }
  if (r.params.size() != kParameterCount) throw validation_error("report csv: expected 49 rows");
  return r;
}

}  // namespace ftqre
