#pragma once

#include <array>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ftqre/util.hpp"

namespace ftqre {

enum class GateKind { H, S, Sdg, X, Y, Z, CX, CZ, SWAP, T, Tdg, Rz, CCX, CPhase };

struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  double angle = 0.0;

  bool operator==(const Gate&) const = default;
};

inline int arity(GateKind k) {
  switch (k) {
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::SWAP:
    case GateKind::CPhase:
      return 2;
    case GateKind::CCX:
      return 3;
    default:
      return 1;
  }
}

inline bool has_angle(GateKind k) { return k == GateKind::Rz || k == GateKind::CPhase; }

inline bool is_composite(GateKind k) { return k == GateKind::CCX || k == GateKind::CPhase; }

inline bool is_clifford(GateKind k) {
  switch (k) {
    case GateKind::T:
    case GateKind::Tdg:
    case GateKind::Rz:
    case GateKind::CCX:
    case GateKind::CPhase:
      return false;
    default:
      return true;
  }
}

// Lower-case QASM mnemonic.
inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::CX: return "cx";
    case GateKind::CZ: return "cz";
    case GateKind::SWAP: return "swap";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::Rz: return "rz";
    case GateKind::CCX: return "ccx";
    case GateKind::CPhase: return "cp";
  }
  return "?";
}

inline bool gate_from_name(const std::string& name, GateKind& out) {
  static const std::array<GateKind, 14> all = {
      GateKind::H,  GateKind::S,    GateKind::Sdg, GateKind::X,  GateKind::Y,
      GateKind::Z,  GateKind::CX,   GateKind::CZ,  GateKind::SWAP, GateKind::T,
      GateKind::Tdg, GateKind::Rz, GateKind::CCX, GateKind::CPhase};
  for (GateKind k : all) {
    if (name == gate_name(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

inline void validate_gate(const Gate& g, int n_qubits) {
  if (static_cast<int>(g.qubits.size()) != arity(g.kind))
    throw validation_error(std::string("gate ") + gate_name(g.kind) + ": wrong number of qubits");
  for (size_t i = 0; i < g.qubits.size(); ++i) {
    if (g.qubits[i] < 0 || (n_qubits >= 0 && g.qubits[i] >= n_qubits))
      throw validation_error(std::string("gate ") + gate_name(g.kind) + ": qubit index " +
                             std::to_string(g.qubits[i]) + " out of range");
    for (size_t j = 0; j < i; ++j)
      if (g.qubits[i] == g.qubits[j])
        throw validation_error(std::string("gate ") + gate_name(g.kind) + ": repeated qubit");
  }
  if (has_angle(g.kind) && !std::isfinite(g.angle))
    throw validation_error(std::string("gate ") + gate_name(g.kind) + ": non-finite angle");
}

inline int width_of(const std::vector<Gate>& gates) {
  int n = 0;
  for (const auto& g : gates)
    for (int q : g.qubits) n = std::max(n, q + 1);
  return n;
}

inline Gate make_gate(GateKind k, std::vector<int> qs, double angle = 0.0) {
  return Gate{k, std::move(qs), angle};
}

// Inverse of a gate list (reverse order, adjoint of each gate).
inline std::vector<Gate> invert(const std::vector<Gate>& gates) {
  std::vector<Gate> out;
  out.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    Gate g = *it;
    switch (g.kind) {
      case GateKind::S: g.kind = GateKind::Sdg; break;
      case GateKind::Sdg: g.kind = GateKind::S; break;
      case GateKind::T: g.kind = GateKind::Tdg; break;
      case GateKind::Tdg: g.kind = GateKind::T; break;
      case GateKind::Rz:
      case GateKind::CPhase: g.angle = -g.angle; break;
      default: break;
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace ftqre
