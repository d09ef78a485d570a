#pragma once

#include <cmath>
#include <vector>

#include "ftqre/gate.hpp"

namespace ftqre {

struct TranspiledWidget {
  std::vector<Gate> gates;
  long long n_T_init = 0;
  long long n_Rz_init = 0;
  long long n_Clifford_init = 0;
  int n_qubits = 0;
};

inline constexpr double kCliffordAngleTol = 1e-12;

// Appends the {I,Z,S,Sdg,T,Tdg} product equal to Rz(angle) up to phase, or a
// plain Rz when the angle is not a multiple of pi/4.
inline void emit_rz(std::vector<Gate>& out, int q, double angle) {
  if (!std::isfinite(angle)) throw validation_error("rz: non-finite angle");
  double r = std::fmod(angle, 2 * kPi);
  if (r < 0) r += 2 * kPi;
  double k = std::round(r / (kPi / 4));
  if (std::abs(r - k * kPi / 4) <= kCliffordAngleTol) {
    switch (static_cast<int>(k) % 8) {
      case 0: break;
      case 1: out.push_back({GateKind::T, {q}}); break;
      case 2: out.push_back({GateKind::S, {q}}); break;
      case 3:
        out.push_back({GateKind::S, {q}});
        out.push_back({GateKind::T, {q}});
        break;
      case 4: out.push_back({GateKind::Z, {q}}); break;
      case 5:
        out.push_back({GateKind::Z, {q}});
        out.push_back({GateKind::T, {q}});
        break;
      case 6: out.push_back({GateKind::Sdg, {q}}); break;
      case 7: out.push_back({GateKind::Tdg, {q}}); break;
    }
    return;
  }
  out.push_back({GateKind::Rz, {q}, angle});
}

inline void expand_ccx(std::vector<Gate>& out, int a, int b, int c) {
  using K = GateKind;
  out.push_back({K::H, {c}});
  out.push_back({K::CX, {b, c}});
  out.push_back({K::Tdg, {c}});
  out.push_back({K::CX, {a, c}});
  out.push_back({K::T, {c}});
  out.push_back({K::CX, {b, c}});
  out.push_back({K::Tdg, {c}});
  out.push_back({K::CX, {a, c}});
  out.push_back({K::T, {b}});
  out.push_back({K::T, {c}});
  out.push_back({K::H, {c}});
  out.push_back({K::CX, {a, b}});
  out.push_back({K::T, {a}});
  out.push_back({K::Tdg, {b}});
  out.push_back({K::CX, {a, b}});
}

inline void expand_cphase(std::vector<Gate>& out, int c, int t, double theta) {
  emit_rz(out, c, theta / 2);
  out.push_back({GateKind::CX, {c, t}});
  emit_rz(out, t, -theta / 2);
  out.push_back({GateKind::CX, {c, t}});
  emit_rz(out, t, theta / 2);
}

inline void count_gate_classes(TranspiledWidget& w) {
  w.n_T_init = w.n_Rz_init = w.n_Clifford_init = 0;
  for (const auto& g : w.gates) {
    if (g.kind == GateKind::T || g.kind == GateKind::Tdg) ++w.n_T_init;
    else if (g.kind == GateKind::Rz) ++w.n_Rz_init;
    else ++w.n_Clifford_init;
  }
}

inline TranspiledWidget transpile(const std::vector<Gate>& gates, int n_qubits = -1) {
  TranspiledWidget w;
  w.n_qubits = n_qubits < 0 ? width_of(gates) : n_qubits;
  for (const auto& g : gates) {
    validate_gate(g, n_qubits);
    switch (g.kind) {
      case GateKind::CCX: expand_ccx(w.gates, g.qubits[0], g.qubits[1], g.qubits[2]); break;
      case GateKind::CPhase: expand_cphase(w.gates, g.qubits[0], g.qubits[1], g.angle); break;
      case GateKind::Rz: emit_rz(w.gates, g.qubits[0], g.angle); break;
      default: w.gates.push_back(g); break;
    }
  }
  count_gate_classes(w);
  return w;
}

}  // namespace ftqre
