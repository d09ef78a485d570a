#pragma once

#include <cmath>
#include <vector>

#include "ftqre/gate.hpp"

namespace ftqre {

// Textbook QFT: Hadamard plus controlled-phase ladder per qubit, then the
// swap network that reverses qubit order.
inline std::vector<Gate> generate_qft(int n) {
  if (n < 1 || n > 32) throw validation_error("generate_qft: n must be in [1, 32]");
  std::vector<Gate> out;
  for (int j = 0; j < n; ++j) {
    out.push_back({GateKind::H, {j}});
    for (int k = j + 1; k < n; ++k)
      out.push_back({GateKind::CPhase, {k, j}, kPi / std::ldexp(1.0, k - j)});
  }
  for (int i = 0; i < n / 2; ++i) out.push_back({GateKind::SWAP, {i, n - 1 - i}});
  return out;
}

}  // namespace ftqre
