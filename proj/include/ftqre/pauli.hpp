#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftqre/gate.hpp"

namespace ftqre {

// i^phase * prod_q X_q^{x_q} Z_q^{z_q}, bit-packed. Y is stored as x=z=1 with
// the factor i carried in the phase.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(size_t n) : n_(n), x_((n + 63) / 64, 0), z_((n + 63) / 64, 0) {}

  size_t size() const { return n_; }
  bool x(size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1u; }
  bool z(size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1u; }
  void set_x(size_t q, bool v) { set(x_, q, v); }
  void set_z(size_t q, bool v) { set(z_, q, v); }
  int phase() const { return phase_; }
  void add_phase(int k) { phase_ = ((phase_ + k) % 4 + 4) % 4; }

  static PauliString single(size_t n, size_t q, char p) {
    PauliString s(n);
    if (p == 'X' || p == 'Y') s.set_x(q, true);
    if (p == 'Z' || p == 'Y') s.set_z(q, true);
    if (p == 'Y') s.phase_ = 1;
    return s;
  }

  bool is_identity() const {
    for (size_t w = 0; w < x_.size(); ++w)
      if (x_[w] | z_[w]) return false;
    return true;
  }

  // this <- this * other
  void mul_right(const PauliString& o) {
    int sign = 0;
    for (size_t w = 0; w < x_.size(); ++w) sign += __builtin_popcountll(z_[w] & o.x_[w]);
    add_phase(o.phase_ + 2 * (sign & 1));
    for (size_t w = 0; w < x_.size(); ++w) {
      x_[w] ^= o.x_[w];
      z_[w] ^= o.z_[w];
    }
  }

  bool commutes(const PauliString& o) const {
    int s = 0;
    for (size_t w = 0; w < x_.size(); ++w)
      s += __builtin_popcountll(x_[w] & o.z_[w]) + __builtin_popcountll(z_[w] & o.x_[w]);
    return (s & 1) == 0;
  }

  // Conjugation P -> U P U^dagger for the Clifford gate set.
  void h(size_t q) {
    bool a = x(q), b = z(q);
    if (a && b) add_phase(2);
    set_x(q, b);
    set_z(q, a);
  }
  void s(size_t q) {
    if (x(q)) {
      set_z(q, !z(q));
      add_phase(1);
    }
  }
  void sdg(size_t q) {
    if (x(q)) {
      set_z(q, !z(q));
      add_phase(3);
    }
  }
  void px(size_t q) {
    if (z(q)) add_phase(2);
  }
  void pz(size_t q) {
    if (x(q)) add_phase(2);
  }
  void py(size_t q) {
    if (x(q) != z(q)) add_phase(2);
  }
  void cz(size_t a, size_t b) {
    bool xa = x(a), xb = x(b);
    if (xb) set_z(a, !z(a));
    if (xa) set_z(b, !z(b));
    if (xa && xb) add_phase(2);
  }
  void cx(size_t c, size_t t) {
    if (x(c)) set_x(t, !x(t));
    if (z(t)) set_z(c, !z(c));
  }
  void swap(size_t a, size_t b) {
    bool xa = x(a), za = z(a);
    set_x(a, x(b));
    set_z(a, z(b));
    set_x(b, xa);
    set_z(b, za);
  }

  // Applies a Clifford gate whose qubit indices are node ids.
  void conjugate(const Gate& g) {
    const auto& q = g.qubits;
    switch (g.kind) {
      case GateKind::H: h(q[0]); break;
      case GateKind::S: s(q[0]); break;
      case GateKind::Sdg: sdg(q[0]); break;
      case GateKind::X: px(q[0]); break;
      case GateKind::Y: py(q[0]); break;
      case GateKind::Z: pz(q[0]); break;
      case GateKind::CX: cx(q[0], q[1]); break;
      case GateKind::CZ: cz(q[0], q[1]); break;
      case GateKind::SWAP: swap(q[0], q[1]); break;
      default: throw std::logic_error("PauliString::conjugate: non-Clifford gate");
    }
  }

  // Letter on qubit q ignoring phase: 'I', 'X', 'Y' or 'Z'.
  char letter(size_t q) const {
    bool a = x(q), b = z(q);
    return a ? (b ? 'Y' : 'X') : (b ? 'Z' : 'I');
  }

  // Sparse form: (qubit, letter) pairs with the Hermitian sign folded in.
  // Returns false for a sign of -1.
  bool hermitian_sign_positive() const {
    int ny = 0;
    for (size_t w = 0; w < x_.size(); ++w) ny += __builtin_popcountll(x_[w] & z_[w]);
    int r = ((phase_ - ny) % 4 + 4) % 4;
    if (r % 2) throw std::logic_error("PauliString: not Hermitian");
    return r == 0;
  }

  std::string str() const {
    std::string out = hermitian_sign_positive() ? "+" : "-";
    for (size_t q = 0; q < n_; ++q) out += letter(q);
    return out;
  }

  const std::vector<std::uint64_t>& xw() const { return x_; }
  const std::vector<std::uint64_t>& zw() const { return z_; }

  bool operator==(const PauliString&) const = default;

 private:
  static void set(std::vector<std::uint64_t>& v, size_t q, bool b) {
    std::uint64_t m = std::uint64_t{1} << (q & 63);
    if (b) v[q >> 6] |= m;
    else v[q >> 6] &= ~m;
  }

  size_t n_ = 0;
  std::vector<std::uint64_t> x_, z_;
  int phase_ = 0;
};

}  // namespace ftqre
