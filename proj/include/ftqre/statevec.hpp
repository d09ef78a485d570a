#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "ftqre/gate.hpp"
#include "ftqre/pauli.hpp"

namespace ftqre {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major

namespace mat {
inline const double r2 = 1.0 / std::sqrt(2.0);
inline Mat2 H() { return {r2, r2, r2, -r2}; }
inline Mat2 X() { return {0, 1, 1, 0}; }
inline Mat2 Y() { return {0, cplx(0, -1), cplx(0, 1), 0}; }
inline Mat2 Z() { return {1, 0, 0, -1}; }
inline Mat2 phase(double a) { return {1, 0, 0, std::polar(1.0, a)}; }
inline Mat2 rz(double a) { return {std::polar(1.0, -a / 2), 0, 0, std::polar(1.0, a / 2)}; }
}  // namespace mat

// Dense state vector, qubit q is bit q of the basis index.
class StateVector {
 public:
  explicit StateVector(int n = 0) : n_(n), a_(size_t{1} << n, 0.0) { a_[0] = 1.0; }

  static StateVector plus(int n) {
    StateVector s(n);
    double v = 1.0 / std::sqrt(static_cast<double>(s.a_.size()));
    for (auto& x : s.a_) x = v;
    return s;
  }

  int n() const { return n_; }
  std::vector<cplx>& amps() { return a_; }
  const std::vector<cplx>& amps() const { return a_; }

  void apply_1q(const Mat2& m, int q) {
    size_t bit = size_t{1} << q;
    for (size_t i = 0; i < a_.size(); ++i) {
      if (i & bit) continue;
      cplx u = a_[i], v = a_[i | bit];
      a_[i] = m[0] * u + m[1] * v;
      a_[i | bit] = m[2] * u + m[3] * v;
    }
  }

  void cz(int a, int b) {
    size_t m = (size_t{1} << a) | (size_t{1} << b);
    for (size_t i = 0; i < a_.size(); ++i)
      if ((i & m) == m) a_[i] = -a_[i];
  }

  void cx(int c, int t) {
    size_t bc = size_t{1} << c, bt = size_t{1} << t;
    for (size_t i = 0; i < a_.size(); ++i)
      if ((i & bc) && !(i & bt)) std::swap(a_[i], a_[i | bt]);
  }

  void swap(int a, int b) {
    size_t ba = size_t{1} << a, bb = size_t{1} << b;
    for (size_t i = 0; i < a_.size(); ++i)
      if ((i & ba) && !(i & bb)) std::swap(a_[i], a_[(i & ~ba) | bb]);
  }

  void apply(const Gate& g) {
    const auto& q = g.qubits;
    switch (g.kind) {
      case GateKind::H: apply_1q(mat::H(), q[0]); break;
      case GateKind::S: apply_1q(mat::phase(kPi / 2), q[0]); break;
      case GateKind::Sdg: apply_1q(mat::phase(-kPi / 2), q[0]); break;
      case GateKind::X: apply_1q(mat::X(), q[0]); break;
      case GateKind::Y: apply_1q(mat::Y(), q[0]); break;
      case GateKind::Z: apply_1q(mat::Z(), q[0]); break;
      case GateKind::T: apply_1q(mat::phase(kPi / 4), q[0]); break;
      case GateKind::Tdg: apply_1q(mat::phase(-kPi / 4), q[0]); break;
      case GateKind::Rz: apply_1q(mat::rz(g.angle), q[0]); break;
      case GateKind::CX: cx(q[0], q[1]); break;
      case GateKind::CZ: cz(q[0], q[1]); break;
      case GateKind::SWAP: swap(q[0], q[1]); break;
      case GateKind::CCX: {
        size_t m = (size_t{1} << q[0]) | (size_t{1} << q[1]), bt = size_t{1} << q[2];
        for (size_t i = 0; i < a_.size(); ++i)
          if ((i & m) == m && !(i & bt)) std::swap(a_[i], a_[i | bt]);
        break;
      }
      case GateKind::CPhase: {
        size_t m = (size_t{1} << q[0]) | (size_t{1} << q[1]);
        cplx ph = std::polar(1.0, g.angle);
        for (size_t i = 0; i < a_.size(); ++i)
          if ((i & m) == m) a_[i] *= ph;
        break;
      }
    }
  }

  void apply(const std::vector<Gate>& gates) {
    for (const auto& g : gates) apply(g);
  }

  // Applies a Pauli given as per-qubit letters (index = sim qubit) with sign.
  void apply_pauli(const std::vector<std::pair<int, char>>& terms, bool negative = false) {
    for (auto [q, p] : terms) {
      if (p == 'X') apply_1q(mat::X(), q);
      else if (p == 'Y') apply_1q(mat::Y(), q);
      else if (p == 'Z') apply_1q(mat::Z(), q);
    }
    if (negative)
      for (auto& x : a_) x = -x;
  }

  // Controlled-P with control qubit c (P must not touch c).
  void controlled_pauli(int c, const std::vector<std::pair<int, char>>& terms, bool negative) {
    StateVector t = *this;
    t.apply_pauli(terms, negative);
    size_t bc = size_t{1} << c;
    for (size_t i = 0; i < a_.size(); ++i)
      if (i & bc) a_[i] = t.a_[i];
  }

  // Projects onto the (-1)^outcome eigenspace of a Hermitian Pauli and
  // renormalises. Returns the probability of that outcome.
  double project_pauli(const std::vector<std::pair<int, char>>& terms, bool negative, int outcome) {
    StateVector t = *this;
    t.apply_pauli(terms, negative);
    double sgn = outcome ? -1.0 : 1.0;
    double norm = 0;
    for (size_t i = 0; i < a_.size(); ++i) {
      a_[i] = 0.5 * (a_[i] + sgn * t.a_[i]);
      norm += std::norm(a_[i]);
    }
    if (norm > 0)
      for (auto& x : a_) x /= std::sqrt(norm);
    return norm;
  }

  double probability(int q, int outcome) const {
    size_t bit = size_t{1} << q;
    double p = 0;
    for (size_t i = 0; i < a_.size(); ++i)
      if (((i & bit) != 0) == (outcome != 0)) p += std::norm(a_[i]);
    return p;
  }

  // Z-measures qubit q with the given outcome, then removes it from the
  // register. Higher qubits shift down by one.
  void collapse_and_remove(int q, int outcome) {
    size_t bit = size_t{1} << q;
    std::vector<cplx> out(a_.size() / 2);
    double norm = 0;
    for (size_t i = 0; i < a_.size(); ++i) {
      if (((i & bit) != 0) != (outcome != 0)) continue;
      size_t lo = i & (bit - 1), hi = (i >> (q + 1)) << q;
      out[hi | lo] = a_[i];
      norm += std::norm(a_[i]);
    }
    for (auto& x : out) x /= std::sqrt(norm);
    a_ = std::move(out);
    --n_;
  }

  // this <- this (x) other, other's qubits become the high qubits.
  void append(const StateVector& other) {
    std::vector<cplx> out(a_.size() * other.a_.size());
    for (size_t j = 0; j < other.a_.size(); ++j)
      for (size_t i = 0; i < a_.size(); ++i) out[(j << n_) | i] = a_[i] * other.a_[j];
    a_ = std::move(out);
    n_ += other.n_;
  }

  // Moves qubits so that new qubit k is old qubit order[k].
  void permute(const std::vector<int>& order) {
    std::vector<cplx> out(a_.size());
    for (size_t i = 0; i < a_.size(); ++i) {
      size_t j = 0;
      for (int k = 0; k < n_; ++k)
        if (i & (size_t{1} << order[k])) j |= size_t{1} << k;
      out[j] = a_[i];
    }
    a_ = std::move(out);
  }

 private:
  int n_;
  std::vector<cplx> a_;
};

inline cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Dense unitary as a list of columns.
inline std::vector<std::vector<cplx>> unitary_of(const std::vector<Gate>& gates, int n) {
  std::vector<std::vector<cplx>> cols;
  for (size_t k = 0; k < (size_t{1} << n); ++k) {
    StateVector s(n);
    s.amps()[0] = 0;
    s.amps()[k] = 1;
    s.apply(gates);
    cols.push_back(s.amps());
  }
  return cols;
}

// Max entrywise distance after removing the best global phase.
inline double unitary_distance_up_to_phase(const std::vector<std::vector<cplx>>& u,
                                           const std::vector<std::vector<cplx>>& v) {
  // Align the phase using the overlap (trace of u^dagger v).
  cplx tr = 0;
  for (size_t c = 0; c < u.size(); ++c) tr += inner(u[c], v[c]);
  cplx ph = std::abs(tr) > 0 ? tr / std::abs(tr) : 1.0;
  double d = 0;
  for (size_t c = 0; c < u.size(); ++c)
    for (size_t r = 0; r < u[c].size(); ++r) d = std::max(d, std::abs(u[c][r] * ph - v[c][r]));
  return d;
}

}  // namespace ftqre
