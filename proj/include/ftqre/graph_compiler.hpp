#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ftqre/pauli.hpp"
#include "ftqre/statevec.hpp"
#include "ftqre/transpile.hpp"

namespace ftqre {

// Local Clifford attached to a graph node: the physical node state is
// H^h S^s Z^z applied to the graph-state node (Z acts first).
struct LocalClifford {
  bool h = false, s = false, z = false;
  bool operator==(const LocalClifford&) const = default;
  bool identity() const { return !h && !s && !z; }
};

struct GraphState {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;  // a < b, sorted
  std::vector<int> inputs;                  // algorithm qubit -> node
  std::vector<int> outputs;                 // algorithm qubit -> node
  std::vector<LocalClifford> lc;

  bool operator==(const GraphState&) const = default;
};

enum class BasisKind { T, Rz, X };

inline const char* basis_name(BasisKind b) {
  switch (b) {
    case BasisKind::T: return "T";
    case BasisKind::Rz: return "Rz";
    case BasisKind::X: return "X";
  }
  return "?";
}

// One non-output node measurement. The node is measured in the equatorial
// basis (|0> +- e^{i angle}|1>)/sqrt2 on its physical state; angle = -theta
// for a rotation by theta.
struct Measurement {
  int node = 0;
  BasisKind kind = BasisKind::T;
  double theta = 0.0;
  bool operator==(const Measurement&) const = default;
  double angle() const { return -theta; }
};

struct SparsePauli {
  std::vector<std::pair<int, char>> terms;  // (node, letter), node ascending
  bool negative = false;
  bool operator==(const SparsePauli&) const = default;

  static SparsePauli from(const PauliString& p) {
    SparsePauli s;
    s.negative = !p.hermitian_sign_positive();
    for (size_t q = 0; q < p.size(); ++q)
      if (char c = p.letter(q); c != 'I') s.terms.push_back({static_cast<int>(q), c});
    return s;
  }
  char on(int node) const {
    for (auto [q, c] : terms)
      if (q == node) return c;
    return 'I';
  }
};

struct CompiledWidget {
  std::string key;
  int n_input = 0;
  GraphState graph;
  std::vector<Measurement> meas;               // gadget order
  std::vector<std::vector<int>> consump;       // sub-steps of node ids
  // Pauli frames. A logical X^a Z^b entering input q adds
  // input_x_image[q]^a input_z_image[q]^b; outcome s of meas[k] adds byproduct[k]^s.
  std::vector<SparsePauli> input_x_image, input_z_image, byproduct;
  std::vector<std::vector<int>> x_deps, z_deps;  // per meas entry: earlier meas indices
  int n_logical = 0;
  std::vector<int> register_slot;  // per node
  long long n_T = 0, n_Rz = 0;
  std::optional<std::vector<cplx>> local_state;

  bool operator==(const CompiledWidget&) const = default;
  int n_nodes() const { return graph.n_nodes; }
  int n_measured() const { return static_cast<int>(meas.size()); }
};

inline constexpr int kMaxLocalStateQubits = 12;

namespace detail {

// Extended Clifford circuit V over graph nodes, plus the points where each
// rotation gadget's byproduct is injected.
struct GadgetProgram {
  int n_nodes = 0;
  std::vector<Gate> ops;
  std::vector<Measurement> meas;
  std::vector<int> fresh;        // fresh node of each gadget
  std::vector<size_t> inject_at;  // op index where the byproduct X enters
  std::vector<int> outputs;
};

inline GadgetProgram build_gadget_program(const TranspiledWidget& w, int n) {
  GadgetProgram prog;
  int m = 0;
  for (const auto& g : w.gates)
    if (!is_clifford(g.kind)) ++m;
  prog.n_nodes = n + m;
  std::vector<int> cur(n);
  for (int q = 0; q < n; ++q) cur[q] = q;
  int next = n;
  for (const auto& g : w.gates) {
    if (is_composite(g.kind)) throw validation_error("compile_widget: widget not transpiled");
    if (is_clifford(g.kind)) {
      Gate h = g;
      for (auto& q : h.qubits) q = cur.at(q);
      prog.ops.push_back(std::move(h));
      continue;
    }
    int q = g.qubits[0];
    int a = next++;
    double theta = g.kind == GateKind::T ? kPi / 4 : g.kind == GateKind::Tdg ? -kPi / 4 : g.angle;
    BasisKind kind = g.kind == GateKind::Rz ? BasisKind::Rz : BasisKind::T;
    prog.ops.push_back({GateKind::CZ, {cur[q], a}});
    prog.meas.push_back({cur[q], kind, theta});
    prog.fresh.push_back(a);
    prog.inject_at.push_back(prog.ops.size());
    prog.ops.push_back({GateKind::H, {a}});
    cur[q] = a;
  }
  // Outputs are left in the Hadamard frame so the next widget's input
  // admission receives the logical state directly.
  for (int q = 0; q < n; ++q) prog.ops.push_back({GateKind::H, {cur[q]}});
  prog.outputs = cur;
  return prog;
}

struct GraphForm {
  std::vector<std::pair<int, int>> edges;
  std::vector<LocalClifford> lc;
};

// Converts the stabilizer generators of a state into graph form with local
// Cliffords, by Gaussian elimination.
inline GraphForm to_graph_form(std::vector<PauliString> rows) {
  const size_t n = rows.size();
  GraphForm out;
  out.lc.assign(n, {});
  auto conj_all = [&](auto&& fn) {
    for (auto& r : rows) fn(r);
  };
  auto rref_x = [&](std::vector<size_t>& pivots) {
    pivots.clear();
    size_t rank = 0;
    for (size_t col = 0; col < n && rank < n; ++col) {
      size_t sel = rank;
      while (sel < n && !rows[sel].x(col)) ++sel;
      if (sel == n) continue;
      std::swap(rows[rank], rows[sel]);
      for (size_t r = 0; r < n; ++r)
        if (r != rank && rows[r].x(col)) rows[r].mul_right(rows[rank]);
      pivots.push_back(col);
      ++rank;
    }
    return rank;
  };

  std::vector<size_t> pivots;
  for (size_t guard = 0; rref_x(pivots) < n; ++guard) {
    if (guard > n) throw std::logic_error("to_graph_form: stabilizer rows are not independent");
    std::vector<bool> is_pivot(n, false);
    for (size_t c : pivots) is_pivot[c] = true;
    // Row reduce the Z part of the X-free rows over non-pivot columns; the
    // resulting pivot columns get a Hadamard.
    std::vector<PauliString> zr(rows.begin() + static_cast<long>(pivots.size()), rows.end());
    size_t rank = 0;
    std::vector<size_t> hcols;
    for (size_t col = 0; col < n && rank < zr.size(); ++col) {
      if (is_pivot[col]) continue;
      size_t sel = rank;
      while (sel < zr.size() && !zr[sel].z(col)) ++sel;
      if (sel == zr.size()) continue;
      std::swap(zr[rank], zr[sel]);
      for (size_t r = 0; r < zr.size(); ++r)
        if (r != rank && zr[r].z(col)) zr[r].mul_right(zr[rank]);
      hcols.push_back(col);
      ++rank;
    }
    if (hcols.empty()) throw std::logic_error("to_graph_form: degenerate stabilizer group");
    for (size_t c : hcols) {
      conj_all([c](PauliString& r) { r.h(c); });
      out.lc[c].h = !out.lc[c].h;
    }
  }
  // X part is now the identity; clear the diagonal with S^dagger and fix signs with Z.
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].z(i)) {
      conj_all([i](PauliString& r) { r.sdg(i); });
      out.lc[i].s = true;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (!rows[i].hermitian_sign_positive()) {
      conj_all([i](PauliString& r) { r.pz(i); });
      out.lc[i].z = true;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (rows[i].z(j) != rows[j].z(i)) throw std::logic_error("to_graph_form: asymmetric adjacency");
      if (rows[i].z(j)) out.edges.push_back({static_cast<int>(i), static_cast<int>(j)});
    }
  }
  return out;
}

}  // namespace detail

// Dense physical state of a graph with local Cliffords.
inline StateVector graph_state_vector(const GraphState& g) {
  StateVector s = StateVector::plus(g.n_nodes);
  for (auto [a, b] : g.edges) s.cz(a, b);
  for (int v = 0; v < g.n_nodes; ++v) {
    const auto& c = g.lc[v];
    if (c.z) s.apply_1q(mat::Z(), v);
    if (c.s) s.apply_1q(mat::phase(kPi / 2), v);
    if (c.h) s.apply_1q(mat::H(), v);
  }
  return s;
}

// Reference construction: the extended Clifford circuit applied to |+>^N.
inline StateVector gadget_state_vector(const TranspiledWidget& w, int n_input) {
  auto prog = detail::build_gadget_program(w, n_input);
  StateVector s = StateVector::plus(prog.n_nodes);
  s.apply(prog.ops);
  return s;
}

inline CompiledWidget compile_widget(const TranspiledWidget& w, int n_input = -1) {
  const int n = n_input < 0 ? w.n_qubits : n_input;
  if (w.n_qubits > n) throw validation_error("compile_widget: widget wider than n_input");
  auto prog = detail::build_gadget_program(w, n);
  const int N = prog.n_nodes;
  const size_t m = prog.meas.size();

  CompiledWidget cw;
  cw.n_input = n;
  cw.meas = prog.meas;
  for (const auto& mm : cw.meas) (mm.kind == BasisKind::T ? cw.n_T : cw.n_Rz) += 1;

  // Heisenberg images under V: stabilizers V X_i V^dagger, input Z images, and
  // gadget byproducts injected mid-circuit.
  std::vector<PauliString> stab, zimg, byp;
  stab.reserve(N);
  for (int i = 0; i < N; ++i) stab.push_back(PauliString::single(N, i, 'X'));
  for (int q = 0; q < n; ++q) zimg.push_back(PauliString::single(N, q, 'Z'));
  size_t next_inject = 0;
  for (size_t t = 0; t <= prog.ops.size(); ++t) {
    while (next_inject < m && prog.inject_at[next_inject] == t) {
      byp.push_back(PauliString::single(N, prog.fresh[next_inject], 'X'));
      ++next_inject;
    }
    if (t == prog.ops.size()) break;
    const Gate& g = prog.ops[t];
    for (auto& p : stab) p.conjugate(g);
    for (auto& p : zimg) p.conjugate(g);
    for (auto& p : byp) p.conjugate(g);
  }
  for (int q = 0; q < n; ++q) {
    cw.input_x_image.push_back(SparsePauli::from(stab[q]));
    cw.input_z_image.push_back(SparsePauli::from(zimg[q]));
  }
  for (const auto& p : byp) cw.byproduct.push_back(SparsePauli::from(p));

  auto form = detail::to_graph_form(std::move(stab));
  cw.graph.n_nodes = N;
  cw.graph.edges = std::move(form.edges);
  cw.graph.lc = std::move(form.lc);
  for (int q = 0; q < n; ++q) cw.graph.inputs.push_back(q);
  cw.graph.outputs = prog.outputs;

  // Frame dependencies between measurements.
  std::vector<int> meas_index(N, -1);
  for (size_t k = 0; k < m; ++k) meas_index[cw.meas[k].node] = static_cast<int>(k);
  cw.x_deps.assign(m, {});
  cw.z_deps.assign(m, {});
  for (size_t k = 0; k < m; ++k) {
    for (auto [node, c] : cw.byproduct[k].terms) {
      int u = meas_index[node];
      if (u < 0) continue;
      if (c == 'X' || c == 'Y') cw.x_deps[u].push_back(static_cast<int>(k));
      if (c == 'Z' || c == 'Y') cw.z_deps[u].push_back(static_cast<int>(k));
    }
  }
  // A measurement angle needs the corrected outcomes of its X sources; a
  // corrected outcome needs the corrected outcomes of its Z sources.
  std::vector<int> layer(m, 0), zready(m, 0);
  int n_layers = 0;
  for (size_t u = 0; u < m; ++u) {
    for (int k : cw.z_deps[u]) zready[u] = std::max({zready[u], layer[k] + 1, zready[k]});
    for (int k : cw.x_deps[u]) layer[u] = std::max({layer[u], layer[k] + 1, zready[k]});
    n_layers = std::max(n_layers, layer[u] + 1);
  }
  cw.consump.assign(n_layers, {});
  for (size_t u = 0; u < m; ++u) cw.consump[layer[u]].push_back(cw.meas[u].node);

  // Node lifetimes over consumption layers give the concurrent logical qubit
  // count and a register slot per node.
  std::vector<int> when(N, n_layers), start(N, n_layers);
  for (size_t u = 0; u < m; ++u) when[cw.meas[u].node] = layer[u];
  for (int v = 0; v < N; ++v) start[v] = when[v];
  for (auto [a, b] : cw.graph.edges) {
    start[a] = std::min(start[a], when[b]);
    start[b] = std::min(start[b], when[a]);
  }
  for (int q = 0; q < n; ++q) start[cw.graph.inputs[q]] = 0;
  std::vector<int> order(N);
  for (int v = 0; v < N; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::tie(start[a], when[a], a) < std::tie(start[b], when[b], b);
  });
  cw.register_slot.assign(N, -1);
  std::set<int> free_slots;
  using Busy = std::pair<int, int>;  // (end layer, slot)
  std::priority_queue<Busy, std::vector<Busy>, std::greater<>> busy;
  int n_slots = 0;
  for (int v : order) {
    while (!busy.empty() && busy.top().first < start[v]) {
      free_slots.insert(busy.top().second);
      busy.pop();
    }
    int slot;
    if (free_slots.empty()) slot = n_slots++;
    else {
      slot = *free_slots.begin();
      free_slots.erase(free_slots.begin());
    }
    cw.register_slot[v] = slot;
    busy.push({when[v], slot});
  }
  cw.n_logical = n_slots;

  if (N <= kMaxLocalStateQubits) cw.local_state = graph_state_vector(cw.graph).amps();
  return cw;
}

// Canonical key of a gate list modulo qubit relabeling by first use.
inline std::string equivalence_key(const std::vector<Gate>& gates, int n_qubits) {
  std::map<int, int> relabel;
  std::string s = std::to_string(n_qubits) + ":";
  for (const auto& g : gates) {
    s += gate_name(g.kind);
    for (int q : g.qubits) {
      auto it = relabel.try_emplace(q, static_cast<int>(relabel.size())).first;
      s += "," + std::to_string(it->second);
    }
    if (has_angle(g.kind)) s += "(" + std::to_string(g.angle) + ")";
    s += ";";
  }
  return hex64(fnv1a(s));
}

struct WidgetStatsRef {
  const CompiledWidget* widget;
  std::uint64_t multiplicity;
};

struct StitchedEstimationSet {
  int n_input = 0;
  std::uint64_t n_widgets = 0;
  std::uint64_t n_distinct = 0;
  std::uint64_t n_T_init = 0;
  std::uint64_t n_Rz_init = 0;
  int n_logical = 0;
  std::uint64_t n_nodes_total = 0;  // stitched node count
  std::uint64_t consump_steps = 0;
};

inline StitchedEstimationSet stitch(const std::vector<WidgetStatsRef>& table) {
  StitchedEstimationSet s;
  if (table.empty()) throw validation_error("stitch: empty widget sequence");
  s.n_input = table.front().widget->n_input;
  for (const auto& [w, mult] : table) {
    if (w->n_input != s.n_input) throw validation_error("stitch: widget width mismatch");
    if (mult == 0) continue;
    s.n_widgets = checked_add(s.n_widgets, mult);
    s.n_distinct += 1;
    s.n_T_init = checked_add(s.n_T_init, checked_mul(mult, static_cast<std::uint64_t>(w->n_T)));
    s.n_Rz_init = checked_add(s.n_Rz_init, checked_mul(mult, static_cast<std::uint64_t>(w->n_Rz)));
    s.n_logical = std::max(s.n_logical, w->n_logical);
    s.n_nodes_total = checked_add(s.n_nodes_total, checked_mul(mult, static_cast<std::uint64_t>(w->n_nodes())));
    s.consump_steps = checked_add(s.consump_steps, checked_mul(mult, w->consump.size()));
  }
  if (s.n_widgets == 0) throw validation_error("stitch: empty widget sequence");
  s.n_nodes_total = checked_add(s.n_nodes_total,
                                checked_mul(s.n_widgets - 1, static_cast<std::uint64_t>(s.n_input)));
  return s;
}

// Executes a widget sequence on |0...0> in simulation with randomized
// measurement outcomes and Pauli frame tracking, then applies the inverse
// circuit and returns the overlap with |0...0>.
inline double verify_unitarity(const std::vector<const CompiledWidget*>& seq, const std::vector<Gate>& inverse,
                               std::uint64_t seed = 1) {
  if (seq.empty()) throw validation_error("verify_unitarity: empty sequence");
  const int n = seq.front()->n_input;
  for (size_t i = 0; i < seq.size(); ++i) {
    const auto* w = seq[i];
    if (w->n_input != n) throw validation_error("verify_unitarity: widget width mismatch");
    int peak = w->n_nodes() + (i > 0 ? n : 0);
    if (!w->local_state || peak > kMaxLocalStateQubits)
      throw validation_error("verify_unitarity: qubit budget exceeded (limit " +
                             std::to_string(kMaxLocalStateQubits) + " simulated qubits, widget " +
                             std::to_string(i) + " needs " + std::to_string(peak) + ")");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coin(0, 1);

  StateVector sim;  // qubits labelled by `label`
  std::vector<int> label;   // sim qubit -> node of current widget, or -1-q for previous outputs
  std::vector<bool> fx, fz;  // frame on current widget nodes
  auto sim_index = [&](int lab) {
    for (size_t k = 0; k < label.size(); ++k)
      if (label[k] == lab) return static_cast<int>(k);
    throw std::logic_error("verify_unitarity: qubit not live");
  };
  auto to_sim = [&](const SparsePauli& p) {
    std::vector<std::pair<int, char>> t;
    for (auto [node, c] : p.terms) t.push_back({sim_index(node), c});
    return t;
  };
  auto fold = [&](const SparsePauli& p) {
    for (auto [node, c] : p.terms) {
      if (c == 'X' || c == 'Y') fx[node] = !fx[node];
      if (c == 'Z' || c == 'Y') fz[node] = !fz[node];
    }
  };
  // Draws an outcome uniformly, falling back to the other branch if it has
  // zero probability.
  auto pick = [&](double p0) {
    int o = coin(rng);
    double p = o ? 1 - p0 : p0;
    if (p < 1e-12) o ^= 1;
    return o;
  };
  auto remove = [&](int k, int outcome) {
    sim.collapse_and_remove(k, outcome);
    label.erase(label.begin() + k);
  };

  std::vector<bool> out_x(n, false), out_z(n, false);
  for (size_t i = 0; i < seq.size(); ++i) {
    const CompiledWidget& w = *seq[i];
    const int N = w.n_nodes();
    StateVector r(N);
    r.amps() = *w.local_state;
    if (i == 0) {
      sim = r;
      label.clear();
      for (int v = 0; v < N; ++v) label.push_back(v);
    } else {
      for (int k = 0; k < sim.n(); ++k) label[k] = -1 - label[k];  // previous outputs hold -1-q
      sim.append(r);
      for (int v = 0; v < N; ++v) label.push_back(v);
    }
    fx.assign(N, false);
    fz.assign(N, false);

    for (int q = 0; q < n; ++q) {
      if (i == 0) {
        // Admit |0>: measure the image of Z on the input; outcome 1 means an
        // X on the logical input.
        auto zp = to_sim(w.input_z_image[q]);
        StateVector probe = sim;
        double p0 = probe.project_pauli(zp, w.input_z_image[q].negative, 0);
        int b = pick(p0);
        sim.project_pauli(zp, w.input_z_image[q].negative, b);
        if (b) fold(w.input_x_image[q]);
      } else {
        // Teleport the previous output: controlled image of Z, then X-measure.
        int o = sim_index(-1 - q);
        sim.controlled_pauli(o, to_sim(w.input_z_image[q]), w.input_z_image[q].negative);
        sim.apply_1q(mat::H(), o);
        int a = pick(sim.probability(o, 0));
        remove(o, a);
        if (a ^ static_cast<int>(out_z[q])) fold(w.input_x_image[q]);
        if (out_x[q]) fold(w.input_z_image[q]);
      }
    }

    std::vector<int> meas_index(N, -1);
    for (size_t k = 0; k < w.meas.size(); ++k) meas_index[w.meas[k].node] = static_cast<int>(k);
    for (const auto& step : w.consump) {
      for (int node : step) {
        const auto& mm = w.meas[meas_index[node]];
        int k = sim_index(node);
        double phi = fx[node] ? -mm.angle() : mm.angle();
        sim.apply_1q(mat::phase(-phi), k);
        sim.apply_1q(mat::H(), k);
        int outcome = pick(sim.probability(k, 0));
        remove(k, outcome);
        if (outcome ^ static_cast<int>(fz[node])) fold(w.byproduct[meas_index[node]]);
      }
    }
    std::vector<int> slots(n);
    for (int q = 0; q < n; ++q) {
      int node = w.graph.outputs[q];
      out_x[q] = fx[node];
      out_z[q] = fz[node];
      slots[q] = sim_index(node);
    }
    for (int q = 0; q < n; ++q) label[slots[q]] = q;
  }

  // Undo frames and the output Hadamard frame, order qubits by algorithm index.
  for (int q = 0; q < n; ++q) {
    int k = sim_index(q);
    if (out_x[q]) sim.apply_1q(mat::X(), k);
    if (out_z[q]) sim.apply_1q(mat::Z(), k);
    sim.apply_1q(mat::H(), k);
  }
  std::vector<int> order(n);
  for (int q = 0; q < n; ++q) order[q] = sim_index(q);
  sim.permute(order);
  sim.apply(inverse);
  return std::norm(sim.amps()[0]);
}

}  // namespace ftqre
