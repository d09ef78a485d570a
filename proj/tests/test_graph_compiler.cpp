#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "ftqre/graph_compiler.hpp"
#include "ftqre/qft.hpp"
#include "ftqre/transpile.hpp"

using namespace ftqre;

namespace {

CompiledWidget compile(const std::vector<Gate>& g, int n) { return compile_widget(transpile(g, n), n); }

double worst_fidelity(const std::vector<std::vector<Gate>>& widgets, int n, int seeds) {
  std::vector<CompiledWidget> cw;
  std::vector<Gate> all;
  for (const auto& w : widgets) {
    cw.push_back(compile(w, n));
    all.insert(all.end(), w.begin(), w.end());
  }
  std::vector<const CompiledWidget*> seq;
  for (const auto& w : cw) seq.push_back(&w);
  double worst = 1;
  for (int s = 0; s < seeds; ++s) worst = std::min(worst, verify_unitarity(seq, invert(all), s));
  return worst;
}

std::vector<Gate> random_circuit(std::mt19937_64& rng, int n, int len) {
  std::vector<Gate> g;
  for (int i = 0; i < len; ++i) {
    auto kind = static_cast<GateKind>(rng() % 14);
    if (arity(kind) > n) continue;
    std::vector<int> qs(n);
    std::iota(qs.begin(), qs.end(), 0);
    std::shuffle(qs.begin(), qs.end(), rng);
    qs.resize(arity(kind));
    double a = std::uniform_real_distribution<double>(-3, 3)(rng);
    g.push_back(make_gate(kind, qs, has_angle(kind) ? a : 0.0));
  }
  return g;
}

}  // namespace

TEST(Compile, CliffordOnlyIsAbsorbed) {
  auto w = compile({make_gate(GateKind::H, {0})}, 1);
  EXPECT_EQ(w.n_nodes(), 1);
  EXPECT_TRUE(w.meas.empty());
  EXPECT_TRUE(w.consump.empty());
  auto w2 = compile({make_gate(GateKind::H, {0}), make_gate(GateKind::CX, {0, 1}), make_gate(GateKind::S, {1})}, 2);
  EXPECT_EQ(w2.n_nodes(), 2);
  EXPECT_TRUE(w2.meas.empty());
}

TEST(Compile, SingleT) {
  auto w = compile({make_gate(GateKind::T, {0})}, 1);
  EXPECT_EQ(w.n_nodes(), 2);
  EXPECT_EQ(w.graph.edges.size(), 1u);
  ASSERT_EQ(w.meas.size(), 1u);
  EXPECT_EQ(w.meas[0].kind, BasisKind::T);
  EXPECT_EQ(w.n_logical, 2);
  EXPECT_GE(worst_fidelity({{make_gate(GateKind::T, {0})}}, 1, 20), 1 - 1e-9);
}

TEST(Compile, RotationThenCx) {
  std::vector<Gate> g = {make_gate(GateKind::Rz, {0}, 0.3), make_gate(GateKind::CX, {0, 1})};
  auto w = compile(g, 2);
  ASSERT_EQ(w.meas.size(), 1u);
  EXPECT_EQ(w.meas[0].kind, BasisKind::Rz);
  EXPECT_DOUBLE_EQ(w.meas[0].theta, 0.3);
  EXPECT_GE(worst_fidelity({g}, 2, 20), 1 - 1e-9);
}

TEST(Compile, ScheduleInvariants) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + rng() % 3;
    auto g = random_circuit(rng, n, 8);
    auto tw = transpile(g, n);
    auto w = compile_widget(tw, n);
    EXPECT_EQ(w.n_measured(), tw.n_T_init + tw.n_Rz_init);
    std::set<int> consumed;
    for (const auto& step : w.consump)
      for (int v : step) EXPECT_TRUE(consumed.insert(v).second);
    std::set<int> outputs(w.graph.outputs.begin(), w.graph.outputs.end());
    for (int v = 0; v < w.n_nodes(); ++v) EXPECT_EQ(consumed.count(v) == 1, outputs.count(v) == 0);
    EXPECT_LE(n, w.n_logical);
    EXPECT_LE(w.n_logical, w.n_nodes());
    for (auto [a, b] : w.graph.edges) EXPECT_NE(a, b);
    EXPECT_EQ(compile_widget(tw, n), w);
  }
}

TEST(Compile, ConsumptionRespectsDependencies) {
  auto w = compile(generate_qft(3), 3);
  std::vector<int> step_of(w.n_nodes(), -1);
  for (size_t s = 0; s < w.consump.size(); ++s)
    for (int v : w.consump[s]) step_of[v] = static_cast<int>(s);
  for (size_t k = 0; k < w.meas.size(); ++k)
    for (int dep : w.x_deps[k]) EXPECT_LT(step_of[w.meas[dep].node], step_of[w.meas[k].node]);
}

TEST(Verify, Qft3AndToffoli) {
  EXPECT_GE(worst_fidelity({generate_qft(3)}, 3, 25), 1 - 1e-9);
  EXPECT_GE(worst_fidelity({{make_gate(GateKind::CCX, {0, 1, 2})}}, 3, 25), 1 - 1e-9);
}

TEST(Verify, IdentityWidget) { EXPECT_NEAR(worst_fidelity({{}}, 2, 3), 1.0, 1e-12); }

TEST(Verify, RandomMultiWidgetSequences) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + rng() % 2;
    std::vector<std::vector<Gate>> ws;
    int k = 1 + rng() % 3;
    for (int i = 0; i < k; ++i) ws.push_back(random_circuit(rng, n, 4));
    try {
      EXPECT_GE(worst_fidelity(ws, n, 5), 1 - 1e-9) << "trial " << trial;
    } catch (const validation_error&) {
      // over the simulation budget
    }
  }
}

TEST(Verify, BudgetRefused) {
  std::vector<Gate> g;
  for (int i = 0; i < 12; ++i) g.push_back(make_gate(GateKind::T, {0}));
  g.push_back(make_gate(GateKind::H, {0}));
  auto w = compile(g, 1);
  try {
    verify_unitarity({&w}, invert(g), 0);
    FAIL();
  } catch (const validation_error& e) {
    EXPECT_NE(std::string(e.what()).find("12"), std::string::npos);
  }
}

TEST(Stitch, NodeCounts) {
  CompiledWidget a, b;
  a.n_input = b.n_input = 2;
  a.graph.n_nodes = 5;
  b.graph.n_nodes = 5;
  a.n_logical = 3;
  b.n_logical = 4;
  EXPECT_EQ(stitch({{&a, 1}}).n_nodes_total, 5u);
  auto s = stitch({{&a, 1}, {&b, 1}});
  EXPECT_EQ(s.n_nodes_total, 12u);
  EXPECT_EQ(s.n_logical, 4);
  CompiledWidget x, y;
  x.n_input = y.n_input = 1;
  x.graph.n_nodes = 4;
  y.graph.n_nodes = 6;
  EXPECT_EQ(stitch({{&x, 2}, {&y, 1}}).n_nodes_total, 16u);
  EXPECT_THROW(stitch({{&a, 1}, {&x, 1}}), validation_error);
}

TEST(EquivalenceKey, RelabelInvariant) {
  std::vector<Gate> a = {make_gate(GateKind::CX, {0, 1}), make_gate(GateKind::T, {1})};
  std::vector<Gate> b = {make_gate(GateKind::CX, {2, 0}), make_gate(GateKind::T, {0})};
  std::vector<Gate> c = {make_gate(GateKind::CX, {0, 1}), make_gate(GateKind::T, {0})};
  EXPECT_EQ(equivalence_key(a, 3), equivalence_key(b, 3));
  EXPECT_NE(equivalence_key(a, 3), equivalence_key(c, 3));
}
