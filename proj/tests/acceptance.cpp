// Acceptance suite: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "ftqre/pipeline.hpp"
#include "ftqre/qft.hpp"
#include "ftqre/scaling_fit.hpp"
#include "oracles.hpp"

using namespace ftqre;

namespace {

struct Outcome {
  bool ok = true;
  std::string why;
  void fail(const std::string& m) {
    if (ok) why = m;
    ok = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string str(double v) { return format_double(v); }

Outcome layout_oracle() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto f = default_factories()[0];
  auto L = compute_layout(1000000, 100, 17, f, 1);
  if (!L || L->l_edge != 41 || L->l_qbus != 6 || L->n_row_qbus != 16 || L->n_col_T_factories != 8 ||
      L->n_T_factories != 104 || L->l_transfer_bus != 475 || L->n_prime != 16)
    o.fail("worked example mismatch");
  std::mt19937_64 rng(1);
  auto table = default_factories();
  for (int i = 0; i < 200; ++i) {
    long long n_phys = 10000 + static_cast<long long>(rng() % 5000000);
    int d = 3 + 2 * static_cast<int>(rng() % 20);
    long long n_log = 1 + static_cast<long long>(rng() % 400);
    long long n = 1 + static_cast<long long>(rng() % 4);
    const auto& fac = table[rng() % table.size()];
    auto got = compute_layout(n_phys, n_log, d, fac, n);
    auto want = oracle::layout(n_phys, n_log, d, double(fac.L_width), double(fac.L_length), n);
    if (got.has_value() != want.has_value()) {
      o.fail("feasibility differs on config " + std::to_string(i));
      continue;
    }
    if (got && (got->l_edge != want->l_edge || got->l_qbus != want->l_qbus || got->n_row_qbus != want->n_row ||
                got->n_col_T_factories != want->n_col || got->n_T_factories != want->nTF ||
                got->l_transfer_bus != want->l_tb || got->n_prime != want->n_prime ||
                got->n_unalloc_logical != want->unalloc))
      o.fail("layout differs on config " + std::to_string(i));
  }
  double s = seconds_since(t0);
  if (s >= 1) o.fail("took " + str(s) + " s");
  return o;
}

bool oracle_passes(const ArchConfig& cfg, const SolverInput& in, const TFactory& f, int d, long long L_eps,
                   bool* exists) {
  for (long long k = 1; k <= in.n_logical; ++k) {
    auto L = oracle::layout(cfg.n_phys, in.n_logical, d, double(f.L_width), double(f.L_length), k);
    if (!L) continue;
    *exists = true;
    double np = double(std::max<long long>(1, L->n_prime)) * (f.name.find("20-to-4") != std::string::npos ? 4 : 1);
    double nT = double(in.n_T), nRz = double(in.n_Rz);
    double Nc = std::ceil(nT / np) + double(L_eps) * std::ceil(nRz / np);
    double Nd = std::ceil((nRz * double(L_eps) + nT) / np);
    return oracle::lhs(d, cfg.p, cfg.kappa, cfg.p_thresh, double(in.n_logical), in.L_prep_total, double(k),
                       double(L->l_tb), Nc, Nd, f.C) < -std::log(1 - cfg.p_algo_fail);
  }
  *exists = false;
  return false;
}

Outcome distance_minimality() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  InequalityTerms w{1, 1, 1, 10, 10, 10, 42.6};
  auto d = minimal_distance([&](int) { return std::optional(w); }, 1e-3, 0.009, 0.016, 0.05);
  if (d.value_or(-1) != 7) o.fail("worked instance gave d=" + std::to_string(d.value_or(-1)));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    ArchConfig cfg;
    cfg.p_algo_fail = 1e-4 + 0.3 * double(rng() % 1000) / 1000;
    SolverInput in{1 + static_cast<long long>(rng() % 500), rng() % 1000000, rng() % 10000,
                   double(1 + rng() % 1000000)};
    SelectionResult s;
    try {
      s = solve_distance_and_factory(cfg, in);
    } catch (const infeasible_error& e) {
      o.fail("instance " + std::to_string(i) + " infeasible: " + e.what());
      continue;
    }
    int want = -1;
    for (int dd = 3; dd <= kMaxDistance && want < 0; dd += 2) {
      bool exists = false;
      if (oracle_passes(cfg, in, s.factory, dd, s.L_eps, &exists)) want = dd;
    }
    if (want != s.d) o.fail("instance " + std::to_string(i) + ": d=" + std::to_string(s.d) + " oracle " +
                            std::to_string(want));
    bool exists = false;
    if (s.d > 3 && oracle_passes(cfg, in, s.factory, s.d - 2, s.L_eps, &exists))
      o.fail("instance " + std::to_string(i) + ": inequality holds at d-2");
  }
  double sec = seconds_since(t0);
  if (sec >= 10) o.fail("took " + str(sec) + " s");
  return o;
}

Outcome verification() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, std::vector<Gate>>> cases = {{"QFT3", generate_qft(3)},
                                                                   {"TOFFOLI3", {make_gate(GateKind::CCX, {0, 1, 2})}}};
  for (const auto& [name, gates] : cases) {
    auto w = compile_widget(transpile(gates, 3), 3);
    double worst = 1;
    for (int s = 0; s < 100; ++s) worst = std::min(worst, verify_unitarity({&w}, invert(gates), s));
    if (worst < 1 - 1e-9) o.fail(name + " fidelity " + str(worst));
  }
  double sec = seconds_since(t0);
  if (sec >= 30) o.fail("took " + str(sec) + " s");
  return o;
}

Outcome power() {
  Outcome o;
  ThermalConfig t;
  std::vector<std::pair<long long, std::string>> rows = {{2, "840W"},     {4, "1.68kW"},  {6, "2.52kW"},
                                                         {20, "8.4kW"},   {42, "17.6kW"}, {52, "21.8kW"},
                                                         {110, "46.2kW"}, {132, "55.4kW"}};
  for (auto [m, want] : rows) {
    auto p = machine_dissipation(t, 1e6, m);
    std::string got = format_si(p.P_4K, "W");
    if (got != want) o.fail(std::to_string(m) + " modules: " + got + " != " + want);
    std::string mk = format_si(p.P_20mK, "W"), mk_want = format_si(84e-9 * double(m), "W");
    if (mk != mk_want) o.fail(std::to_string(m) + " modules 20mK: " + mk + " != " + mk_want);
  }
  return o;
}

std::vector<ScalingSample> synthetic(int n_p, std::mt19937_64* rng, double sigma) {
  std::vector<ScalingSample> s;
  std::normal_distribution<double> noise(0, sigma);
  for (int d : {3, 5, 7, 9})
    for (int i = 0; i < n_p; ++i) {
      double p = 1e-3 * std::pow(10.0, i / double(n_p));
      double pc = 0.009 * std::pow(p / 0.016, (d + 1) / 2.0);
      if (rng) pc *= std::exp(noise(*rng));
      s.push_back({p, d, pc, 1});
    }
  return s;
}

Outcome scaling() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto f = fit_scaling_law(synthetic(10, nullptr, 0));
  if (std::fabs(f.kappa / 0.009 - 1) >= 1e-9 || std::fabs(f.p_thresh / 0.016 - 1) >= 1e-9)
    o.fail("noiseless fit off: " + str(f.kappa) + ", " + str(f.p_thresh));
  std::mt19937_64 rng(5);
  std::vector<double> ek, et;
  for (int trial = 0; trial < 100; ++trial) {
    auto g = fit_scaling_law(synthetic(20, &rng, 0.01));
    ek.push_back(std::fabs(g.kappa / 0.009 - 1));
    et.push_back(std::fabs(g.p_thresh / 0.016 - 1));
  }
  std::sort(ek.begin(), ek.end());
  std::sort(et.begin(), et.end());
  double mk = (ek[49] + ek[50]) / 2, mt = (et[49] + et[50]) / 2;
  if (mk >= 0.02 || mt >= 0.02) o.fail("noisy median error kappa " + str(mk) + " p_thresh " + str(mt));
  double sec = seconds_since(t0);
  if (sec >= 5) o.fail("took " + str(sec) + " s");
  return o;
}

Outcome synthesis() {
  Outcome o;
  long long a = gate_synthesis_length(1e-10, 0.57, 8.83);
  long long b = gate_synthesis_length(std::ldexp(1.0, -10), 3.0, 0.0);
  if (a != 28) o.fail("mixed-fallback gave " + std::to_string(a));
  if (b != 30) o.fail("gridsynth gave " + std::to_string(b));
  return o;
}

Outcome dominance() {
  Outcome o;
  auto table = default_factories();
  const double pl = 1e-9;
  std::optional<size_t> want;
  for (size_t i = 0; i < table.size() && !want; ++i)
    if (table[i].p_out < pl) want = i;
  auto got = select_factory_by_dominance(table, pl);
  if (got != want) o.fail("row scan picked a different factory");
  for (size_t i = 0; got && i < *got; ++i)
    if (table[i].p_out < pl) o.fail("an earlier row already dominates");
  if (got && !(table[*got].p_out < pl)) o.fail("selected row does not dominate");
  return o;
}

Outcome stitching() {
  Outcome o;
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + int(rng() % 2);
    int k = 1 + int(rng() % 4);
    std::vector<CompiledWidget> ws;
    for (int w = 0; w < k; ++w) {
      std::vector<Gate> g;
      for (int i = 0; i < 6; ++i) {
        int q = int(rng() % n);
        switch (rng() % 4) {
          case 0: g.push_back(make_gate(GateKind::T, {q})); break;
          case 1: g.push_back(make_gate(GateKind::H, {q})); break;
          case 2: g.push_back(make_gate(GateKind::CX, {q, (q + 1) % n})); break;
          default: g.push_back(make_gate(GateKind::Rz, {q}, 0.1 + double(rng() % 100) / 37)); break;
        }
      }
      ws.push_back(compile_widget(transpile(g, n), n));
    }
    int len = 1 + int(rng() % 12);
    std::vector<int> seq;
    for (int i = 0; i < len; ++i) seq.push_back(int(rng() % k));
    std::vector<std::uint64_t> mult(k, 0);
    std::uint64_t nodes = 0;
    int nlog = 0;
    for (int s : seq) {
      mult[s]++;
      nodes += static_cast<std::uint64_t>(ws[s].n_nodes());
      nlog = std::max(nlog, ws[s].n_logical);
    }
    nodes += static_cast<std::uint64_t>(len - 1) * static_cast<std::uint64_t>(n);
    std::vector<WidgetStatsRef> refs;
    for (int w = 0; w < k; ++w) refs.push_back({&ws[w], mult[w]});
    auto st = stitch(refs);
    if (st.n_nodes_total != nodes) o.fail("trial " + std::to_string(trial) + ": node total mismatch");
    if (st.n_logical != nlog) o.fail("trial " + std::to_string(trial) + ": n_logical mismatch");
  }
  return o;
}

Outcome pipe_sweep() {
  Outcome o;
  auto q = generate_qft(12);
  std::vector<Gate> a(q.begin(), q.begin() + static_cast<long>(q.size() / 2)), b(q.begin() + static_cast<long>(q.size() / 2), q.end());
  auto c = from_sequence(12, {"A", "B"}, {a, b}, {0, 1, 0, 1, 0, 1});
  ArchConfig cfg;
  cfg.n_phys = 150000;
  auto compiled = compile_all(c, cfg.fanout, std::nullopt, 1);
  double prev = 0, at_max = -1;
  long long max_io = 0;
  for (long long p = 1; p <= 64; ++p) {
    cfg.n_pipes = p;
    auto r = estimate(c, cfg, compiled);
    double h = r.timing.t_hardware_total;
    max_io = r.timing.max_cross_io;
    if (max_io == 0) {
      o.fail("instance has no cross-module I/O");
      return o;
    }
    if (p > 1 && h > prev) o.fail("hardware time rises at pipes=" + std::to_string(p));
    if (p == max_io) at_max = h;
    if (p > max_io && h != at_max)
      o.fail("hardware time changes beyond max cross I/O (" + std::to_string(max_io) + ") at pipes=" +
             std::to_string(p) + ": " + str(h) + " vs " + str(at_max));
    prev = h;
  }
  if (max_io > 64) o.fail("max cross I/O beyond swept range");
  return o;
}

Outcome transpiler() {
  Outcome o;
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Gate> g;
    for (int i = 0; i < 8; ++i) {
      auto kind = static_cast<GateKind>(rng() % 14);
      std::vector<int> qs = {0, 1, 2};
      std::shuffle(qs.begin(), qs.end(), rng);
      qs.resize(arity(kind));
      double ang = std::uniform_real_distribution<double>(-7, 7)(rng);
      if (rng() % 4 == 0) ang = kPi / 4 * double(int(rng() % 17) - 8);
      g.push_back(make_gate(kind, qs, has_angle(kind) ? ang : 0.0));
    }
    auto t = transpile(g, 3);
    double dist = oracle::distance_up_to_phase(oracle::circuit_matrix(t.gates, 3), oracle::circuit_matrix(g, 3));
    if (dist > 1e-10) o.fail("trial " + std::to_string(trial) + ": distance " + str(dist));
  }
  return o;
}

Outcome end_to_end() {
  Outcome o;
  const char* dir = std::getenv("FTQRE_SAMPLES");
  std::string path = std::string(dir ? dir : "samples") + "/qft4.json";
  auto t0 = std::chrono::steady_clock::now();
  auto c = load_circuit(path);
  ArchConfig cfg;
  auto r = estimate(c, cfg, compile_all(c, cfg.fanout, std::nullopt, 1));
  ResourceReport rep;
  try {
    rep = assemble_report(r, {config_hash(cfg), circuit_hash(c), kVersion});
  } catch (const identity_error& e) {
    o.fail(e.what());
    return o;
  }
  double sec = seconds_since(t0);
  if (rep.params.size() != 49) o.fail("report has " + std::to_string(rep.params.size()) + " rows");
  if (rep.value(15) != 4) o.fail("n_input is not 4");
  if (sec >= 10) o.fail("took " + str(sec) + " s");
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 layout oracle equivalence", layout_oracle},
      {"2 distance-solver minimality", distance_minimality},
      {"3 verification protocol", verification},
      {"4 power reproduction", power},
      {"5 scaling fit", scaling},
      {"6 synthesis length", synthesis},
      {"7 factory dominance", dominance},
      {"8 stitching identity", stitching},
      {"9 pipe-sweep monotonicity", pipe_sweep},
      {"10 transpiler unitarity", transpiler},
      {"11 end-to-end smoke", end_to_end},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s  criterion %s%s%s\n", o.ok ? "PASS" : "FAIL", name.c_str(), o.ok ? "" : ": ",
                o.ok ? "" : o.why.c_str());
    failures += !o.ok;
  }
  return failures == 0 ? 0 : 1;
}
