#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ftqre/architecture.hpp"
#include "ftqre/config.hpp"
#include "ftqre/graph_compiler.hpp"
#include "ftqre/prep_scheduler.hpp"

namespace ftqre {

inline double logical_error_per_cycle(double p, int d, double kappa, double p_thresh) {
  return kappa * std::pow(p / p_thresh, (d + 1) / 2.0);
}

inline double logical_error_per_tock(double p_C, int d) { return -std::expm1(d * std::log1p(-p_C)); }

inline double logical_error_per_tock(const ArchConfig& cfg, int d) {
  return logical_error_per_tock(logical_error_per_cycle(cfg.p, d, cfg.kappa, cfg.p_thresh), d);
}

inline long long gate_synthesis_length(double eps, double c0, double c1) {
  if (!(eps > 0)) throw validation_error("gate_synthesis_length: epsilon must be positive");
  return static_cast<long long>(std::ceil(c0 * std::log2(1.0 / eps) + c1));
}

struct SequentialCounts {
  std::uint64_t N_tot_T = 0;
  std::uint64_t N_seq_consump = 0;
  std::uint64_t N_seq_distill = 0;
  bool operator==(const SequentialCounts&) const = default;
};

inline SequentialCounts sequential_counts(std::uint64_t n_T, std::uint64_t n_Rz, long long L_eps,
                                          long long n_prime_eff) {
  if (n_prime_eff < 1) throw validation_error("sequential_counts: n' must be >= 1");
  auto L = static_cast<std::uint64_t>(L_eps);
  auto np = static_cast<std::uint64_t>(n_prime_eff);
  SequentialCounts c;
  c.N_tot_T = checked_add(checked_mul(n_Rz, L), n_T);
  c.N_seq_consump = checked_add(ceil_div(n_T, np), checked_mul(L, ceil_div(n_Rz, np)));
  c.N_seq_distill = ceil_div(c.N_tot_T, np);
  return c;
}

// Quantities entering the space-time inequality at one distance.
struct InequalityTerms {
  double n_logical = 0;
  double L_prep = 0;
  double n_per_leg = 0;
  double l_transfer_bus = 0;
  double N_seq_consump = 0;
  double N_seq_distill = 0;
  double C = 0;
};

inline double inequality_lhs(const InequalityTerms& x, int d, double p, double kappa, double p_thresh) {
  long double vol = 2.0L * x.n_logical * x.L_prep * d +
                    (2.0L * x.n_logical + static_cast<long double>(x.n_per_leg) * x.l_transfer_bus) *
                        (static_cast<long double>(x.N_seq_consump) * d + static_cast<long double>(x.N_seq_distill) * x.C);
  return static_cast<double>(kappa * d * std::pow(static_cast<long double>(p / p_thresh), (d + 1) / 2.0L) * vol);
}

inline double inequality_rhs(double p_algo_fail) { return -std::log1p(-p_algo_fail); }

inline constexpr int kMaxDistance = 199;

// Smallest odd d >= 3 whose terms exist and satisfy the inequality.
template <typename TermsAt>
std::optional<int> minimal_distance(TermsAt&& terms_at, double p, double kappa, double p_thresh, double p_algo_fail,
                                    int d_cap = kMaxDistance) {
  double rhs = inequality_rhs(p_algo_fail);
  for (int d = 3; d <= d_cap; d += 2) {
    std::optional<InequalityTerms> x = terms_at(d);
    if (x && inequality_lhs(*x, d, p, kappa, p_thresh) < rhs) return d;
  }
  return std::nullopt;
}

struct SelectionResult {
  int d = 0;
  std::optional<double> eps;
  long long L_eps = 0;
  size_t factory_index = 0;
  TFactory factory;
  double p_C = 0;
  double p_logical = 0;
  double J1 = 0;
  ModuleLayout layout;
  SequentialCounts counts;
};

// First row whose output error beats the per-tock logical error.
inline std::optional<size_t> select_factory_by_dominance(const std::vector<TFactory>& table, double p_logical) {
  for (size_t i = 0; i < table.size(); ++i)
    if (table[i].p_out < p_logical) return i;
  return std::nullopt;
}

struct SolverInput {
  long long n_logical = 0;
  std::uint64_t n_T = 0;
  std::uint64_t n_Rz = 0;
  double L_prep_total = 0;
};

inline SelectionResult solve_distance_and_factory(const ArchConfig& cfg, const SolverInput& in) {
  const bool has_nonclifford = in.n_T + in.n_Rz > 0;
  std::string why;
  for (size_t fi = 0; fi < cfg.factories.size(); ++fi) {
    const TFactory& f = cfg.factories[fi];
    auto terms_for = [&](long long L_eps, std::optional<ModuleLayout>* keep, SequentialCounts* keep_counts) {
      return [&, L_eps, keep, keep_counts](int d) -> std::optional<InequalityTerms> {
        auto L = choose_modules_per_leg(cfg.n_phys, in.n_logical, d, f);
        if (!L) return std::nullopt;
        auto c = sequential_counts(in.n_T, in.n_Rz, L_eps, L->n_prime_eff);
        if (keep) *keep = L;
        if (keep_counts) *keep_counts = c;
        return InequalityTerms{static_cast<double>(in.n_logical),
                               in.L_prep_total,
                               static_cast<double>(L->n_per_leg),
                               static_cast<double>(L->l_transfer_bus),
                               static_cast<double>(c.N_seq_consump),
                               static_cast<double>(c.N_seq_distill),
                               f.C};
      };
    };

    std::optional<double> eps;
    long long L_eps = 0;
    std::optional<int> d;
    if (in.n_Rz > 0) eps = logical_error_per_tock(cfg, 3);
    bool converged = false;
    for (int iter = 0; iter < 50; ++iter) {
      L_eps = eps ? gate_synthesis_length(*eps, cfg.c0, cfg.c1) : 0;
      d = minimal_distance(terms_for(L_eps, nullptr, nullptr), cfg.p, cfg.kappa, cfg.p_thresh, cfg.p_algo_fail);
      if (!d) break;
      double pl = logical_error_per_tock(cfg, *d);
      if (!eps || *eps < pl) {
        converged = true;
        break;
      }
      eps = pl / 2;
    }
    if (!d) {
      why = "no odd d <= " + std::to_string(kMaxDistance) + " satisfies the space-time inequality";
      continue;
    }
    if (!converged) {
      why = "synthesis error fixed point did not converge in 50 iterations";
      continue;
    }
    SelectionResult r;
    r.d = *d;
    r.eps = eps;
    r.L_eps = L_eps;
    r.factory_index = fi;
    r.factory = f;
    r.p_C = logical_error_per_cycle(cfg.p, r.d, cfg.kappa, cfg.p_thresh);
    r.p_logical = logical_error_per_tock(r.p_C, r.d);
    r.J1 = std::log1p(-cfg.p_algo_fail);
    if (has_nonclifford && !(f.p_out < r.p_logical)) {
      why = "no factory output error is below p_logical";
      continue;
    }
    std::optional<ModuleLayout> L;
    terms_for(L_eps, &L, &r.counts)(r.d);
    r.layout = *L;
    return r;
  }
  throw infeasible_error("estimation failed: " + why);
}

// Per-widget data the timing model needs.
struct WidgetProfile {
  long long L_prep = 0;
  std::vector<std::vector<int>> step_dmax;  // d_max of each tuple per prep sub-step
  std::vector<int> t_slots, rz_slots;       // register slots of measured nodes by basis
  std::vector<int> input_slots, output_slots;
};

inline WidgetProfile profile_of(const CompiledWidget& w, const PrepSchedule& prep) {
  WidgetProfile p;
  p.L_prep = prep.length();
  for (const auto& step : prep.steps) {
    std::vector<int> dm;
    for (const auto& t : step) dm.push_back(t.d_max);
    p.step_dmax.push_back(std::move(dm));
  }
  for (const auto& m : w.meas) (m.kind == BasisKind::T ? p.t_slots : p.rz_slots).push_back(w.register_slot[m.node]);
  for (int q = 0; q < w.n_input; ++q) {
    p.input_slots.push_back(w.register_slot[w.graph.inputs[q]]);
    p.output_slots.push_back(w.register_slot[w.graph.outputs[q]]);
  }
  return p;
}

struct TimingBreakdown {
  double t_consump_total = 0;
  double t_distill_delay_total = 0;
  double t_prep_delay_total = 0;
  double t_handover_inter_total = 0;
  double t_decode_delay_total = 0;
  double t_hardware_total = 0;
  double t_FT_total = 0;
  double cores = 0;
  long long max_cross_io = 0;  // largest per-stitch handover crossing count
};

struct TimingInput {
  std::vector<WidgetProfile> widgets;
  int first = 0;
  std::map<std::pair<int, int>, std::uint64_t> stitches;
};

struct WidgetTiming {
  double t_prep = 0;
  double distill = 0;
  double consump_intra = 0;
};

inline WidgetTiming widget_timing(const ArchConfig& cfg, const SelectionResult& sel, const WidgetProfile& w) {
  const int d = sel.d;
  const ModuleLayout& L = sel.layout;
  const double t = cfg.t, C = sel.factory.C;
  const long long nTF = L.n_T_factories;
  double n_intra = 0, n_cross = 0;
  if (L.n_per_leg <= 1) {
    n_intra = static_cast<double>(w.L_prep);
  } else {
    for (const auto& step : w.step_dmax) {
      long long c = 0;
      for (int dm : step) c += dm / L.memory_per_module;
      // A sub-step with no module-crossing tuple runs as one intra-module step.
      n_intra += c == 0 ? 1.0 : static_cast<double>(w.L_prep / c);
      n_cross += static_cast<double>(ceil_div(c, cfg.n_pipes));
    }
  }
  WidgetTiming r;
  r.t_prep = 8.0 * d * (n_intra * t + n_cross * cfg.t_inter);
  // T states banked during preparation, limited by transfer bus storage.
  long long banked = std::min(static_cast<long long>(std::floor(nTF * r.t_prep / (8 * t * C))), L.l_transfer_bus);
  std::vector<long long> per_T(L.n_per_leg, 0), per_Rz(L.n_per_leg, 0);
  for (int s : w.t_slots) per_T[std::min<long long>(s / L.memory_per_module, L.n_per_leg - 1)]++;
  for (int s : w.rz_slots) per_Rz[std::min<long long>(s / L.memory_per_module, L.n_per_leg - 1)]++;
  long long maxT = *std::max_element(per_T.begin(), per_T.end());
  long long maxRz = *std::max_element(per_Rz.begin(), per_Rz.end());
  long long seq = maxT + sel.L_eps * maxRz;
  r.distill = seq > banked ? 8 * t * C * static_cast<double>(ceil_div(seq - banked, nTF)) : 0.0;
  r.consump_intra = 8 * t * d * static_cast<double>(ceil_div(maxT, nTF) + sel.L_eps * ceil_div(maxRz, nTF));
  return r;
}

inline long long cross_io(const ModuleLayout& L, const WidgetProfile& a, const WidgetProfile& b) {
  if (L.n_per_leg <= 1) return 0;
  long long n = 0;
  for (size_t q = 0; q < a.output_slots.size(); ++q) {
    long long ma = a.output_slots[q] / L.memory_per_module, mb = b.input_slots[q] / L.memory_per_module;
    n += std::llabs(ma - mb) + 1;
  }
  return n;
}

inline TimingBreakdown compute_timing(const ArchConfig& cfg, const SelectionResult& sel, const TimingInput& in) {
  const int d = sel.d;
  const double t = cfg.t, C = sel.factory.C;
  const double tock = 8 * t * d;
  std::vector<WidgetTiming> wt;
  for (const auto& w : in.widgets) wt.push_back(widget_timing(cfg, sel, w));

  TimingBreakdown r;
  double crossings = 0;
  for (const auto& [ab, count] : in.stitches) {
    auto [a, b] = ab;
    double n = static_cast<double>(count);
    r.t_distill_delay_total += n * wt[a].distill;
    r.t_prep_delay_total += n * std::max(0.0, wt[b].t_prep - wt[a].consump_intra - wt[a].distill);
    long long io = cross_io(sel.layout, in.widgets[a], in.widgets[b]);
    r.max_cross_io = std::max(r.max_cross_io, io);
    crossings += n * static_cast<double>(ceil_div(io, cfg.n_pipes));
  }
  const double L0 = static_cast<double>(in.widgets.at(in.first).L_prep);
  const double Nc = static_cast<double>(sel.counts.N_seq_consump);
  r.t_consump_total = tock * (L0 + Nc) + r.t_distill_delay_total + r.t_prep_delay_total;
  r.t_handover_inter_total = 8 * cfg.t_inter * d * crossings;

  const double dec_tock = d * cfg.t_decoder;
  const double distill_tock = 8 * C * t;
  r.t_decode_delay_total = (L0 + Nc + ceil_ratio(r.t_prep_delay_total, tock)) * std::max(0.0, dec_tock - tock) +
                           ceil_ratio(r.t_distill_delay_total, distill_tock) * std::max(0.0, dec_tock - distill_tock);
  r.cores = ceil_ratio(cfg.t_decoder, 8 * t);
  r.t_hardware_total = r.t_consump_total + r.t_handover_inter_total + r.t_decode_delay_total;
  r.t_FT_total = static_cast<double>(cfg.n_algo_reps) * r.t_hardware_total;
  return r;
}

}  // namespace ftqre
