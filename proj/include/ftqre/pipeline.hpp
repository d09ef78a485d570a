#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ftqre/cache.hpp"
#include "ftqre/config_yaml.hpp"
#include "ftqre/estimator.hpp"
#include "ftqre/graph_compiler.hpp"
#include "ftqre/prep_scheduler.hpp"
#include "ftqre/report.hpp"
#include "ftqre/transpile.hpp"
#include "ftqre/widget_file.hpp"

namespace ftqre {

struct CompiledEntry {
  TranspiledWidget transpiled;
  CompiledWidget widget;
  PrepSchedule prep;
};

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first error.
template <typename Fn>
void parallel_for(size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<size_t>(threads, n));
  if (threads <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

inline std::string widget_cache_key(const std::vector<Gate>& gates, int n_input, int fanout) {
  return hex64(fnv1a(emit_qasm(gates, n_input) + "|fanout=" + std::to_string(fanout) + "|v=" + kVersion));
}

inline std::vector<CompiledEntry> compile_all(const WidgetizedCircuit& c, int fanout,
                                              const std::optional<WidgetCache>& cache, unsigned threads = 0) {
  std::vector<CompiledEntry> out(c.n_distinct());
  parallel_for(out.size(), threads, [&](size_t i) {
    CompiledEntry& e = out[i];
    try {
      e.transpiled = transpile(c.gates[i], c.n_input);
    } catch (const validation_error& ex) {
      throw validation_error("transpile '" + c.ids[i] + "': " + ex.what());
    }
    std::string key = widget_cache_key(c.gates[i], c.n_input, fanout);
    if (cache) {
      if (auto hit = cache->load(key)) {
        e.widget = std::move(hit->widget);
        e.prep = std::move(hit->prep);
        return;
      }
    }
    e.widget = compile_widget(e.transpiled, c.n_input);
    e.widget.key = key;
    e.prep = schedule_preparation(e.widget.graph, fanout);
    if (cache) cache->store(key, {e.widget, e.prep});
  });
  return out;
}

inline EstimateResult estimate(const WidgetizedCircuit& c, const ArchConfig& cfg,
                               const std::vector<CompiledEntry>& compiled) {
  cfg.validate();
  EstimateResult r;
  r.cfg = cfg;
  std::vector<WidgetStatsRef> refs;
  TimingInput ti;
  for (size_t i = 0; i < compiled.size(); ++i) {
    const auto& e = compiled[i];
    refs.push_back({&e.widget, c.multiplicity[i]});
    r.n_Clifford_init = checked_add(
        r.n_Clifford_init, checked_mul(c.multiplicity[i], static_cast<std::uint64_t>(e.transpiled.n_Clifford_init)));
    r.L_prep_total = checked_add(r.L_prep_total, checked_mul(c.multiplicity[i], static_cast<std::uint64_t>(e.prep.length())));
    ti.widgets.push_back(profile_of(e.widget, e.prep));
  }
  ti.first = c.first;
  ti.stitches = c.stitches;
  r.est = stitch(refs);
  SolverInput in{r.est.n_logical, r.est.n_T_init, r.est.n_Rz_init, static_cast<double>(r.L_prep_total)};
  r.sel = solve_distance_and_factory(cfg, in);
  r.timing = compute_timing(cfg, r.sel, ti);
  return r;
}

inline ResourceReport run_estimate(const WidgetizedCircuit& c, const ArchConfig& cfg,
                                   const std::optional<WidgetCache>& cache = std::nullopt, unsigned threads = 0) {
  auto compiled = compile_all(c, cfg.fanout, cache, threads);
  return assemble_report(estimate(c, cfg, compiled), {config_hash(cfg), circuit_hash(c), kVersion});
}

struct SweepRow {
  std::string value;
  std::optional<ResourceReport> report;
  std::string error;
};

inline std::vector<SweepRow> run_sweep(const WidgetizedCircuit& c, const ArchConfig& base, const std::string& key,
                                       const std::vector<std::string>& values,
                                       const std::optional<WidgetCache>& cache = std::nullopt, unsigned threads = 0) {
  if (values.empty()) throw validation_error("sweep: no values");
  std::vector<ArchConfig> cfgs;
  for (const auto& v : values) cfgs.push_back(with_override(base, key, v));
  std::optional<std::vector<CompiledEntry>> shared;
  if (key != "architecture.max_fanout") shared = compile_all(c, base.fanout, cache, threads);
  std::vector<SweepRow> rows(values.size());
  parallel_for(values.size(), threads, [&](size_t i) {
    rows[i].value = values[i];
    try {
      auto compiled = shared ? *shared : compile_all(c, cfgs[i].fanout, cache, 1);
      rows[i].report = assemble_report(estimate(c, cfgs[i], compiled), {config_hash(cfgs[i]), circuit_hash(c), kVersion});
    } catch (const infeasible_error& e) {
      rows[i].error = e.what();
    }
  });
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::string& key, const std::vector<SweepRow>& rows) {
  os << key << ",d,t_factories_per_module,modules,physical_qubits,t_hardware_s,t_ft_s,energy_j,normalized_runtime,error\n";
  double t0 = rows.front().report ? rows.front().report->value(47) : std::nan("");
  for (const auto& r : rows) {
    os << r.value << ',';
    if (r.report) {
      const auto& p = *r.report;
      os << p.value(1) << ',' << p.value(3) << ',' << p.value(12) << ',' << format_double(p.value(30)) << ','
         << format_double(p.value(47)) << ',' << format_double(p.value(48)) << ',' << format_double(p.value(49))
         << ',' << format_double(p.value(47) / t0) << ",\n";
    } else {
      os << ",,,,,,,," << '"' << r.error << '"' << '\n';
    }
  }
}

}  // namespace ftqre
