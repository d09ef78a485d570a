#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ftqre/cache.hpp"
#include "ftqre/config_yaml.hpp"
#include "ftqre/pipeline.hpp"
#include "ftqre/qft.hpp"
#include "ftqre/report.hpp"
#include "ftqre/scaling_fit.hpp"
#include "ftqre/widget_file.hpp"
#include "ftqre/widgetizer.hpp"

namespace {

using namespace ftqre;

ArchConfig config_or_default(const std::string& path) {
  std::vector<std::string> warnings;
  ArchConfig cfg = path.empty() ? ArchConfig{} : load_config(path, warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  cfg.validate();
  return cfg;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f || !(f << text)) throw io_error("cannot write " + p.string());
}

std::optional<WidgetCache> cache_or_none(bool no_cache) { return no_cache ? std::nullopt : WidgetCache::from_env(); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Fault-tolerant resource estimator for modular surface-code machines"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string circuit, config, out, in;
  unsigned threads = 0;
  bool no_cache = false;

  auto* est = app.add_subcommand("estimate", "Estimate resources for a circuit");
  est->add_option("--circuit", circuit, "Widget JSON or .qasm file")->required();
  est->add_option("--config", config, "YAML configuration");
  est->add_option("--out", out, "Directory for report.csv");
  est->add_option("--threads", threads, "Worker threads (0 = all cores)");
  est->add_flag("--no-cache", no_cache, "Ignore FTQRE_CACHE_DIR");

  int max_q = 400, slice = 16;
  std::uint64_t max_g = 100000;
  auto* wid = app.add_subcommand("widgetize", "Split a nested circuit into widgets");
  wid->add_option("--in", in, "Nested circuit JSON")->required();
  wid->add_option("--max-qubits", max_q, "Split when active qubits >= N");
  wid->add_option("--max-gates", max_g, "Split when gates > M");
  wid->add_option("--slice", slice, "Moments per slice");
  wid->add_option("--out", out, "Output widget JSON (stdout if absent)");

  auto* cmp = app.add_subcommand("compile", "Compile widgets to graph states and schedules");
  cmp->add_option("--circuit", circuit, "Widget JSON or .qasm file")->required();
  cmp->add_option("--config", config, "YAML configuration (for max_fanout)");
  cmp->add_option("--out", out, "Output JSON (stdout if absent)");
  cmp->add_option("--threads", threads, "Worker threads");
  cmp->add_flag("--no-cache", no_cache, "Ignore FTQRE_CACHE_DIR");

  int seeds = 100;
  auto* ver = app.add_subcommand("verify", "Simulate compiled widgets against the inverse circuit");
  ver->add_option("--circuit", circuit, "Widget JSON with an explicit sequence, or .qasm")->required();
  ver->add_option("--seeds", seeds, "Random outcome seeds");

  auto* fit = app.add_subcommand("fit-scaling", "Fit kappa and p_thresh from p,d,ler samples");
  fit->add_option("--in", in, "CSV with header p,d,ler[,weight]")->required();

  std::string key, values;
  auto* swp = app.add_subcommand("sweep", "Run estimates over a list of values for one config key");
  swp->add_option("--circuit", circuit, "Widget JSON or .qasm file")->required();
  swp->add_option("--config", config, "YAML configuration");
  swp->add_option("--key", key, "Config key, e.g. architecture.n_inter_pipes")->required();
  swp->add_option("--values", values, "Comma-separated values")->required();
  swp->add_option("--out", out, "Output CSV (stdout if absent)");
  swp->add_option("--threads", threads, "Worker threads");
  swp->add_flag("--no-cache", no_cache, "Ignore FTQRE_CACHE_DIR");

  int n = 4;
  auto* qft = app.add_subcommand("gen-qft", "Write a QFT circuit as a widget JSON file");
  qft->add_option("--n", n, "Qubits (1..32)");
  qft->add_option("--out", out, "Output file (stdout if absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto emit = [&](const std::string& text) {
    if (out.empty()) std::cout << text;
    else write_file(out, text);
  };

  if (*est) {
    ArchConfig cfg = config_or_default(config);
    WidgetizedCircuit c = load_circuit(circuit);
    ResourceReport r = run_estimate(c, cfg, cache_or_none(no_cache), threads);
    print_table(std::cout, r);
    if (!out.empty()) {
      std::ostringstream csv;
      write_csv(csv, r);
      write_file(std::filesystem::path(out) / "report.csv", csv.str());
    }
  } else if (*wid) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_text_file(in));
    } catch (const nlohmann::json::parse_error& e) {
      throw validation_error(std::string("nested circuit: ") + e.what());
    }
    SplitCriterion crit{max_q, max_g, slice};
    auto g = build_dependency_graph(parse_nested_json(j), crit);
    WidgetizedCircuit c = enumerate_widgets_and_stitches(g);
    std::cerr << "widgets: " << c.n_widgets() << ", distinct: " << c.n_distinct() << "\n";
    emit(widget_json(c).dump(2) + "\n");
  } else if (*cmp) {
    ArchConfig cfg = config_or_default(config);
    WidgetizedCircuit c = load_circuit(circuit);
    auto compiled = compile_all(c, cfg.fanout, cache_or_none(no_cache), threads);
    nlohmann::json j = nlohmann::json::array();
    for (size_t i = 0; i < compiled.size(); ++i) {
      const auto& e = compiled[i];
      j.push_back({{"id", c.ids[i]},
                   {"multiplicity", c.multiplicity[i]},
                   {"n_nodes", e.widget.n_nodes()},
                   {"n_edges", e.widget.graph.edges.size()},
                   {"n_measured", e.widget.n_measured()},
                   {"n_T", e.widget.n_T},
                   {"n_Rz", e.widget.n_Rz},
                   {"n_logical", e.widget.n_logical},
                   {"consumption_steps", e.widget.consump.size()},
                   {"preparation_steps", e.prep.length()},
                   {"graph", widget_to_json(e.widget)},
                   {"prep", schedule_to_json(e.prep)}});
    }
    emit(j.dump(2) + "\n");
  } else if (*ver) {
    WidgetizedCircuit c = load_circuit(circuit);
    if (c.sequence.empty()) throw validation_error("verify: circuit needs an explicit widget sequence");
    auto compiled = compile_all(c, kDefaultFanout, std::nullopt, 1);
    std::vector<const CompiledWidget*> seq;
    std::vector<Gate> all;
    for (int s : c.sequence) {
      seq.push_back(&compiled[s].widget);
      all.insert(all.end(), c.gates[s].begin(), c.gates[s].end());
    }
    auto inverse = invert(all);
    double worst = 1.0;
    for (int s = 0; s < seeds; ++s) worst = std::min(worst, verify_unitarity(seq, inverse, static_cast<std::uint64_t>(s)));
    std::printf("min fidelity over %d seeds: %.15f\n", seeds, worst);
    if (!(worst >= 1 - 1e-9)) {
      std::cerr << "verification failed\n";
      return 1;
    }
  } else if (*fit) {
    std::ifstream f(in);
    if (!f) throw io_error("cannot read " + in);
    auto r = fit_scaling_law(read_scaling_csv(f));
    std::printf("kappa=%.10g p_thresh=%.10g rms_log_residual=%.6g\n", r.kappa, r.p_thresh, r.residual);
  } else if (*swp) {
    ArchConfig cfg = config_or_default(config);
    WidgetizedCircuit c = load_circuit(circuit);
    auto rows = run_sweep(c, cfg, key, split_list(values), cache_or_none(no_cache), threads);
    std::ostringstream csv;
    write_sweep_csv(csv, key, rows);
    emit(csv.str());
  } else if (*qft) {
    auto c = single_widget(generate_qft(n), n, "qft" + std::to_string(n));
    emit(widget_json(c).dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ftqre::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ftqre::infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const ftqre::io_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
