#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftqre/gate.hpp"
#include "ftqre/graph_compiler.hpp"
#include "ftqre/widget_file.hpp"

namespace ftqre {

// Nested circuit: named blocks whose bodies mix gates and repeated block calls.
struct NestedItem {
  std::optional<Gate> gate;
  std::string block;
  std::uint64_t repeat = 1;
};

struct NestedBlock {
  std::string name;
  std::vector<NestedItem> body;
};

struct NestedCircuit {
  int n_qubits = 0;
  std::string root;
  std::map<std::string, NestedBlock> blocks;
};

struct SplitCriterion {
  int max_active_qubits = 400;
  std::uint64_t max_gates = 100000;
  int slice_moments = 16;

  void validate() const {
    if (max_active_qubits < 1 || max_gates < 1 || slice_moments < 1)
      throw validation_error("split criterion thresholds must be >= 1");
  }
  bool violated(int active, std::uint64_t gates) const { return active >= max_active_qubits || gates > max_gates; }
};

struct SubcircuitNode {
  int id = 0;
  std::string name;
  bool leaf = false;
  std::vector<Gate> gates;                                 // leaf payload
  std::vector<std::pair<int, std::uint64_t>> children;     // (node id, repeat), execution order
  int active_qubits = 0;
  std::uint64_t gate_count = 0;
  std::string key;
  int widget = -1;  // distinct widget index for leaves
};

struct DependencyGraph {
  int n_qubits = 0;
  int root = 0;
  std::vector<SubcircuitNode> nodes;
  std::vector<int> widget_nodes;  // representative leaf per distinct widget
};

inline NestedCircuit parse_nested_json(const nlohmann::json& j) {
  try {
    if (j.contains("format") && j.at("format") != 1) throw validation_error("nested circuit: unsupported format");
    NestedCircuit c;
    c.n_qubits = j.at("n_qubits").get<int>();
    if (c.n_qubits < 1) throw validation_error("nested circuit: n_qubits must be >= 1");
    c.root = j.at("root").get<std::string>();
    for (const auto& b : j.at("blocks")) {
      NestedBlock blk;
      blk.name = b.at("name").get<std::string>();
      for (const auto& it : b.at("body")) {
        NestedItem item;
        if (it.contains("gate")) {
          GateKind k;
          std::string name = it.at("gate").get<std::string>();
          if (!gate_from_name(name, k)) throw validation_error("nested circuit: unsupported gate '" + name + "'");
          Gate g = make_gate(k, it.at("qubits").get<std::vector<int>>(), it.value("angle", 0.0));
          validate_gate(g, c.n_qubits);
          item.gate = g;
        } else {
          item.block = it.at("block").get<std::string>();
          item.repeat = it.value("repeat", std::uint64_t{1});
          if (item.repeat < 1) throw validation_error("nested circuit: repeat must be >= 1");
        }
        blk.body.push_back(std::move(item));
      }
      if (!c.blocks.emplace(blk.name, blk).second)
        throw validation_error("nested circuit: duplicate block '" + blk.name + "'");
    }
    if (!c.blocks.count(c.root)) throw validation_error("nested circuit: unknown root block '" + c.root + "'");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("nested circuit: ") + e.what());
  }
}

// Greedy left-packed moments: each gate goes right after the last moment
// touching any of its qubits.
inline std::vector<std::vector<Gate>> moments_of(const std::vector<Gate>& gates, int n_qubits) {
  std::vector<int> next(n_qubits, 0);
  std::vector<std::vector<Gate>> m;
  for (const auto& g : gates) {
    int k = 0;
    for (int q : g.qubits) k = std::max(k, next[q]);
    if (k == static_cast<int>(m.size())) m.emplace_back();
    m[k].push_back(g);
    for (int q : g.qubits) next[q] = k + 1;
  }
  return m;
}

namespace detail {

class GraphBuilder {
 public:
  GraphBuilder(const NestedCircuit& c, const SplitCriterion& crit) : c_(c), crit_(crit) { crit.validate(); }

  DependencyGraph build() {
    g_.n_qubits = c_.n_qubits;
    g_.root = block_node(c_.root);
    return std::move(g_);
  }

 private:
  const NestedCircuit& c_;
  SplitCriterion crit_;
  DependencyGraph g_;
  std::map<std::string, std::set<int>> active_;
  std::map<std::string, std::uint64_t> count_;
  std::set<std::string> visiting_;
  std::map<std::string, int> block_nodes_;
  std::map<std::string, int> leaf_by_key_;

  const NestedBlock& block(const std::string& name) {
    auto it = c_.blocks.find(name);
    if (it == c_.blocks.end()) throw validation_error("nested circuit: unknown block '" + name + "'");
    return it->second;
  }

  void summarize(const std::string& name) {
    if (active_.count(name)) return;
    if (!visiting_.insert(name).second) throw validation_error("nested circuit: cyclic reference through '" + name + "'");
    std::set<int> act;
    std::uint64_t n = 0;
    for (const auto& it : block(name).body) {
      if (it.gate) {
        act.insert(it.gate->qubits.begin(), it.gate->qubits.end());
        n = checked_add(n, 1);
      } else {
        summarize(it.block);
        act.insert(active_[it.block].begin(), active_[it.block].end());
        n = checked_add(n, checked_mul(count_[it.block], it.repeat));
      }
    }
    visiting_.erase(name);
    active_[name] = std::move(act);
    count_[name] = n;
  }

  void expand(const std::string& name, std::vector<Gate>& out) {
    for (const auto& it : block(name).body) {
      if (it.gate) {
        out.push_back(*it.gate);
      } else {
        for (std::uint64_t r = 0; r < it.repeat; ++r) expand(it.block, out);
      }
    }
  }

  static int active_of(const std::vector<Gate>& gates) {
    std::set<int> s;
    for (const auto& g : gates) s.insert(g.qubits.begin(), g.qubits.end());
    return static_cast<int>(s.size());
  }

  int leaf(const std::string& name, std::vector<Gate> gates) {
    std::string key = equivalence_key(gates, c_.n_qubits);
    if (auto it = leaf_by_key_.find(key); it != leaf_by_key_.end()) return it->second;
    SubcircuitNode n;
    n.id = static_cast<int>(g_.nodes.size());
    n.name = name;
    n.leaf = true;
    n.active_qubits = active_of(gates);
    n.gate_count = gates.size();
    n.gates = std::move(gates);
    n.key = key;
    n.widget = static_cast<int>(g_.widget_nodes.size());
    g_.widget_nodes.push_back(n.id);
    g_.nodes.push_back(std::move(n));
    leaf_by_key_[key] = g_.nodes.back().id;
    return g_.nodes.back().id;
  }

  int composite(const std::string& name, std::vector<std::pair<int, std::uint64_t>> children, int active,
                std::uint64_t count, const std::string& key) {
    SubcircuitNode n;
    n.id = static_cast<int>(g_.nodes.size());
    n.name = name;
    n.children = std::move(children);
    n.active_qubits = active;
    n.gate_count = count;
    n.key = key;
    g_.nodes.push_back(std::move(n));
    return g_.nodes.back().id;
  }

  // A flat gate list: leaf if admissible, else sliced by moments.
  int flat(const std::string& name, std::vector<Gate> gates) {
    int active = active_of(gates);
    if (!crit_.violated(active, gates.size())) return leaf(name, std::move(gates));
    auto moments = moments_of(gates, c_.n_qubits);
    if (moments.size() == 1) return leaf(name, std::move(gates));  // a single moment cannot be split further
    size_t step = moments.size() > static_cast<size_t>(crit_.slice_moments) ? crit_.slice_moments : 1;
    std::vector<std::pair<int, std::uint64_t>> kids;
    for (size_t i = 0, s = 0; i < moments.size(); i += step, ++s) {
      std::vector<Gate> part;
      for (size_t k = i; k < std::min(moments.size(), i + step); ++k)
        part.insert(part.end(), moments[k].begin(), moments[k].end());
      kids.push_back({flat(name + "/" + std::to_string(s), std::move(part)), 1});
    }
    return composite(name, std::move(kids), active, gates.size(), equivalence_key(gates, c_.n_qubits));
  }

  int block_node(const std::string& name) {
    if (auto it = block_nodes_.find(name); it != block_nodes_.end()) return it->second;
    summarize(name);
    const NestedBlock& b = block(name);
    int active = static_cast<int>(active_[name].size());
    std::uint64_t count = count_[name];
    int id;
    bool has_calls = std::any_of(b.body.begin(), b.body.end(), [](const NestedItem& i) { return !i.gate; });
    if (!crit_.violated(active, count)) {
      std::vector<Gate> gates;
      expand(name, gates);
      id = leaf(name, std::move(gates));
    } else if (!has_calls) {
      std::vector<Gate> gates;
      expand(name, gates);
      id = flat(name, std::move(gates));
    } else {
      // Decomposition: one child per block call; runs of raw gates form one child.
      std::vector<std::pair<int, std::uint64_t>> kids;
      std::vector<Gate> run;
      int runs = 0;
      auto flush = [&] {
        if (run.empty()) return;
        kids.push_back({flat(name + "#" + std::to_string(runs++), std::move(run)), 1});
        run.clear();
      };
      for (const auto& it : b.body) {
        if (it.gate) {
          run.push_back(*it.gate);
        } else {
          flush();
          kids.push_back({block_node(it.block), it.repeat});
        }
      }
      flush();
      id = composite(name, std::move(kids), active, count, "block:" + name);
    }
    block_nodes_[name] = id;
    return id;
  }
};

}  // namespace detail

inline DependencyGraph build_dependency_graph(const NestedCircuit& c, const SplitCriterion& crit) {
  return detail::GraphBuilder(c, crit).build();
}

// Counted view of a node's leaf sequence.
struct SequenceSummary {
  int first = -1;
  int last = -1;
  std::map<int, std::uint64_t> multiplicity;
  StitchMap stitches;
};

inline SequenceSummary summarize_sequence(const DependencyGraph& g) {
  std::vector<std::optional<SequenceSummary>> memo(g.nodes.size());
  auto repeat = [](SequenceSummary s, std::uint64_t r) {
    for (auto& [k, v] : s.multiplicity) v = checked_mul(v, r);
    for (auto& [k, v] : s.stitches) v = checked_mul(v, r);
    if (r > 1) s.stitches[{s.last, s.first}] = checked_add(s.stitches[{s.last, s.first}], r - 1);
    return s;
  };
  auto append = [](SequenceSummary& a, const SequenceSummary& b) {
    if (a.first < 0) {
      a = b;
      return;
    }
    for (const auto& [k, v] : b.multiplicity) a.multiplicity[k] = checked_add(a.multiplicity[k], v);
    for (const auto& [k, v] : b.stitches) a.stitches[k] = checked_add(a.stitches[k], v);
    a.stitches[{a.last, b.first}] = checked_add(a.stitches[{a.last, b.first}], 1);
    a.last = b.last;
  };
  std::function<const SequenceSummary&(int)> visit = [&](int id) -> const SequenceSummary& {
    if (memo[id]) return *memo[id];
    const SubcircuitNode& n = g.nodes[id];
    SequenceSummary s;
    if (n.leaf) {
      s.first = s.last = n.widget;
      s.multiplicity[n.widget] = 1;
    } else {
      for (auto [child, r] : n.children) append(s, repeat(visit(child), r));
    }
    memo[id] = std::move(s);
    return *memo[id];
  };
  return visit(g.root);
}

inline WidgetizedCircuit enumerate_widgets_and_stitches(const DependencyGraph& g) {
  SequenceSummary s = summarize_sequence(g);
  WidgetizedCircuit c;
  c.n_input = g.n_qubits;
  for (size_t w = 0; w < g.widget_nodes.size(); ++w) {
    const SubcircuitNode& n = g.nodes[g.widget_nodes[w]];
    c.ids.push_back("w" + std::to_string(w) + ":" + n.name);
    c.gates.push_back(n.gates);
    c.multiplicity.push_back(s.multiplicity.count(static_cast<int>(w)) ? s.multiplicity.at(static_cast<int>(w)) : 0);
  }
  c.first = s.first;
  c.last = s.last;
  c.stitches = s.stitches;
  return c;
}

}  // namespace ftqre
