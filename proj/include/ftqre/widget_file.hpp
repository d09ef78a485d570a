#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ftqre/gate.hpp"
#include "ftqre/qasm.hpp"
#include "ftqre/util.hpp"

namespace ftqre {

using StitchMap = std::map<std::pair<int, int>, std::uint64_t>;

// A widget sequence held in counted form: distinct widgets, multiplicities,
// first and last widget, and ordered-pair stitch counts.
struct WidgetizedCircuit {
  int n_input = 0;
  std::vector<std::string> ids;
  std::vector<std::vector<Gate>> gates;
  std::vector<std::uint64_t> multiplicity;
  int first = 0;
  int last = 0;
  StitchMap stitches;
  std::vector<int> sequence;  // explicit order, when known

  std::uint64_t n_widgets() const {
    std::uint64_t n = 0;
    for (auto m : multiplicity) n = checked_add(n, m);
    return n;
  }
  size_t n_distinct() const { return ids.size(); }
};

// Flow check: every occurrence except the last has one outgoing stitch and
// every occurrence except the first has one incoming stitch.
inline void validate_counts(const WidgetizedCircuit& c) {
  const size_t k = c.ids.size();
  if (k == 0) throw validation_error("widget file: no widgets");
  if (c.multiplicity.size() != k || c.gates.size() != k) throw validation_error("widget file: table size mismatch");
  std::vector<std::uint64_t> out(k, 0), in(k, 0);
  std::uint64_t total = 0;
  for (const auto& [ab, n] : c.stitches) {
    if (ab.first < 0 || ab.second < 0 || static_cast<size_t>(ab.first) >= k || static_cast<size_t>(ab.second) >= k)
      throw validation_error("widget file: stitch references an unknown widget");
    out[ab.first] = checked_add(out[ab.first], n);
    in[ab.second] = checked_add(in[ab.second], n);
    total = checked_add(total, n);
  }
  if (total + 1 != c.n_widgets()) throw validation_error("widget file: stitch count must equal n_widgets - 1");
  for (size_t i = 0; i < k; ++i) {
    if (c.multiplicity[i] == 0) throw validation_error("widget file: widget '" + c.ids[i] + "' has multiplicity 0");
    if (out[i] + (static_cast<int>(i) == c.last) != c.multiplicity[i] ||
        in[i] + (static_cast<int>(i) == c.first) != c.multiplicity[i])
      throw validation_error("widget file: stitches inconsistent with multiplicity of '" + c.ids[i] + "'");
  }
}

inline WidgetizedCircuit from_sequence(int n_input, const std::vector<std::string>& ids,
                                       const std::vector<std::vector<Gate>>& gates, const std::vector<int>& seq) {
  if (seq.empty()) throw validation_error("widget file: empty sequence");
  WidgetizedCircuit c;
  c.n_input = n_input;
  std::vector<int> remap(ids.size(), -1);
  for (int s : seq) {
    if (remap[s] < 0) {
      remap[s] = static_cast<int>(c.ids.size());
      c.ids.push_back(ids[s]);
      c.gates.push_back(gates[s]);
      c.multiplicity.push_back(0);
    }
    c.multiplicity[remap[s]]++;
  }
  for (size_t i = 0; i + 1 < seq.size(); ++i) c.stitches[{remap[seq[i]], remap[seq[i + 1]]}]++;
  for (int s : seq) c.sequence.push_back(remap[s]);
  c.first = remap[seq.front()];
  c.last = remap[seq.back()];
  return c;
}

inline WidgetizedCircuit single_widget(std::vector<Gate> gates, int n_qubits, const std::string& id = "U") {
  return from_sequence(n_qubits, {id}, {std::move(gates)}, {0});
}

inline WidgetizedCircuit parse_widget_json(const nlohmann::json& j) {
  if (!j.is_object()) throw validation_error("widget file: top level must be an object");
  if (j.contains("format") && j.at("format") != 1) throw validation_error("widget file: unsupported format version");
  try {
    if (j.contains("qasm")) {
      auto p = parse_qasm_program(j.at("qasm").get<std::string>());
      return single_widget(p.gates, p.n_qubits);
    }
    int n_input = j.at("n_input").get<int>();
    if (n_input < 1) throw validation_error("widget file: n_input must be >= 1");
    std::vector<std::string> ids;
    std::vector<std::vector<Gate>> gates;
    std::map<std::string, int> index;
    for (const auto& [id, text] : j.at("distinct_widgets").items()) {
      QasmProgram p;
      try {
        p = parse_qasm_program(text.get<std::string>());
      } catch (const validation_error& e) {
        throw validation_error("widget '" + id + "': " + e.what());
      }
      if (p.n_qubits != n_input)
        throw validation_error("widget file: widget '" + id + "' has width " + std::to_string(p.n_qubits) +
                               ", expected " + std::to_string(n_input));
      index[id] = static_cast<int>(ids.size());
      ids.push_back(id);
      gates.push_back(std::move(p.gates));
    }
    auto lookup = [&](const std::string& id) {
      auto it = index.find(id);
      if (it == index.end()) throw validation_error("widget file: unknown widget id '" + id + "'");
      return it->second;
    };
    if (j.contains("sequence")) {
      std::vector<int> seq;
      for (const auto& id : j.at("sequence")) seq.push_back(lookup(id.get<std::string>()));
      return from_sequence(n_input, ids, gates, seq);
    }
    // Counted form.
    WidgetizedCircuit c;
    c.n_input = n_input;
    c.ids = ids;
    c.gates = gates;
    c.multiplicity.assign(ids.size(), 0);
    for (const auto& [id, m] : j.at("multiplicity").items()) c.multiplicity[lookup(id)] = m.get<std::uint64_t>();
    c.first = lookup(j.at("first").get<std::string>());
    c.last = lookup(j.at("last").get<std::string>());
    for (const auto& s : j.value("stitches", nlohmann::json::array())) {
      if (!s.is_array() || s.size() != 3) throw validation_error("widget file: stitch entries are [from, to, count]");
      c.stitches[{lookup(s[0].get<std::string>()), lookup(s[1].get<std::string>())}] += s[2].get<std::uint64_t>();
    }
    validate_counts(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string("widget file: ") + e.what());
  }
}

inline nlohmann::json widget_json(const WidgetizedCircuit& c) {
  nlohmann::json j;
  j["format"] = 1;
  j["n_input"] = c.n_input;
  j["distinct_widgets"] = nlohmann::json::object();
  for (size_t i = 0; i < c.ids.size(); ++i) j["distinct_widgets"][c.ids[i]] = emit_qasm(c.gates[i], c.n_input);
  if (!c.sequence.empty()) {
    j["sequence"] = nlohmann::json::array();
    for (int s : c.sequence) j["sequence"].push_back(c.ids[s]);
    return j;
  }
  j["first"] = c.ids[c.first];
  j["last"] = c.ids[c.last];
  j["multiplicity"] = nlohmann::json::object();
  for (size_t i = 0; i < c.ids.size(); ++i) j["multiplicity"][c.ids[i]] = c.multiplicity[i];
  j["stitches"] = nlohmann::json::array();
  for (const auto& [ab, n] : c.stitches) j["stitches"].push_back({c.ids[ab.first], c.ids[ab.second], n});
  return j;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Accepts a widget JSON file or a raw .qasm circuit.
inline WidgetizedCircuit load_circuit(const std::string& path) {
  std::string text = read_text_file(path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".qasm") {
    auto p = parse_qasm_program(text);
    return single_widget(p.gates, p.n_qubits);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error(std::string("widget file: ") + e.what());
  }
  return parse_widget_json(j);
}

inline std::string circuit_hash(const WidgetizedCircuit& c) { return hex64(fnv1a(widget_json(c).dump())); }

}  // namespace ftqre
