#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "ftqre/graph_compiler.hpp"
#include "ftqre/prep_scheduler.hpp"

namespace ftqre {

inline constexpr int kCacheFormat = 1;

inline nlohmann::json sparse_to_json(const SparsePauli& p) {
  nlohmann::json t = nlohmann::json::array();
  for (auto [q, c] : p.terms) t.push_back({q, std::string(1, c)});
  return {{"neg", p.negative}, {"terms", t}};
}

inline SparsePauli sparse_from_json(const nlohmann::json& j) {
  SparsePauli p;
  p.negative = j.at("neg").get<bool>();
  for (const auto& t : j.at("terms")) p.terms.push_back({t[0].get<int>(), t[1].get<std::string>().at(0)});
  return p;
}

inline nlohmann::json widget_to_json(const CompiledWidget& w) {
  nlohmann::json j;
  j["key"] = w.key;
  j["n_input"] = w.n_input;
  j["n_nodes"] = w.graph.n_nodes;
  j["edges"] = w.graph.edges;
  j["inputs"] = w.graph.inputs;
  j["outputs"] = w.graph.outputs;
  nlohmann::json lc = nlohmann::json::array();
  for (const auto& c : w.graph.lc) lc.push_back(int(c.h) | int(c.s) << 1 | int(c.z) << 2);
  j["lc"] = lc;
  nlohmann::json meas = nlohmann::json::array();
  for (const auto& m : w.meas) meas.push_back({m.node, static_cast<int>(m.kind), m.theta});
  j["meas"] = meas;
  j["consump"] = w.consump;
  for (auto [name, v] : {std::pair{"input_x_image", &w.input_x_image}, std::pair{"input_z_image", &w.input_z_image},
                         std::pair{"byproduct", &w.byproduct}}) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : *v) a.push_back(sparse_to_json(p));
    j[name] = a;
  }
  j["x_deps"] = w.x_deps;
  j["z_deps"] = w.z_deps;
  j["n_logical"] = w.n_logical;
  j["register_slot"] = w.register_slot;
  j["n_T"] = w.n_T;
  j["n_Rz"] = w.n_Rz;
  if (w.local_state) {
    nlohmann::json s = nlohmann::json::array();
    for (const auto& a : *w.local_state) s.push_back({a.real(), a.imag()});
    j["local_state"] = s;
  }
  return j;
}

inline CompiledWidget widget_from_json(const nlohmann::json& j) {
  CompiledWidget w;
  w.key = j.at("key").get<std::string>();
  w.n_input = j.at("n_input").get<int>();
  w.graph.n_nodes = j.at("n_nodes").get<int>();
  w.graph.edges = j.at("edges").get<std::vector<std::pair<int, int>>>();
  w.graph.inputs = j.at("inputs").get<std::vector<int>>();
  w.graph.outputs = j.at("outputs").get<std::vector<int>>();
  for (int c : j.at("lc")) w.graph.lc.push_back({bool(c & 1), bool(c & 2), bool(c & 4)});
  for (const auto& m : j.at("meas"))
    w.meas.push_back({m[0].get<int>(), static_cast<BasisKind>(m[1].get<int>()), m[2].get<double>()});
  w.consump = j.at("consump").get<std::vector<std::vector<int>>>();
  for (const auto& p : j.at("input_x_image")) w.input_x_image.push_back(sparse_from_json(p));
  for (const auto& p : j.at("input_z_image")) w.input_z_image.push_back(sparse_from_json(p));
  for (const auto& p : j.at("byproduct")) w.byproduct.push_back(sparse_from_json(p));
  w.x_deps = j.at("x_deps").get<std::vector<std::vector<int>>>();
  w.z_deps = j.at("z_deps").get<std::vector<std::vector<int>>>();
  w.n_logical = j.at("n_logical").get<int>();
  w.register_slot = j.at("register_slot").get<std::vector<int>>();
  w.n_T = j.at("n_T").get<long long>();
  w.n_Rz = j.at("n_Rz").get<long long>();
  if (j.contains("local_state")) {
    std::vector<cplx> s;
    for (const auto& a : j.at("local_state")) s.emplace_back(a[0].get<double>(), a[1].get<double>());
    w.local_state = std::move(s);
  }
  return w;
}

inline nlohmann::json schedule_to_json(const PrepSchedule& s) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& step : s.steps) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& t : step) a.push_back({{"c", t.center}, {"l", t.leaves}, {"d", t.d_max}});
    steps.push_back(a);
  }
  return steps;
}

inline PrepSchedule schedule_from_json(const nlohmann::json& j) {
  PrepSchedule s;
  for (const auto& step : j) {
    std::vector<PrepTuple> v;
    for (const auto& t : step) v.push_back({t.at("c").get<int>(), t.at("l").get<std::vector<int>>(), t.at("d").get<int>()});
    s.steps.push_back(std::move(v));
  }
  return s;
}

struct CachedWidget {
  CompiledWidget widget;
  PrepSchedule prep;
};

// Directory of <hash>.json files; writes go through a temporary file and an
// atomic rename, so concurrent readers never see partial entries.
class WidgetCache {
 public:
  explicit WidgetCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static std::optional<WidgetCache> from_env() {
    const char* d = std::getenv("FTQRE_CACHE_DIR");
    if (!d || !*d) return std::nullopt;
    return WidgetCache(d);
  }

  std::filesystem::path path_for(const std::string& hash) const { return dir_ / (hash + ".json"); }

  std::optional<CachedWidget> load(const std::string& hash) const {
    std::ifstream f(path_for(hash));
    if (!f) return std::nullopt;
    try {
      nlohmann::json j = nlohmann::json::parse(f);
      if (j.at("format") != kCacheFormat || j.at("hash") != hash) return std::nullopt;
      return CachedWidget{widget_from_json(j.at("widget")), schedule_from_json(j.at("prep"))};
    } catch (const std::exception&) {
      return std::nullopt;  // a corrupt entry is recomputed
    }
  }

  void store(const std::string& hash, const CachedWidget& c) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    nlohmann::json j{{"format", kCacheFormat},
                     {"hash", hash},
                     {"widget", widget_to_json(c.widget)},
                     {"prep", schedule_to_json(c.prep)}};
    std::ostringstream tid;
    tid << ::getpid() << "." << std::this_thread::get_id();
    auto tmp = dir_ / (hash + ".tmp." + tid.str());
    {
      std::ofstream f(tmp);
      if (!f) throw io_error("cache: cannot write " + tmp.string());
      f << j.dump();
      if (!f) throw io_error("cache: write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path_for(hash), ec);
    if (ec) throw io_error("cache: cannot rename into " + path_for(hash).string());
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace ftqre
