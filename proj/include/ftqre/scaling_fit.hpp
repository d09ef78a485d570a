#pragma once

#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ftqre/util.hpp"

namespace ftqre {

struct ScalingSample {
  double p = 0;
  int d = 0;
  double p_C = 0;  // per-cycle logical error rate
  double weight = 1;
};

struct ScalingFit {
  double kappa = 0;
  double p_thresh = 0;
  double residual = 0;  // RMS in log space
};

// Per-cycle rate from a per-shot rate over `rounds` cycles.
inline double per_cycle_rate(double p_shot, int rounds) { return -std::expm1(std::log1p(-p_shot) / rounds); }

// Least squares on ln p_C - m ln p = u - m v with m = (d+1)/2, u = ln kappa, v = ln p_thresh.
inline ScalingFit fit_scaling_law(const std::vector<ScalingSample>& s) {
  if (s.size() < 2) throw validation_error("fit: need at least 2 samples");
  std::set<int> ds;
  for (const auto& x : s) {
    if (!(x.p > 0 && x.p < 1)) throw validation_error("fit: p must be in (0,1)");
    if (!(x.p_C > 0 && x.p_C < 1)) throw validation_error("fit: logical error rate must be in (0,1)");
    if (x.d < 1) throw validation_error("fit: d must be positive");
    if (!(x.weight > 0)) throw validation_error("fit: weights must be positive");
    ds.insert(x.d);
  }
  if (ds.size() < 2) throw validation_error("fit: need at least 2 distinct distances");
  // Regressors (1, -m), target y.
  long double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
  for (const auto& x : s) {
    long double m = (x.d + 1) / 2.0L, w = x.weight;
    long double y = std::log(static_cast<long double>(x.p_C)) - m * std::log(static_cast<long double>(x.p));
    s11 += w;
    s12 += -m * w;
    s22 += m * m * w;
    b1 += w * y;
    b2 += -m * w * y;
  }
  long double det = s11 * s22 - s12 * s12;
  if (!(std::fabs(det) > 1e-12L * s11 * s22)) throw validation_error("fit: singular normal equations");
  long double u = (b1 * s22 - s12 * b2) / det;
  long double v = (s11 * b2 - s12 * b1) / det;
  double ss = 0;
  for (const auto& x : s) {
    double m = (x.d + 1) / 2.0;
    double r = std::log(x.p_C) - (static_cast<double>(u) + m * (std::log(x.p) - static_cast<double>(v)));
    ss += r * r;
  }
  return {static_cast<double>(std::exp(u)), static_cast<double>(std::exp(v)), std::sqrt(ss / s.size())};
}

// CSV with header p,d,ler[,weight].
inline std::vector<ScalingSample> read_scaling_csv(std::istream& is) {
  std::vector<ScalingSample> out;
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "p,d,ler" && line != "p,d,ler,weight")
        throw validation_error("fit csv: header must be p,d,ler[,weight]");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string f[4];
    int n = 0;
    while (n < 4 && std::getline(ss, f[n], ',')) ++n;
    if (n < 3) throw validation_error("fit csv line " + std::to_string(lineno) + ": expected 3 or 4 fields");
    try {
      ScalingSample x{std::stod(f[0]), std::stoi(f[1]), std::stod(f[2]), n == 4 ? std::stod(f[3]) : 1.0};
      out.push_back(x);
    } catch (const std::exception&) {
      throw validation_error("fit csv line " + std::to_string(lineno) + ": bad number");
    }
  }
  return out;
}

}  // namespace ftqre
