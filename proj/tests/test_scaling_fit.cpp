#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "ftqre/scaling_fit.hpp"

using namespace ftqre;

namespace {

std::vector<ScalingSample> synthetic(double kappa, double pth, int n_p, std::mt19937_64* rng = nullptr,
                                     double sigma = 0) {
  std::vector<ScalingSample> s;
  std::normal_distribution<double> noise(0, sigma);
  for (int d : {3, 5, 7, 9})
    for (int i = 0; i < n_p; ++i) {
      double p = 1e-3 * std::pow(10.0, i / double(n_p));
      double pc = kappa * std::pow(p / pth, (d + 1) / 2.0);
      if (rng) pc *= std::exp(noise(*rng));
      s.push_back({p, d, pc, 1});
    }
  return s;
}

}  // namespace

TEST(Fit, NoiselessRecovery) {
  auto f = fit_scaling_law(synthetic(0.009, 0.016, 10));
  EXPECT_NEAR(f.kappa / 0.009, 1, 1e-9);
  EXPECT_NEAR(f.p_thresh / 0.016, 1, 1e-9);
  EXPECT_LT(f.residual, 1e-9);
}

TEST(Fit, PresetsRecovered) {
  for (auto [k, t] : {std::pair{0.52, 0.14}, std::pair{0.56, 0.17}}) {
    auto f = fit_scaling_law(synthetic(k, t, 10));
    EXPECT_NEAR(f.kappa / k, 1, 1e-9);
    EXPECT_NEAR(f.p_thresh / t, 1, 1e-9);
  }
}

TEST(Fit, NoisyMedianWithinTwoPercent) {
  std::mt19937_64 rng(2024);
  std::vector<double> ek, et;
  for (int trial = 0; trial < 100; ++trial) {
    auto f = fit_scaling_law(synthetic(0.009, 0.016, 20, &rng, 0.01));
    ek.push_back(std::fabs(f.kappa / 0.009 - 1));
    et.push_back(std::fabs(f.p_thresh / 0.016 - 1));
  }
  std::nth_element(ek.begin(), ek.begin() + 50, ek.end());
  std::nth_element(et.begin(), et.begin() + 50, et.end());
  EXPECT_LT(ek[50], 0.02);
  EXPECT_LT(et[50], 0.02);
}

TEST(Fit, ScaleEquivariance) {
  auto s = synthetic(0.009, 0.016, 10);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0, 0.05);
  for (auto& x : s) x.p_C *= std::exp(noise(rng));
  auto a = fit_scaling_law(s);
  for (auto& x : s) x.p_C *= 3;
  auto b = fit_scaling_law(s);
  EXPECT_NEAR(b.kappa / a.kappa, 3, 1e-9);
  EXPECT_NEAR(b.p_thresh / a.p_thresh, 1, 1e-9);
}

TEST(Fit, OnCurveSamplesDoNotMoveFit) {
  auto s = synthetic(0.02, 0.01, 6);
  s[3].p_C *= 1.3;
  auto a = fit_scaling_law(s);
  for (int d : {11, 13})
    s.push_back({2e-3, d, a.kappa * std::pow(2e-3 / a.p_thresh, (d + 1) / 2.0), 1});
  auto b = fit_scaling_law(s);
  EXPECT_NEAR(b.kappa / a.kappa, 1, 1e-9);
  EXPECT_NEAR(b.p_thresh / a.p_thresh, 1, 1e-9);
}

TEST(Fit, SingularRejected) {
  std::vector<ScalingSample> s = {{1e-3, 5, 1e-6, 1}, {1e-3, 5, 2e-6, 1}};
  EXPECT_THROW(fit_scaling_law(s), validation_error);
  EXPECT_THROW(fit_scaling_law({{1e-3, 5, 1e-6, 1}}), validation_error);
}

TEST(Fit, PerCycleConversion) {
  EXPECT_NEAR(per_cycle_rate(1 - std::pow(1 - 1e-4, 10), 10), 1e-4, 1e-16);
}

TEST(Fit, CsvParsing) {
  std::stringstream ss("# comment\np,d,ler,weight\n0.001,3,1e-5,2\n0.002,5,3e-6,1\n");
  auto s = read_scaling_csv(ss);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].d, 5);
  EXPECT_DOUBLE_EQ(s[0].weight, 2);
  std::stringstream bad("x,y\n");
  EXPECT_THROW(read_scaling_csv(bad), validation_error);
  std::stringstream short_row("p,d,ler\n0.001,3\n");
  EXPECT_THROW(read_scaling_csv(short_row), validation_error);
}
