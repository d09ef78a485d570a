#include <gtest/gtest.h>

#include "ftqre/config_yaml.hpp"

using namespace ftqre;

namespace {

ArchConfig parse(const std::string& text, std::vector<std::string>* w = nullptr) {
  std::vector<std::string> sink;
  return config_from_yaml_text(text, w ? *w : sink);
}

}  // namespace

TEST(Config, EmptyIsDefaults) {
  EXPECT_EQ(parse(""), ArchConfig{});
  ArchConfig d;
  EXPECT_EQ(d.p, 1e-3);
  EXPECT_EQ(d.kappa, 0.009);
  EXPECT_EQ(d.p_thresh, 0.016);
  EXPECT_EQ(d.t_inter, 1e-6);
  EXPECT_EQ(d.t_decoder, 1e-6);
  EXPECT_EQ(d.c0, 0.57);
  EXPECT_EQ(d.c1, 8.83);
  EXPECT_EQ(d.n_phys, 1000000);
  EXPECT_EQ(d.factories.size(), 7u);
}

TEST(Config, AstraValues) {
  auto c = parse("scaling: {kappa: 0.56, p_thresh: 0.17}");
  EXPECT_EQ(c.kappa, 0.56);
  EXPECT_EQ(c.p_thresh, 0.17);
  auto p = parse("scaling: {preset: astra-gnn}");
  EXPECT_EQ(p.kappa, 0.56);
  EXPECT_EQ(p.p_thresh, 0.17);
  EXPECT_THROW(parse("scaling: {preset: nope}"), validation_error);
}

TEST(Config, SynthesisPreset) {
  auto c = parse("synthesis: {preset: gridsynth}");
  EXPECT_EQ(c.c0, 3.0);
  EXPECT_EQ(c.c1, 0.0);
}

TEST(Config, PAboveThresholdRejected) {
  try {
    parse("physical: {p: 0.02}");
    FAIL();
  } catch (const validation_error& e) {
    EXPECT_NE(std::string(e.what()).find("physical.p"), std::string::npos);
  }
}

TEST(Config, UnknownKeyWarns) {
  std::vector<std::string> w;
  auto c = parse("physical: {p: 0.002, q: 1}\nextra: 3\n", &w);
  EXPECT_EQ(c.p, 0.002);
  ASSERT_EQ(w.size(), 2u);
}

TEST(Config, BadTypeRejected) { EXPECT_THROW(parse("timing: {t_gate: fast}"), validation_error); }

TEST(Config, Factories) {
  auto c = parse(R"(factories:
  - {name: "(15-to-1)_17,7,7", p_out: 4.5e-8, L_width: 64, L_length: 72, Q: 4620, C: 42.6}
)");
  ASSERT_EQ(c.factories.size(), 1u);
  EXPECT_EQ(c.factories[0], default_factories()[0]);
  EXPECT_THROW(parse("factories:\n  - {name: x, p_out: 1e-9}\n"), validation_error);
  EXPECT_THROW(parse("factories: []\n"), validation_error);
}

TEST(Config, ThermalLines) {
  auto c = parse("thermal:\n  eta_4K: 600\n  lines:\n    - {name: a, per_qubit: 1, load_4K: 1e-4, load_20mK: 0}\n");
  EXPECT_EQ(c.thermal.eta_4K, 600);
  ASSERT_EQ(c.thermal.lines.size(), 1u);
  EXPECT_EQ(c.thermal.lines[0].load_4K, 1e-4);
}

TEST(Config, Override) {
  ArchConfig base;
  auto c = with_override(base, "architecture.n_inter_pipes", "4");
  EXPECT_EQ(c.n_pipes, 4);
  EXPECT_EQ(with_override(base, "scaling.preset", "astra-gnn").kappa, 0.56);
  EXPECT_THROW(with_override(base, "thermal.eta_4K", "3"), validation_error);
  EXPECT_THROW(with_override(base, "architecture.n_inter_pipes", "0"), validation_error);
}

TEST(Config, HashSensitive) {
  ArchConfig a, b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.n_pipes = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
}
