#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "axsim/sensitivity.hpp"
#include "gen.hpp"

using namespace axsim;

namespace {

DeviceScenario random_scenario(gen::Source& g) {
  DeviceScenario s;
  s.q_factor = g.log_uniform(1.0, 1e7);
  s.n_spins = g.log_uniform(1.0, 1e8);
  s.t_s = g.log_uniform(1e-3, 1e9);
  s.eta_b = g.log_uniform(1e-12, 1e-5);
  s.t2_s = g.log_uniform(1e-6, 1.0);
  s.entangled = g.coin();
  return s;
}

}  // namespace

TEST(SnrAmp, Formula) {
  gen::Source g(51);
  const QubitConfig q;
  for (int i = 0; i < gen::kCases; ++i) {
    const auto s = random_scenario(g);
    AxionParams a;
    a.coupling_gae = g.log_uniform(1e-15, 1e-11);
    const double n_eff = s.entangled ? s.n_spins : std::sqrt(s.n_spins);
    const double want = s.q_factor * effective_field(a, q) * n_eff * std::sqrt(s.t_s) / s.eta_b;
    EXPECT_NEAR(snr_amp(s, a, q), want, 1e-12 * want);
  }
}

TEST(SnrAmp, Scaling) {
  gen::Source g(52);
  const QubitConfig q;
  for (int i = 0; i < gen::kCases; ++i) {
    auto s = random_scenario(g);
    AxionParams a;
    s.entangled = true;
    const double ent = snr_amp(s, a, q);
    s.entangled = false;
    const double un = snr_amp(s, a, q);
    EXPECT_NEAR(ent / un, std::sqrt(s.n_spins), 1e-12 * std::sqrt(s.n_spins));
    auto s4 = s;
    s4.n_spins *= 4.0;
    EXPECT_NEAR(snr_amp(s4, a, q) / un, 2.0, 1e-12);
  }
  AxionParams off;
  off.coupling_gae = 0.0;
  EXPECT_EQ(snr_amp(DeviceScenario::best_case(), off, q), 0.0);
}

TEST(BetaMin, ProductCollapses) {
  gen::Source g(53);
  for (int i = 0; i < gen::kCases; ++i) {
    auto s = random_scenario(g);
    s.entangled = true;
    const double fa = g.log_uniform(1e8, 1e12);
    const double product = beta_min(s, fa) * s.q_factor * s.n_spins * std::sqrt(s.t_s) * fa;
    EXPECT_NEAR(product, 28e9 * s.eta_b, 1e-12 * 28e9 * s.eta_b);
  }
}

TEST(BetaMin, BaseIsSpecialCase) {
  DeviceScenario s;
  s.q_factor = 1.0;
  s.n_spins = 1.0;
  s.t_s = s.t2_s = 1e-4;
  EXPECT_DOUBLE_EQ(beta_min(s, 7e8), beta_min_base(s.eta_b, s.t2_s, 7e8));
}

TEST(BetaMin, PerfectSensor) {
  DeviceScenario s;
  s.eta_b = 1e-300;
  EXPECT_LT(beta_min(s, 7e8), 1e-300);
  EXPECT_EQ(beta_min_base(0.0, 1e-4, 7e8), 0.0);
}

TEST(Threshold, Boundaries) {
  EXPECT_TRUE(detection_threshold(5.0 * 1e-22, 1e-22));
  EXPECT_FALSE(detection_threshold(0.0, 1e-22));
  EXPECT_TRUE(detection_threshold(1e-21, 1e-22));
  EXPECT_FALSE(detection_threshold(4.999e-22, 1e-22));
}

TEST(Threshold, ScaleInvariant) {
  gen::Source g(54);
  for (int i = 0; i < 200; ++i) {
    const double b = g.log_uniform(1e-25, 1e-15);
    const double m = g.log_uniform(1e-25, 1e-15);
    const double k = std::ldexp(1.0, g.integer(-60, 60));
    EXPECT_EQ(detection_threshold(b, m), detection_threshold(k * b, k * m));
  }
}

TEST(GaeLimit, InversionIdentity) {
  gen::Source g(55);
  const QubitConfig q;
  for (int i = 0; i < gen::kCases; ++i) {
    const auto s = random_scenario(g);
    AxionParams a;
    a.mass_ev = g.log_uniform(1e-6, 1e-3);
    a.coupling_gae = g.log_uniform(1e-15, 1e-11);
    const double limit = g_ae_limit(a.mass_ev, s, a, q);
    AxionParams at = a;
    at.coupling_gae = limit;
    const double beta = modulation_index(effective_signal(at, q));
    const double bmin = beta_min(s, axion_frequency(at));
    EXPECT_NEAR(beta / (5.0 * bmin), 1.0, 1e-10);
  }
}

TEST(GaeLimit, BisectionCrossCheck) {
  const QubitConfig q;
  const auto s = DeviceScenario::current();
  AxionParams a;
  a.mass_ev = 2.7e-5;
  const double bmin = beta_min(s, axion_frequency(a));
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    a.coupling_gae = mid;
    (detection_threshold(modulation_index(effective_signal(a, q)), bmin) ? hi : lo) = mid;
  }
  EXPECT_NEAR(g_ae_limit(a.mass_ev, s, a, q) / hi, 1.0, 1e-12);
}

TEST(GaeLimit, MonotoneAndMassIndependent) {
  gen::Source g(56);
  const QubitConfig q;
  const AxionParams env;
  for (int i = 0; i < gen::kCases; ++i) {
    const auto s = random_scenario(g);
    const double m = g.log_uniform(1e-6, 1e-3);
    const double base = g_ae_limit(m, s, env, q);
    for (double DeviceScenario::*field : {&DeviceScenario::q_factor, &DeviceScenario::n_spins,
                                           &DeviceScenario::t_s}) {
      auto bigger = s;
      bigger.*field *= g.uniform(1.0, 10.0);
      EXPECT_LE(g_ae_limit(m, bigger, env, q), base);
    }
    EXPECT_NEAR(g_ae_limit(g.log_uniform(1e-6, 1e-3), s, env, q) / base, 1.0, 1e-12);
  }
}

TEST(Dfsz, Values) {
  EXPECT_NEAR(dfsz_ce(1.0, DfszVariant::I), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(dfsz_ce(1.0, DfszVariant::II), 1.0 / 6.0, 1e-15);
  const double g = dfsz_coupling({1.0, 1e9, DfszVariant::I});
  EXPECT_NEAR(g, 8.5e-14, 0.05e-14);
  EXPECT_NEAR(g, 0.51099895e-3 / 6.0 / 1e9, 1e-24);
  EXPECT_LE(g, 1e-13);
}

TEST(Dfsz, VariantSymmetry) {
  gen::Source g(57);
  for (int i = 0; i < gen::kCases; ++i) {
    const double b = g.uniform(0.01, std::numbers::pi / 2 - 0.01);
    EXPECT_NEAR(dfsz_ce(std::tan(b), DfszVariant::I),
                dfsz_ce(std::tan(std::numbers::pi / 2 - b), DfszVariant::II), 1e-14);
  }
}

TEST(Dfsz, Validation) {
  EXPECT_THROW(dfsz_coupling({1.0, 1e8, DfszVariant::I}), std::invalid_argument);
  EXPECT_THROW(dfsz_coupling({1.0, 1e13, DfszVariant::I}), std::invalid_argument);
  EXPECT_THROW(dfsz_coupling({0.0, 1e10, DfszVariant::I}), std::invalid_argument);
  EXPECT_NO_THROW(dfsz_coupling({1.0, 1e12, DfszVariant::II}));
}

TEST(Dfsz, BandContainsTanBetaOne) {
  gen::Source g(58);
  for (int i = 0; i < gen::kCases; ++i) {
    const double fa = g.log_uniform(1e9, 1e12);
    for (auto v : {DfszVariant::I, DfszVariant::II}) {
      const auto band = dfsz_band(fa, v);
      EXPECT_LT(band.lower, band.tan_beta_one);
      EXPECT_GT(band.upper, band.tan_beta_one);
      EXPECT_DOUBLE_EQ(band.tan_beta_one, dfsz_coupling_unchecked(1.0, fa, v));
    }
  }
}

TEST(Scan, Shape) {
  const QubitConfig q;
  const AxionParams env;
  const std::vector<DeviceScenario> sc{DeviceScenario::current(), DeviceScenario::next_generation()};
  const auto one = scan({3e-6}, sc, env, q);
  ASSERT_EQ(one.rows.size(), 1u);
  EXPECT_EQ(one.rows[0].g_ae_limit.size(), 2u);

  const auto grid = log_mass_grid(1e-6, 1e-3, 61);
  ASSERT_EQ(grid.size(), 61u);
  const auto t = scan(grid, sc, env, q);
  EXPECT_NEAR(t.rows.front().f_axion_hz / 241.8e6, 1.0, 1e-3);
  EXPECT_NEAR(t.rows.back().f_axion_hz / 241.8e9, 1.0, 1e-3);
  for (const auto& r : t.rows) EXPECT_LT(r.g_ae_limit[1], r.g_ae_limit[0]);

  EXPECT_THROW(scan({}, sc, env, q), std::invalid_argument);
  EXPECT_THROW(scan(grid, {}, env, q), std::invalid_argument);
}

TEST(Scan, MonotoneInQ) {
  const QubitConfig q;
  const AxionParams env;
  std::vector<DeviceScenario> sc;
  for (double Q : {1e2, 1e3, 1e4, 1e5}) {
    auto s = DeviceScenario::current();
    s.q_factor = Q;
    sc.push_back(s);
  }
  for (const auto& r : scan(log_mass_grid(1e-6, 1e-3, 11), sc, env, q).rows) {
    for (std::size_t i = 1; i < r.g_ae_limit.size(); ++i) {
      EXPECT_LT(r.g_ae_limit[i], r.g_ae_limit[i - 1]);
    }
  }
}

TEST(Scan, CsvHeaderNamesUnits) {
  const auto t = scan(log_mass_grid(1e-6, 1e-3, 3),
                      {DeviceScenario::current(), DeviceScenario::next_generation()},
                      AxionParams{}, QubitConfig{});
  std::istringstream in(t.to_csv());
  std::string header;
  std::getline(in, header);
  EXPECT_NE(header.find("mass_ev"), std::string::npos);
  EXPECT_NE(header.find("f_axion_hz"), std::string::npos);
  EXPECT_NE(header.find("f_a_gev"), std::string::npos);
  int lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  EXPECT_EQ(lines, 3);
}

TEST(Scan, ReferenceLine) {
  const auto line = load_reference_line(std::string(AXSIM_DATA_DIR) + "/stellar_cooling_rgb.csv");
  EXPECT_FALSE(line.label.empty());
  ASSERT_GE(line.mass_ev.size(), 2u);
  EXPECT_EQ(line.mass_ev.size(), line.g_ae.size());
  EXPECT_THROW(load_reference_line("/nonexistent/line.csv"), std::exception);
}

TEST(Scenario, Validation) {
  DeviceScenario s;
  s.q_factor = 0.5;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = DeviceScenario{};
  s.eta_b = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = DeviceScenario{};
  s.t_s = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}
