#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "axsim/noise.hpp"
#include "axsim/physics.hpp"
#include "axsim/spectral.hpp"
#include "fit.hpp"
#include "gen.hpp"

using namespace axsim;

namespace {

const TimeGrid kGrid{2e-12, 90000, 0.0};

Trace noise(const TimeGrid& g, std::uint64_t seed, double sigma = 1.0) {
  gen::Source s(seed);
  Trace t(g);
  for (auto& v : t.values) v = sigma * s.normal();
  return t;
}

double mean_square(const Trace& t) {
  double s = 0;
  for (double v : t.values) s += v * v;
  return s / static_cast<double>(t.size());
}

// Scale that turns the reference axion into modulation index beta.
double scale_for(double beta, const AxionParams& a = {}) {
  return beta / modulation_index(effective_signal(a, QubitConfig{}));
}

// Time-domain energy of the same windowed segments the estimator sees.
double windowed_energy(const Trace& x, const PsdOptions& opt) {
  const std::size_t n = x.size();
  const std::size_t seg = opt.segment_len == 0 ? n : opt.segment_len;
  const std::size_t step =
      std::max<std::size_t>(1, seg - static_cast<std::size_t>(std::floor(opt.overlap * seg)));
  const double c[4][3] = {{1, 0, 0}, {0.5, 0.5, 0}, {0.54, 0.46, 0}, {0.42, 0.5, 0.08}};
  const auto& a = c[static_cast<int>(opt.window)];
  std::vector<double> w(seg);
  double ww = 0;
  for (std::size_t j = 0; j < seg; ++j) {
    const double t = 2.0 * std::numbers::pi * j / seg;
    w[j] = a[0] - a[1] * std::cos(t) + a[2] * std::cos(2 * t);
    ww += w[j] * w[j];
  }
  double acc = 0;
  std::size_t count = 0;
  for (std::size_t start = 0; start + seg <= n; start += step, ++count) {
    for (std::size_t j = 0; j < seg; ++j) {
      acc += w[j] * w[j] * x.values[start + j] * x.values[start + j];
    }
  }
  return acc / (ww * count);
}

}  // namespace

TEST(Psd, ParsevalEveryWindow) {
  gen::Source g(41);
  for (Window w : {Window::rectangular, Window::hann, Window::hamming, Window::blackman}) {
    for (int i = 0; i < 10; ++i) {
      const TimeGrid grid{1e-3, static_cast<std::size_t>(g.integer(1000, 20000)), 0.0};
      Trace x = noise(grid, g.bits(), g.uniform(0.1, 5.0));
      for (std::size_t k = 0; k < x.size(); ++k) {
        x.values[k] += g.uniform(0, 2) * std::sin(0.37 * k) + 0.1;
      }
      PsdOptions opt{w, g.coin() ? 0 : static_cast<std::size_t>(g.integer(64, 1000)),
                     g.uniform(0.0, 0.75), false};
      const auto p = estimate_psd(x, opt);
      EXPECT_NEAR(p.total_power() / windowed_energy(x, opt), 1.0, 1e-9)
          << window_name(w) << " seg " << opt.segment_len;
    }
  }
}

TEST(Psd, RectangularPeriodogramIsExact) {
  gen::Source g(44);
  for (int i = 0; i < gen::kCases; ++i) {
    const TimeGrid grid{1e-3, static_cast<std::size_t>(g.integer(16, 5000)), 0.0};
    const Trace x = noise(grid, g.bits(), g.uniform(0.1, 5.0));
    EXPECT_NEAR(periodogram(x).total_power() / mean_square(x), 1.0, 1e-10);
  }
}

TEST(Psd, WelchMatchesVarianceOfStationaryNoise) {
  for (Window w : {Window::hann, Window::hamming, Window::blackman}) {
    const TimeGrid grid{1e-3, 200000, 0.0};
    const Trace x = noise(grid, 45, 2.0);
    const auto p = estimate_psd(x, {w, 1000, 0.5, false});
    EXPECT_NEAR(p.total_power() / mean_square(x), 1.0, 0.01) << window_name(w);
  }
}

TEST(Psd, GridShape) {
  const auto p = estimate_psd(noise(kGrid, 1), {Window::hann, 1000, 0.5, false});
  EXPECT_EQ(p.frequency.front(), 0.0);
  EXPECT_DOUBLE_EQ(p.frequency.back(), kGrid.nyquist());
  for (std::size_t k = 1; k < p.size(); ++k) {
    ASSERT_GT(p.frequency[k], p.frequency[k - 1]);
    ASSERT_GE(p.power[k], 0.0);
  }
}

TEST(Psd, SineAtBinCentre) {
  const TimeGrid grid{1e-3, 4000, 0.0};
  Trace x(grid);
  for (std::size_t k = 0; k < grid.n_samples; ++k) {
    x.values[k] = std::sin(2.0 * std::numbers::pi * 100.0 * k / 4000.0);
  }
  for (Window w : {Window::rectangular, Window::hann}) {
    const auto p = periodogram(x, w);
    double s = 0;
    for (std::size_t k = 97; k <= 103; ++k) s += p.power[k] * p.bin_width();
    EXPECT_NEAR(s, 0.5, 1e-9) << window_name(w);
  }
}

TEST(Psd, WhiteNoiseIsFlat) {
  const double sigma = 0.3;
  const TimeGrid grid{1e-6, 200 * 1024, 0.0};
  const auto p = estimate_psd(noise(grid, 2, sigma), {Window::hann, 1024, 0.5, false});
  ASSERT_GE(p.n_segments, 100u);
  const double want = sigma * sigma / grid.nyquist();
  for (double lo = 0.05; lo < 0.95; lo += 0.1) {
    const auto [m, _] = fit::band_means(p, lo * grid.nyquist(), (lo + 0.1) * grid.nyquist(),
                                        [](double) { return 0.0; });
    EXPECT_NEAR(m / want, 1.0, 0.05);
  }
}

TEST(Psd, Rejections) {
  EXPECT_THROW(estimate_psd(Trace()), std::invalid_argument);
  EXPECT_THROW(estimate_psd(noise(kGrid, 3), {Window::hann, 100000, 0.5, false}),
               std::invalid_argument);
  EXPECT_THROW(estimate_psd(noise(kGrid, 3), {Window::hann, 1000, 1.0, false}),
               std::invalid_argument);
}

TEST(Sidebands, UnmodulatedCarrier) {
  AxionParams a;
  a.coupling_gae = 0.0;
  const auto p = periodogram(sigma_x_trace(a, QubitConfig{}, kGrid, 1.0), Window::hann);
  const auto r = detect_sidebands(p, 14e9, axion_frequency(AxionParams{}), 2);
  EXPECT_TRUE(r.carrier.found);
  EXPECT_EQ(r.found_count(), 0);
}

TEST(Sidebands, BesselRatioAndSymmetry) {
  const AxionParams a;
  const auto p = periodogram(sigma_x_trace(a, QubitConfig{}, kGrid, scale_for(0.5)), Window::hann);
  const auto r = detect_sidebands(p, 14e9, axion_frequency(a), 2);
  ASSERT_TRUE(r.carrier.found);
  const auto* lo = r.find(1, -1);
  const auto* hi = r.find(1, +1);
  ASSERT_TRUE(lo && hi && lo->found && hi->found);
  const double j0 = std::cyl_bessel_j(0.0, 0.5), j1 = std::cyl_bessel_j(1.0, 0.5);
  const double want = (j1 / j0) * (j1 / j0);
  EXPECT_NEAR(want, 0.0666, 1e-4);
  EXPECT_NEAR(lo->power / r.carrier.power / want, 1.0, 0.05);
  EXPECT_NEAR(hi->power / r.carrier.power / want, 1.0, 0.05);
  EXPECT_NEAR(lo->power / hi->power, 1.0, 0.01);
  for (const auto& s : r.sidebands) {
    if (s.found) {
      EXPECT_LE(std::fabs(s.frequency_hz - s.predicted_hz), r.bin_width);
    }
  }
}

TEST(Sidebands, OffsetTracksAxionMass) {
  gen::Source g(42);
  for (int i = 0; i < 10; ++i) {
    AxionParams a;
    a.mass_ev = g.uniform(1.5e-6, 3.5e-6);
    AxionParams b = a;
    b.mass_ev = 2.0 * a.mass_ev;
    double offsets[2];
    int idx = 0;
    for (const auto& ax : {a, b}) {
      const auto p =
          periodogram(sigma_x_trace(ax, QubitConfig{}, kGrid, scale_for(0.5, ax)), Window::hann);
      const auto r = detect_sidebands(p, 14e9, axion_frequency(ax), 1);
      const auto* hi = r.find(1, +1);
      ASSERT_TRUE(hi->found);
      EXPECT_NEAR(hi->predicted_hz - 14e9, axion_frequency(ax), 1e-3);
      EXPECT_LE(std::fabs(hi->frequency_hz - hi->predicted_hz), r.bin_width);
      offsets[idx++] = hi->frequency_hz - r.carrier.frequency_hz;
    }
    EXPECT_NEAR(offsets[1], 2.0 * offsets[0], 2.0 * kGrid.sample_rate() / kGrid.n_samples);
  }
}

TEST(Sidebands, PureNoiseReportsNothing) {
  const AxionParams a;
  int clean = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = periodogram(noise(kGrid, 1000 + seed, 1e-3), Window::hann);
    const auto r = detect_sidebands(p, 14e9, axion_frequency(a), 2);
    clean += r.found_count() == 0;
  }
  EXPECT_GE(clean, 95);
}

TEST(Sidebands, TooCloseToResolve) {
  const auto p = periodogram(noise(kGrid, 4), Window::hann);
  EXPECT_THROW(detect_sidebands(p, 14e9, 2.0 * p.bin_width(), 1), std::invalid_argument);
}

TEST(Cumulative, FlatIsStraightLine) {
  Psd p;
  for (int k = 0; k <= 100; ++k) {
    p.frequency.push_back(k);
    p.power.push_back(2.5);
  }
  const auto c = cumulative_power(p);
  EXPECT_EQ(c.front(), 0.0);
  EXPECT_DOUBLE_EQ(c.back(), 1.0);
  for (int k = 0; k <= 100; ++k) EXPECT_NEAR(c[k], k / 100.0, 1e-12);
}

TEST(Cumulative, SingleToneIsUnitStep) {
  Psd p;
  for (int k = 0; k <= 100; ++k) {
    p.frequency.push_back(k);
    p.power.push_back(k == 40 ? 1.0 : 0.0);
  }
  const auto c = cumulative_power(p);
  for (int k = 0; k <= 100; ++k) {
    if (k < 39) {
      EXPECT_EQ(c[k], 0.0);
    }
    if (k > 40) {
      EXPECT_DOUBLE_EQ(c[k], 1.0);
    }
  }
  EXPECT_GT(c[41] - c[38], 0.999);
}

TEST(Cumulative, MonotoneOnRandomSpectra) {
  gen::Source g(43);
  for (int i = 0; i < gen::kCases; ++i) {
    const auto p = periodogram(noise({1e-3, static_cast<std::size_t>(g.integer(16, 5000)), 0.0}, g.bits()));
    const auto c = cumulative_power(p);
    for (std::size_t k = 1; k < c.size(); ++k) ASSERT_GE(c[k], c[k - 1]);
    EXPECT_NEAR(c.back(), 1.0, 1e-12);
  }
  Psd zero;
  zero.frequency = {0, 1, 2};
  zero.power = {0, 0, 0};
  for (double v : cumulative_power(zero)) EXPECT_EQ(v, 0.0);
}

TEST(Cumulative, StepsAtModulationLines) {
  const AxionParams a;
  const auto p = periodogram(sigma_x_trace(a, QubitConfig{}, kGrid, scale_for(0.5)), Window::hann);
  const auto c = cumulative_power(p);
  const double fa = axion_frequency(a);
  auto rise = [&](double f) {
    const auto k = p.bin_of(f);
    return c[k + 4] - c[k - 4];
  };
  EXPECT_GT(rise(14e9), 0.5);
  EXPECT_GT(rise(14e9 - fa), 0.02);
  EXPECT_GT(rise(14e9 + fa), 0.02);
  EXPECT_GT(rise(14e9 + 2 * fa), 1e-4);
  EXPECT_LT(rise(14e9 + 1.5 * fa), 1e-6);
}

TEST(DynamicSnr, IdenticalBandsGiveZero) {
  DynamicSnrOptions opt;
  opt.signal_band = opt.noise_band = {13e9, 14e9};
  opt.hop = 50;
  const auto s = dynamic_snr(noise(kGrid, 5), opt);
  for (double v : s.db) ASSERT_EQ(v, 0.0);
}

TEST(DynamicSnr, GainInvariant) {
  gen::Source g(44);
  auto opt = lower_sideband_bands(14e9, axion_frequency(AxionParams{}));
  opt.hop = 25;
  const auto x = noise(kGrid, 6);
  const auto base = dynamic_snr(x, opt);
  for (int i = 0; i < 5; ++i) {
    const double k = g.log_uniform(1e-6, 1e6);
    const auto s = dynamic_snr(k * x, opt);
    ASSERT_EQ(s.db.size(), base.db.size());
    for (std::size_t j = 0; j < s.db.size(); ++j) ASSERT_NEAR(s.db[j], base.db[j], 1e-9);
  }
}

TEST(DynamicSnr, SaturationSentinels) {
  EXPECT_EQ(power_ratio_db(1.0, 0.0), kSnrSaturatedDb);
  EXPECT_EQ(power_ratio_db(0.0, 1.0), -kSnrSaturatedDb);
  EXPECT_EQ(power_ratio_db(0.0, 0.0), 0.0);
  EXPECT_EQ(power_ratio_db(1e300, 1e-300), kSnrSaturatedDb);
  EXPECT_DOUBLE_EQ(power_ratio_db(100.0, 1.0), 20.0);

  DynamicSnrOptions opt = lower_sideband_bands(14e9, axion_frequency(AxionParams{}));
  opt.hop = 100;
  for (double v : dynamic_snr(Trace(kGrid), opt).db) ASSERT_EQ(v, 0.0);
}

TEST(DynamicSnr, SignalBandToneDominates) {
  auto opt = lower_sideband_bands(14e9, axion_frequency(AxionParams{}));
  opt.hop = 100;
  Trace tone(kGrid);
  for (std::size_t k = 0; k < kGrid.n_samples; ++k) {
    tone.values[k] = std::sin(2.0 * std::numbers::pi * 13.27e9 * kGrid.time(k));
  }
  const auto s = dynamic_snr(tone, opt);
  EXPECT_GT(s.mean_db(), 30.0);
  EXPECT_LE(s.max_db(), kSnrSaturatedDb);
}

TEST(DynamicSnr, NoiseOnlyIsNotPositive) {
  const TimeGrid& grid = kGrid;
  auto opt = lower_sideband_bands(14e9, axion_frequency(AxionParams{}));
  opt.hop = 50;
  double sum = 0, sum_sq = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double m = dynamic_snr(noise(grid, 2000 + seed), opt).mean_db();
    sum += m;
    sum_sq += m * m;
  }
  const double mean = sum / 100.0;
  const double se = std::sqrt((sum_sq / 100.0 - mean * mean) / 99.0);
  EXPECT_LE(mean, 1.645 * se);
}

TEST(DynamicSnr, Rejections) {
  DynamicSnrOptions opt;
  opt.signal_band = {13e9, 14e9};
  opt.noise_band = {13.5e9, 15e9};
  EXPECT_THROW(dynamic_snr(noise(kGrid, 7), opt), std::invalid_argument);
  opt.noise_band = {15e9, 16e9};
  opt.window = 8;
  EXPECT_THROW(dynamic_snr(noise(kGrid, 7), opt), std::invalid_argument);
}

TEST(SnrDb, Values) {
  EXPECT_EQ(snr_db(1.0), 0.0);
  EXPECT_DOUBLE_EQ(snr_db(10.0), 20.0);
  EXPECT_EQ(snr_db(0.0), -kSnrSaturatedDb);
  EXPECT_THROW(snr_db(-1.0), std::invalid_argument);
}
