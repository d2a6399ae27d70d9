#include "axsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "axsim/fft.hpp"
#include "axsim/filter.hpp"

namespace axsim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// (100 eps)^2: relative density of rounding residue in a double trace and its FFT.
constexpr double kRoundoffFloor = 1e4 * std::numeric_limits<double>::epsilon() *
                                  std::numeric_limits<double>::epsilon();

std::vector<double> make_window(Window w, std::size_t n) {
  std::vector<double> out(n, 1.0);
  const double dn = static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = kTwoPi * static_cast<double>(j) / dn;
    switch (w) {
      case Window::rectangular: break;
      case Window::hann: out[j] = 0.5 - 0.5 * std::cos(x); break;
      case Window::hamming: out[j] = 0.54 - 0.46 * std::cos(x); break;
      case Window::blackman:
        out[j] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
        break;
    }
  }
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double hi = *mid;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

// Median over mean of a chi-square density estimate with 2K degrees of
// freedom (K averaged periodograms).
double median_to_mean(std::size_t k) {
  if (k <= 1) return std::numbers::ln2;
  const double c = 1.0 - 1.0 / (9.0 * static_cast<double>(k));
  return c * c * c;
}

struct LineSearch {
  const Psd& p;
  std::vector<bool> masked;
  std::size_t search;
  std::size_t half_width;
  std::size_t neighbourhood;
  double resolution;  // density below which double rounding dominates

  double floor_around(std::size_t c) const {
    const std::size_t lo = c > neighbourhood ? c - neighbourhood : 0;
    const std::size_t hi = std::min(p.size() - 1, c + neighbourhood);
    std::vector<double> bins;
    for (std::size_t k = lo; k <= hi; ++k) {
      if (!masked[k]) bins.push_back(p.power[k]);
    }
    if (bins.size() < 8) {
      bins.clear();
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (!masked[k]) bins.push_back(p.power[k]);
      }
    }
    return std::max(median_of(std::move(bins)) / median_to_mean(p.n_segments), resolution);
  }

  SpectralLine measure(double predicted, int order, int side, double threshold) const {
    SpectralLine line;
    line.order = order;
    line.side = side;
    line.predicted_hz = predicted;
    line.frequency_hz = predicted;
    const double df = p.bin_width();
    const double nyq = p.frequency.back();
    if (!(predicted > 0.0 && predicted < nyq)) {
      line.prominence_db = -kSnrSaturatedDb;
      return line;
    }
    const std::size_t c = p.bin_of(predicted);
    const std::size_t lo = c > search ? c - search : 0;
    const std::size_t hi = std::min(p.size() - 1, c + search);
    std::size_t kp = lo;
    for (std::size_t k = lo; k <= hi; ++k) {
      if (p.power[k] > p.power[kp]) kp = k;
    }
    const std::size_t a = kp > half_width ? kp - half_width : 0;
    const std::size_t b = std::min(p.size() - 1, kp + half_width);
    double power = 0.0;
    for (std::size_t k = a; k <= b; ++k) power += p.power[k];
    power *= df;
    line.power = power;
    // Excess density above the floor, relative to the floor.
    const double mean_density = power / (static_cast<double>(b - a + 1) * df);
    const double floor = floor_around(c);
    line.prominence_db = power_ratio_db(std::max(0.0, mean_density - floor), floor);

    double delta = 0.0;
    if (kp > 0 && kp + 1 < p.size() && p.power[kp - 1] > 0.0 && p.power[kp] > 0.0 &&
        p.power[kp + 1] > 0.0) {
      const double l = std::log(p.power[kp - 1]);
      const double m = std::log(p.power[kp]);
      const double r = std::log(p.power[kp + 1]);
      const double den = l - 2.0 * m + r;
      if (den < 0.0) delta = std::clamp(0.5 * (l - r) / den, -0.5, 0.5);
    }
    line.found = line.prominence_db >= threshold;
    if (line.found) line.frequency_hz = (static_cast<double>(kp) + delta) * df;
    return line;
  }
};

}  // namespace

const char* window_name(Window w) {
  switch (w) {
    case Window::rectangular: return "rectangular";
    case Window::hann: return "hann";
    case Window::hamming: return "hamming";
    case Window::blackman: return "blackman";
  }
  return "unknown";
}

Window window_from_name(const std::string& name) {
  for (Window w : {Window::rectangular, Window::hann, Window::hamming, Window::blackman}) {
    if (name == window_name(w)) return w;
  }
  throw std::invalid_argument("unknown window '" + name + "'");
}

double Psd::bin_width() const {
  return frequency.size() > 1 ? frequency[1] - frequency[0] : 0.0;
}

double Psd::total_power() const {
  double acc = 0.0;
  for (double v : power) acc += v;
  return acc * bin_width();
}

std::size_t Psd::bin_of(double f_hz) const {
  const double df = bin_width();
  if (df <= 0.0 || f_hz <= 0.0) return 0;
  const auto k = static_cast<std::size_t>(std::llround(f_hz / df));
  return std::min(k, power.size() - 1);
}

Psd estimate_psd(const Trace& x, const PsdOptions& opt) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("estimate_psd: trace is empty");
  const std::size_t seg = opt.segment_len == 0 ? n : opt.segment_len;
  if (seg < 2) throw std::invalid_argument("estimate_psd: segment_len must be >= 2");
  if (seg > n) {
    throw std::invalid_argument("estimate_psd: segment_len " + std::to_string(seg) +
                                " exceeds trace length " + std::to_string(n));
  }
  if (!(opt.overlap >= 0.0 && opt.overlap < 1.0)) {
    throw std::invalid_argument("estimate_psd: overlap must lie in [0, 1)");
  }
  const auto overlap_samples =
      static_cast<std::size_t>(std::floor(opt.overlap * static_cast<double>(seg)));
  const std::size_t step = std::max<std::size_t>(1, seg - overlap_samples);
  const std::size_t n_seg = 1 + (n - seg) / step;

  const auto w = make_window(opt.window, seg);
  double w_energy = 0.0;
  for (double v : w) w_energy += v * v;
  const double fs = x.sample_rate();

  RealFft fft(seg);
  Psd out;
  out.window = opt.window;
  out.segment_len = seg;
  out.overlap = opt.overlap;
  out.n_segments = n_seg;
  out.power.assign(fft.spectrum_size(), 0.0);
  out.frequency.resize(fft.spectrum_size());
  for (std::size_t k = 0; k < out.frequency.size(); ++k) {
    out.frequency[k] = fs * static_cast<double>(k) / static_cast<double>(seg);
  }

  std::vector<double> buf(seg);
  std::vector<std::complex<double>> spec;
  for (std::size_t s = 0; s < n_seg; ++s) {
    const std::size_t start = s * step;
    double mean = 0.0;
    if (opt.detrend_mean) {
      for (std::size_t j = 0; j < seg; ++j) mean += x.values[start + j];
      mean /= static_cast<double>(seg);
    }
    for (std::size_t j = 0; j < seg; ++j) buf[j] = (x.values[start + j] - mean) * w[j];
    fft.forward(buf, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) out.power[k] += std::norm(spec[k]);
  }

  const double scale = 1.0 / (fs * w_energy * static_cast<double>(n_seg));
  const bool has_nyquist = seg % 2 == 0;
  for (std::size_t k = 0; k < out.power.size(); ++k) {
    const bool edge = k == 0 || (has_nyquist && k == out.power.size() - 1);
    out.power[k] *= edge ? scale : 2.0 * scale;
  }
  return out;
}

Psd periodogram(const Trace& x, Window window) {
  PsdOptions opt;
  opt.window = window;
  opt.segment_len = 0;
  opt.overlap = 0.0;
  return estimate_psd(x, opt);
}

const SpectralLine* SidebandReport::find(int order, int side) const {
  for (const auto& s : sidebands) {
    if (s.order == order && s.side == side) return &s;
  }
  return nullptr;
}

int SidebandReport::found_count() const {
  int n = 0;
  for (const auto& s : sidebands) n += s.found ? 1 : 0;
  return n;
}

SidebandReport detect_sidebands(const Psd& p, double f_main, double f_axion, int n_max,
                                const SidebandOptions& opt) {
  if (p.size() < 4) throw std::invalid_argument("detect_sidebands: PSD too short");
  if (n_max < 0) throw std::invalid_argument("detect_sidebands: n_max must be >= 0");
  if (opt.search_bins < 0 || opt.power_half_width < 0) {
    throw std::invalid_argument("detect_sidebands: negative bin widths");
  }
  const double df = p.bin_width();
  const auto guard = static_cast<std::size_t>(opt.search_bins + opt.power_half_width);
  if (!(f_axion > 2.0 * static_cast<double>(guard) * df)) {
    throw std::invalid_argument(
        "detect_sidebands: axion frequency is not resolvable on this PSD grid (" +
        std::to_string(f_axion) + " Hz vs bin width " + std::to_string(df) + " Hz)");
  }

  LineSearch ls{p, std::vector<bool>(p.size(), false),
                static_cast<std::size_t>(opt.search_bins),
                static_cast<std::size_t>(opt.power_half_width),
                std::max<std::size_t>(16, static_cast<std::size_t>(
                                              std::llround(0.5 * f_axion / df))),
                kRoundoffFloor * p.total_power() / p.frequency.back()};
  const double nyq = p.frequency.back();
  for (int n = -(n_max + 1); n <= n_max + 1; ++n) {
    const double f = f_main + n * f_axion;
    if (f < 0.0 || f > nyq) continue;
    const std::size_t c = p.bin_of(f);
    const std::size_t lo = c > guard ? c - guard : 0;
    const std::size_t hi = std::min(p.size() - 1, c + guard);
    for (std::size_t k = lo; k <= hi; ++k) ls.masked[k] = true;
  }

  SidebandReport r;
  r.bin_width = df;
  r.carrier = ls.measure(f_main, 0, 0, opt.prominence_db);
  r.noise_floor = ls.floor_around(p.bin_of(f_main));
  for (int n = 1; n <= n_max; ++n) {
    r.sidebands.push_back(ls.measure(f_main - n * f_axion, n, -1, opt.prominence_db));
    r.sidebands.push_back(ls.measure(f_main + n * f_axion, n, +1, opt.prominence_db));
  }
  return r;
}

std::string sideband_report_to_json(const SidebandReport& r) {
  auto line = [](const SpectralLine& s) {
    return nlohmann::json{{"order", s.order},
                          {"side", s.side},
                          {"predicted_hz", s.predicted_hz},
                          {"frequency_hz", s.frequency_hz},
                          {"power", s.power},
                          {"prominence_db", s.prominence_db},
                          {"found", s.found}};
  };
  nlohmann::json j;
  j["carrier"] = line(r.carrier);
  j["sidebands"] = nlohmann::json::array();
  for (const auto& s : r.sidebands) j["sidebands"].push_back(line(s));
  j["noise_floor_per_hz"] = r.noise_floor;
  j["bin_width_hz"] = r.bin_width;
  return j.dump(2);
}

std::vector<double> cumulative_power(const Psd& p) {
  std::vector<double> c(p.size(), 0.0);
  for (std::size_t k = 1; k < p.size(); ++k) {
    c[k] = c[k - 1] + 0.5 * (p.power[k - 1] + p.power[k]);
  }
  const double total = c.empty() ? 0.0 : c.back();
  if (total <= 0.0) return std::vector<double>(p.size(), 0.0);
  for (double& v : c) v /= total;
  return c;
}

double DynamicSnr::mean_db() const {
  if (db.empty()) return 0.0;
  double acc = 0.0;
  for (double v : db) acc += v;
  return acc / static_cast<double>(db.size());
}

double DynamicSnr::min_db() const {
  return db.empty() ? 0.0 : *std::min_element(db.begin(), db.end());
}

double DynamicSnr::max_db() const {
  return db.empty() ? 0.0 : *std::max_element(db.begin(), db.end());
}

DynamicSnr dynamic_snr(const Trace& x, const DynamicSnrOptions& opt) {
  if (opt.window < 16) throw std::invalid_argument("dynamic_snr: window must be >= 16");
  if (opt.hop < 1) throw std::invalid_argument("dynamic_snr: hop must be >= 1");
  if (opt.window > x.size()) {
    throw std::invalid_argument("dynamic_snr: window longer than trace");
  }
  const auto& [sl, sh] = opt.signal_band;
  const auto& [nl, nh] = opt.noise_band;
  const bool identical = opt.signal_band == opt.noise_band;
  if (!identical && sl < nh && nl < sh) {
    throw std::invalid_argument("dynamic_snr: signal and noise bands overlap");
  }

  const double fs = x.sample_rate();
  BandpassSpec sspec{sl, sh, opt.filter_order, FilterFamily::butterworth};
  BandpassSpec nspec{nl, nh, opt.filter_order, FilterFamily::butterworth};
  const Trace s = filter_zero_phase(x, design_bandpass(sspec, fs));
  const Trace n = identical ? s : filter_zero_phase(x, design_bandpass(nspec, fs));

  auto variance = [&](const std::vector<double>& v, std::size_t start) {
    double mean = 0.0;
    for (std::size_t j = 0; j < opt.window; ++j) mean += v[start + j];
    mean /= static_cast<double>(opt.window);
    double acc = 0.0;
    for (std::size_t j = 0; j < opt.window; ++j) {
      const double d = v[start + j] - mean;
      acc += d * d;
    }
    return acc / static_cast<double>(opt.window);
  };

  DynamicSnr out;
  for (std::size_t start = 0; start + opt.window <= x.size(); start += opt.hop) {
    out.time.push_back(x.grid.time(start) +
                       0.5 * x.grid.dt * static_cast<double>(opt.window - 1));
    out.db.push_back(power_ratio_db(variance(s.values, start), variance(n.values, start)));
  }
  return out;
}

DynamicSnrOptions lower_sideband_bands(double f_main, double f_axion,
                                       double width_fraction) {
  if (!(width_fraction > 0.0 && width_fraction < 0.5)) {
    throw std::invalid_argument("lower_sideband_bands: width_fraction must lie in (0, 0.5)");
  }
  DynamicSnrOptions o;
  const double half = 0.5 * width_fraction * f_axion;
  const double sc = f_main - f_axion;
  const double nc = f_main - 1.5 * f_axion;
  o.signal_band = {sc - half, sc + half};
  o.noise_band = {nc - half, nc + half};
  return o;
}

double power_ratio_db(double num, double den) {
  if (num == 0.0 && den == 0.0) return 0.0;
  if (den == 0.0) return kSnrSaturatedDb;
  if (num == 0.0) return -kSnrSaturatedDb;
  return std::clamp(10.0 * std::log10(num / den), -kSnrSaturatedDb, kSnrSaturatedDb);
}

double snr_db(double amplitude_ratio) {
  if (!(amplitude_ratio >= 0.0)) {
    throw std::invalid_argument("snr_db: ratio must be >= 0");
  }
  if (amplitude_ratio == 0.0) return -kSnrSaturatedDb;
  return 20.0 * std::log10(amplitude_ratio);
}

}  // namespace axsim
