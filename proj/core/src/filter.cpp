#include "axsim/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "axsim/error.hpp"

namespace axsim {
namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

cplx bilinear(cplx s, double fs) {
  const double k = 2.0 * fs;
  return (k + s) / (k - s);
}

Biquad section_from_poles(cplx p1, cplx p2) {
  Biquad q;
  q.b = {1.0, 0.0, -1.0};  // zeros at z = 1 and z = -1
  q.a = {1.0, -(p1 + p2).real(), (p1 * p2).real()};
  return q;
}

cplx biquad_response(const Biquad& q, cplx zinv) {
  const cplx num = q.b[0] + zinv * (q.b[1] + zinv * q.b[2]);
  const cplx den = q.a[0] + zinv * (q.a[1] + zinv * q.a[2]);
  return num / den;
}

struct SectionState {
  double s1 = 0.0;
  double s2 = 0.0;
};

void run_cascade(const std::vector<Biquad>& sections, std::vector<double>& x,
                 std::vector<SectionState> state) {
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const auto& q = sections[i];
    double s1 = state[i].s1;
    double s2 = state[i].s2;
    for (double& v : x) {
      const double in = v;
      const double y = q.b[0] * in + s1;
      s1 = q.b[1] * in - q.a[1] * y + s2;
      s2 = q.b[2] * in - q.a[2] * y;
      v = y;
    }
  }
}

// Per-section state for a constant input of 1 held forever.
std::vector<SectionState> steady_state(const std::vector<Biquad>& sections) {
  std::vector<SectionState> zi(sections.size());
  double input = 1.0;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const auto& q = sections[i];
    const double gain = (q.b[0] + q.b[1] + q.b[2]) / (q.a[0] + q.a[1] + q.a[2]);
    const double y = gain * input;
    zi[i].s1 = y - q.b[0] * input;
    zi[i].s2 = q.b[2] * input - q.a[2] * y;
    input = y;
  }
  return zi;
}

std::vector<SectionState> scaled(std::vector<SectionState> zi, double k) {
  for (auto& s : zi) {
    s.s1 *= k;
    s.s2 *= k;
  }
  return zi;
}

void require_rate(const Trace& x, const FilterRealization& h) {
  const double fs = x.sample_rate();
  if (std::fabs(fs - h.sample_rate) > 1e-9 * h.sample_rate) {
    throw std::invalid_argument("filter: trace sample rate " + std::to_string(fs) +
                                " Hz does not match design rate " +
                                std::to_string(h.sample_rate) + " Hz");
  }
}

std::size_t measure_settling(const FilterRealization& h) {
  constexpr std::size_t kMaxSamples = 1u << 24;
  std::vector<SectionState> state(h.sections.size());
  double peak = 0.0;
  std::size_t last_above = 0;
  std::size_t quiet_run = 0;
  for (std::size_t k = 0; k < kMaxSamples; ++k) {
    double v = k == 0 ? 1.0 : 0.0;
    for (std::size_t i = 0; i < h.sections.size(); ++i) {
      const auto& q = h.sections[i];
      auto& s = state[i];
      const double y = q.b[0] * v + s.s1;
      s.s1 = q.b[1] * v - q.a[1] * y + s.s2;
      s.s2 = q.b[2] * v - q.a[2] * y;
      v = y;
    }
    const double e = v * v;
    peak = std::max(peak, e);
    if (e >= 1e-6 * peak) {
      last_above = k;
      quiet_run = 0;
    } else if (++quiet_run > 64 && quiet_run > k / 2) {
      // Impulse response has decayed for at least as long as it rang.
      return last_above + 1;
    }
  }
  throw NumericError("filter impulse response does not settle");
}

}  // namespace

void BandpassSpec::validate(double sample_rate) const {
  require(sample_rate > 0.0, "filter: sample rate must be > 0");
  require(order >= 1, "filter.order must be >= 1");
  require(f_low > 0.0, "filter.f_low must be > 0");
  require(f_low < f_high, "filter: f_low must be below f_high");
  require(f_high < 0.5 * sample_rate, "filter.f_high must be below Nyquist (" +
                                          std::to_string(0.5 * sample_rate) + " Hz)");
}

BandpassSpec BandpassSpec::around(double f_main, double low_factor, double high_factor,
                                  int order) {
  BandpassSpec s;
  s.f_low = low_factor * f_main;
  s.f_high = high_factor * f_main;
  s.order = order;
  return s;
}

cplx FilterRealization::response(double f_hz) const {
  const cplx zinv = std::polar(1.0, -2.0 * kPi * f_hz / sample_rate);
  cplx h = 1.0;
  for (const auto& q : sections) h *= biquad_response(q, zinv);
  return h;
}

double FilterRealization::magnitude_db(double f_hz) const {
  return 20.0 * std::log10(std::abs(response(f_hz)));
}

double FilterRealization::max_pole_radius() const {
  double r = 0.0;
  for (const auto& q : sections) {
    const cplx disc = std::sqrt(cplx(q.a[1] * q.a[1] - 4.0 * q.a[2], 0.0));
    r = std::max({r, std::abs((-q.a[1] + disc) / 2.0), std::abs((-q.a[1] - disc) / 2.0)});
  }
  return r;
}

bool FilterRealization::stable() const { return max_pole_radius() < 1.0; }

// Analog Butterworth prototype, low-pass to band-pass transform on
// prewarped edges, bilinear map, conjugate pairs grouped into biquads.
FilterRealization design_bandpass(const BandpassSpec& spec, double sample_rate) {
  spec.validate(sample_rate);
  const double fs = sample_rate;
  const double wl = 2.0 * fs * std::tan(kPi * spec.f_low / fs);
  const double wh = 2.0 * fs * std::tan(kPi * spec.f_high / fs);
  const double bw = wh - wl;
  const double w0sq = wl * wh;
  const int n = spec.order;

  std::vector<cplx> upper;
  std::vector<double> real_poles;
  for (int k = 0; k < n; ++k) {
    const cplx p = std::polar(1.0, kPi * (2.0 * k + n + 1.0) / (2.0 * n));
    const cplx pb = p * bw;
    const cplx root = std::sqrt(pb * pb - 4.0 * w0sq);
    for (const cplx s : {(pb + root) / 2.0, (pb - root) / 2.0}) {
      const cplx z = bilinear(s, fs);
      if (std::fabs(z.imag()) <= 1e-12 * std::abs(z)) {
        real_poles.push_back(z.real());
      } else if (z.imag() > 0.0) {
        upper.push_back(z);
      }
    }
  }
  std::sort(upper.begin(), upper.end(),
            [](cplx a, cplx b) { return std::arg(a) < std::arg(b); });
  std::sort(real_poles.begin(), real_poles.end());
  if (real_poles.size() % 2 != 0 || upper.size() + real_poles.size() / 2 !=
                                        static_cast<std::size_t>(n)) {
    throw NumericError("band-pass design produced an unpaired pole");
  }

  FilterRealization h;
  h.spec = spec;
  h.sample_rate = fs;
  h.center_hz = fs / kPi * std::atan(std::sqrt(w0sq) / (2.0 * fs));
  for (const cplx z : upper) h.sections.push_back(section_from_poles(z, std::conj(z)));
  for (std::size_t i = 0; i < real_poles.size(); i += 2) {
    h.sections.push_back(section_from_poles(real_poles[i], real_poles[i + 1]));
  }
  const cplx zc = std::polar(1.0, -2.0 * kPi * h.center_hz / fs);
  for (auto& q : h.sections) {
    const double g = std::abs(biquad_response(q, zc));
    for (double& c : q.b) c /= g;
  }
  if (!h.stable()) throw NumericError("band-pass design is unstable");
  h.settling_samples = measure_settling(h);
  return h;
}

Trace filter_causal(const Trace& x, const FilterRealization& h) {
  require_rate(x, h);
  Trace out = x;
  run_cascade(h.sections, out.values, std::vector<SectionState>(h.sections.size()));
  return out;
}

std::size_t zero_phase_padding(const FilterRealization& h) {
  return 3 * h.settling_samples;
}

Trace filter_zero_phase(const Trace& x, const FilterRealization& h) {
  require_rate(x, h);
  const std::size_t n = x.size();
  const std::size_t pad = zero_phase_padding(h);
  if (n <= pad) {
    throw std::invalid_argument("filter_zero_phase: trace of " + std::to_string(n) +
                                " samples is too short for " + std::to_string(pad) +
                                " samples of edge padding");
  }
  const auto& v = x.values;
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * v[0] - v[i]);
  ext.insert(ext.end(), v.begin(), v.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * v[n - 1] - v[n - 1 - i]);

  const auto zi = steady_state(h.sections);
  run_cascade(h.sections, ext, scaled(zi, ext.front()));
  std::reverse(ext.begin(), ext.end());
  run_cascade(h.sections, ext, scaled(zi, ext.front()));
  std::reverse(ext.begin(), ext.end());

  Trace out = x;
  std::copy(ext.begin() + static_cast<std::ptrdiff_t>(pad),
            ext.begin() + static_cast<std::ptrdiff_t>(pad + n), out.values.begin());
  return out;
}

std::vector<double> impulse_response(const FilterRealization& h, std::size_t n) {
  std::vector<double> x(n, 0.0);
  if (n > 0) x[0] = 1.0;
  run_cascade(h.sections, x, std::vector<SectionState>(h.sections.size()));
  return x;
}

std::string filter_to_json(const FilterRealization& h) {
  nlohmann::json j;
  j["family"] = "butterworth";
  j["f_low_hz"] = h.spec.f_low;
  j["f_high_hz"] = h.spec.f_high;
  j["order"] = h.spec.order;
  j["sample_rate_hz"] = h.sample_rate;
  j["center_hz"] = h.center_hz;
  j["settling_samples"] = h.settling_samples;
  j["sections"] = nlohmann::json::array();
  for (const auto& q : h.sections) {
    j["sections"].push_back({{"b", q.b}, {"a", q.a}});
  }
  return j.dump(2);
}

FilterRealization filter_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("family").get<std::string>() != "butterworth") {
      throw std::invalid_argument("filter json: unsupported family");
    }
    FilterRealization h;
    h.spec.f_low = j.at("f_low_hz").get<double>();
    h.spec.f_high = j.at("f_high_hz").get<double>();
    h.spec.order = j.at("order").get<int>();
    h.sample_rate = j.at("sample_rate_hz").get<double>();
    h.center_hz = j.at("center_hz").get<double>();
    h.settling_samples = j.at("settling_samples").get<std::size_t>();
    for (const auto& s : j.at("sections")) {
      Biquad q;
      q.b = s.at("b").get<std::array<double, 3>>();
      q.a = s.at("a").get<std::array<double, 3>>();
      h.sections.push_back(q);
    }
    h.spec.validate(h.sample_rate);
    if (!h.stable()) throw std::invalid_argument("filter json: unstable sections");
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("filter json: ") + e.what());
  }
}

std::string sideband_retention_issue(const BandpassSpec& spec, double f_main,
                                     double f_axion) {
  const double lo = f_main - 2.0 * f_axion;
  const double hi = f_main + 2.0 * f_axion;
  if (lo >= spec.f_low && hi <= spec.f_high) return {};
  return "second-order sidebands [" + std::to_string(lo) + ", " + std::to_string(hi) +
         "] Hz fall outside the pass band [" + std::to_string(spec.f_low) + ", " +
         std::to_string(spec.f_high) + "] Hz";
}

double second_sideband_loss_db(const FilterRealization& h, double f_main, double f_axion) {
  double loss = 0.0;
  for (double f : {f_main - 2.0 * f_axion, f_main + 2.0 * f_axion}) {
    if (f <= 0.0 || f >= 0.5 * h.sample_rate) return std::numeric_limits<double>::infinity();
    loss = std::max(loss, -h.magnitude_db(f));
  }
  return loss;
}

void check_sideband_retention(const FilterRealization& h, double f_main, double f_axion,
                              double max_loss_db) {
  const double loss = second_sideband_loss_db(h, f_main, f_axion);
  if (loss <= max_loss_db) return;
  throw ConfigError("filter.f_low/filter.f_high, axion.mass_ev",
                    "second-order sidebands [" + std::to_string(f_main - 2.0 * f_axion) + ", " +
                        std::to_string(f_main + 2.0 * f_axion) + "] Hz are attenuated by " +
                        std::to_string(loss) + " dB by the pass band [" +
                        std::to_string(h.spec.f_low) + ", " + std::to_string(h.spec.f_high) +
                        "] Hz (limit " + std::to_string(max_loss_db) + " dB)");
}

}  // namespace axsim
