#include "axsim/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "axsim/error.hpp"

namespace axsim {
namespace {

constexpr char kMagic[4] = {'A', 'X', 'T', 'R'};
constexpr std::size_t kHeaderBytes = 4 + 4 + 8 + 8 + 8 + 8;

template <typename T>
void put_le(std::string& buf, T v) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  buf.append(bytes.data(), bytes.size());
}

template <typename T>
T get_le(const char* p) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T v;
  std::memcpy(&v, bytes.data(), sizeof(T));
  return v;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

void close_checked(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw IoError("error while writing '" + path + "'");
}

// %.17g via snprintf: locale independent and round-trips doubles.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

TraceFormat trace_format_from_name(const std::string& name) {
  if (name == "csv") return TraceFormat::csv;
  if (name == "bin") return TraceFormat::bin;
  throw std::invalid_argument("unknown trace format '" + name + "' (csv|bin)");
}

const char* trace_format_extension(TraceFormat f) {
  return f == TraceFormat::csv ? ".csv" : ".bin";
}

void write_trace_csv(const std::string& path, const Trace& t) {
  std::string buf = "time_s,value\n";
  buf.reserve(t.size() * 48);
  for (std::size_t k = 0; k < t.size(); ++k) {
    buf += num(t.grid.time(k));
    buf += ',';
    buf += num(t.values[k]);
    buf += '\n';
  }
  write_text(path, buf);
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "time_s,value") {
    throw IoError("'" + path + "' is not a trace CSV (bad header)");
  }
  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError("malformed row in '" + path + "'");
    try {
      times.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw IoError("malformed row in '" + path + "': " + line);
    }
  }
  if (times.size() < 2) throw IoError("'" + path + "' holds fewer than two samples");
  TimeGrid g;
  g.t0 = times.front();
  g.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  g.n_samples = times.size();
  return Trace(g, std::move(values));
}

void write_trace_bin(const std::string& path, const Trace& t) {
  std::string buf;
  buf.reserve(kHeaderBytes + 8 * t.size());
  buf.append(kMagic, 4);
  put_le<std::uint32_t>(buf, kTraceBinVersion);
  put_le<std::uint64_t>(buf, t.seed);
  put_le<std::uint64_t>(buf, t.size());
  put_le<double>(buf, t.sample_rate());
  put_le<double>(buf, t.grid.t0);
  for (double v : t.values) put_le<double>(buf, v);
  auto out = open_out(path, std::ios::binary);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  close_checked(out, path);
}

Trace read_trace_bin(const std::string& path) {
  const std::string buf = read_text(path);
  if (buf.size() < kHeaderBytes || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw IoError("'" + path + "' is not an AXTR trace");
  }
  const char* p = buf.data() + 4;
  const auto version = get_le<std::uint32_t>(p);
  if (version != kTraceBinVersion) {
    throw IoError("'" + path + "': unsupported trace version " + std::to_string(version));
  }
  const auto seed = get_le<std::uint64_t>(p + 4);
  const auto n = get_le<std::uint64_t>(p + 12);
  const auto rate = get_le<double>(p + 20);
  const auto t0 = get_le<double>(p + 28);
  if (buf.size() != kHeaderBytes + 8 * n) {
    throw IoError("'" + path + "': size does not match sample count");
  }
  if (!(rate > 0.0)) throw IoError("'" + path + "': invalid sample rate");
  TimeGrid g;
  g.dt = 1.0 / rate;
  g.n_samples = n;
  g.t0 = t0;
  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) values[k] = get_le<double>(buf.data() + kHeaderBytes + 8 * k);
  return Trace(g, std::move(values), seed);
}

void write_trace(const std::string& path_without_ext, const Trace& t, TraceFormat f) {
  const std::string path = path_without_ext + trace_format_extension(f);
  if (f == TraceFormat::csv) {
    write_trace_csv(path, t);
  } else {
    write_trace_bin(path, t);
  }
}

void write_psd_csv(const std::string& path, const Psd& p) {
  std::string buf = "frequency_hz,power_per_hz\n";
  for (std::size_t k = 0; k < p.size(); ++k) {
    buf += num(p.frequency[k]) + ',' + num(p.power[k]) + '\n';
  }
  write_text(path, buf);
}

void write_cumulative_csv(const std::string& path, const Psd& p,
                          const std::vector<double>& cumulative) {
  if (cumulative.size() != p.size()) throw std::invalid_argument("cumulative size mismatch");
  std::string buf = "frequency_hz,cumulative_fraction\n";
  for (std::size_t k = 0; k < p.size(); ++k) {
    buf += num(p.frequency[k]) + ',' + num(cumulative[k]) + '\n';
  }
  write_text(path, buf);
}

void write_dynamic_snr_csv(const std::string& path, const DynamicSnr& s) {
  std::string buf = "time_s,snr_db\n";
  for (std::size_t k = 0; k < s.db.size(); ++k) {
    buf += num(s.time[k]) + ',' + num(s.db[k]) + '\n';
  }
  write_text(path, buf);
}

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path, std::ios::binary);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  close_checked(out, path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream os;
  os << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << static_cast<int>(md[i]);
  return os.str();
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_text(path)); }

}  // namespace axsim
