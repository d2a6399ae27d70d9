#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "axsim/spectral.hpp"
#include "axsim/trace.hpp"

namespace axsim {

enum class TraceFormat { csv, bin };

TraceFormat trace_format_from_name(const std::string& name);
const char* trace_format_extension(TraceFormat f);

/// CSV with header "time_s,value" and one row per sample, 17 significant
/// digits so values read back bit-exactly.
void write_trace_csv(const std::string& path, const Trace& t);
Trace read_trace_csv(const std::string& path);

/// Binary container, all fields little-endian:
///   char[4] "AXTR", u32 version (1), u64 seed, u64 n_samples,
///   f64 sample_rate_hz, f64 t0_s, then n_samples f64 values.
inline constexpr std::uint32_t kTraceBinVersion = 1;
void write_trace_bin(const std::string& path, const Trace& t);
Trace read_trace_bin(const std::string& path);

void write_trace(const std::string& path_without_ext, const Trace& t, TraceFormat f);

void write_psd_csv(const std::string& path, const Psd& p);
void write_cumulative_csv(const std::string& path, const Psd& p,
                          const std::vector<double>& cumulative);
void write_dynamic_snr_csv(const std::string& path, const DynamicSnr& s);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

}  // namespace axsim
