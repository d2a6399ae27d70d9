#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace axsim {

/// Independent, reproducible generator for one named consumer of a master
/// seed (e.g. one noise channel). Streams with different labels are
/// decorrelated through SplitMix64 mixing of (seed, label hash).
std::mt19937_64 substream(std::uint64_t master_seed, std::string_view label);

/// Seed derived the same way, for handing to another seeded component.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view label);

}  // namespace axsim
