#pragma once

// On-disk cache of FloquetSpectrum.
//
// Layout (all integers and floats little-endian):
//   8  bytes  magic "TFIMFLQ\0"
//   u32       schema version
//   u32       reserved (0)
//   f64 x 3   h, dh, omega
//   u64 x 3   chain length, steps per period, mode count
//   per mode: f64 k, f64 mu, f64 period, f64 x 8 propagator (row-major, re/im)
//   u64       v_group count, then f64 x count
//   f64       v_max
//
// Doubles are stored bit-for-bit, so a hit reproduces the computed spectrum exactly.

#include <cstdint>
#include <filesystem>
#include <optional>

#include "tfim/floquet.hpp"

namespace tfim {

inline constexpr std::uint32_t kSpectrumSchemaVersion = 1;
inline constexpr const char* kCacheDirEnv = "TFIM_CACHE_DIR";

std::uint64_t spectrum_key(const DriveProtocol& drive, int chain_length, int steps);

std::filesystem::path spectrum_cache_file(const std::filesystem::path& dir, const DriveProtocol& drive,
                                          int chain_length, int steps);

void write_spectrum(const FloquetSpectrum& spectrum, const std::filesystem::path& file);

/// Empty when the file is missing, truncated, of another schema version, or
/// was written for different parameters.
std::optional<FloquetSpectrum> read_spectrum(const std::filesystem::path& file, const DriveProtocol& drive,
                                             int chain_length, int steps);

/// Cache directory from the environment, if set and nonempty.
std::optional<std::filesystem::path> cache_dir_from_env();

/// floquet_spectrum() behind the cache in `dir` (no caching when empty).
FloquetSpectrum cached_floquet_spectrum(const DriveProtocol& drive, const MomentumGrid& grid, int steps,
                                        const std::optional<std::filesystem::path>& dir);

}  // namespace tfim
