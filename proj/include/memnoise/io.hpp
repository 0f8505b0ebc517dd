#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "memnoise/circuits.hpp"
#include "memnoise/noise.hpp"

namespace memnoise::io {

/// CSV export of a record: header `index,t,value`, one row per sample,
/// values printed with enough digits to round-trip exactly.
void write_record_csv(const noise::NoiseRecord& record, const std::filesystem::path& path);

/// Raw little-endian float64 samples plus a JSON sidecar (`<path>.json`)
/// carrying fs, band, psd_level, seed, stream and role.
void write_record_raw(const noise::NoiseRecord& record, std::uint64_t seed,
                      std::uint64_t stream, const std::filesystem::path& path);

/// Reads back a raw float64 record written by write_record_raw (samples only).
std::vector<double> read_raw_f64(const std::filesystem::path& path);

/// CSV export of a circuit trace: index,t,current,node_voltage,charge,power_a,power_b.
void write_trace_csv(const circuits::CircuitTrace& trace, double dt,
                     const std::filesystem::path& path);

/// Atomic text-file write: temp file in the same directory, then rename, so
/// partial runs never leave a corrupt output.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Shortest-round-trip decimal formatting for doubles.
std::string format_double(double value);

}  // namespace memnoise::io
