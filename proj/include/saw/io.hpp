#pragma once

// On-disk formats.
//
// Count cache (binary, little-endian):
//   "SAWCOUNT" | u32 version | u32 d | u32 L | u32 class (0 all, 1 bridge,
//   2 irreducible) | u64 endpoint count | per endpoint, in lexicographic
//   order: d x i64 coordinates, (L + 1) x (u64 low, u64 high) counts.
//
// CSV files use a header row, ',' separators, '.' decimals and LF line ends.
// Doubles are printed with 17 significant digits so they round-trip.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "saw/count_table.hpp"
#include "saw/renewal.hpp"
#include "saw/skeleton.hpp"
#include "saw/stats.hpp"

namespace saw::io {

inline constexpr std::uint32_t kCountCacheVersion = 1;

std::string format_double(double v);

std::string encode_count_table(const CountTable& table);
CountTable decode_count_table(const std::string& bytes);
// Columns x1..xd, N, count; one row per nonzero entry.
std::string count_table_csv(const CountTable& table);

nlohmann::json step_law_to_json(const StepLaw& law);
StepLaw step_law_from_json(const nlohmann::json& j);

// Columns replicate, k, step_index, t, y_1..y_{d-1}.
std::string skeletons_csv(const std::vector<Skeleton>& skeletons);
std::vector<Skeleton> parse_skeletons_csv(const std::string& text);

// Columns replicate, t, Y_1..Y_{d-1}; grid rows only.
std::string process_csv(const Ensemble& ensemble);
Ensemble parse_process_csv(const std::string& text, Coord n);

// FNV-1a, 64 bit.
std::uint64_t content_hash(const std::string& bytes);
std::string hex64(std::uint64_t v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace saw::io
