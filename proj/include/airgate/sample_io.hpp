#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "airgate/gesture.hpp"

namespace airgate {

inline constexpr const char* kSampleFormat = "airgate-samples";
inline constexpr int kSampleFormatVersion = 1;

struct SampleFile {
    std::vector<RawSample> samples;
    /// Optional "metadata" object from the header line (generator config echo).
    nlohmann::ordered_json metadata;
};

/// JSONL reader. The first non-empty line must be the format header. Malformed
/// lines are reported as DataError with their 1-based line number. An empty
/// file yields no samples.
SampleFile read_sample_file(std::istream& in);
SampleFile read_sample_file(const std::filesystem::path& path);
std::vector<RawSample> read_samples(const std::filesystem::path& path);

/// Writes the header line then one sample per line. Doubles are printed in
/// shortest round-trip form, so read(write(x)) == x exactly.
void write_samples(std::ostream& out, std::span<const RawSample> samples,
                   const nlohmann::ordered_json& metadata = nullptr);
/// Writes to a temporary sibling file and renames it into place.
void write_samples(const std::filesystem::path& path, std::span<const RawSample> samples,
                   const nlohmann::ordered_json& metadata = nullptr);

nlohmann::ordered_json sample_to_json(const RawSample& sample);
RawSample sample_from_json(const nlohmann::json& j);

/// SHA-256 (hex) over a fixed-precision text rendering of the samples, in order.
/// Stable across platforms whose floating-point results agree to ~10 significant digits.
std::string content_hash(std::span<const RawSample> samples);
std::string sha256_hex(std::string_view bytes);

/// Writes `contents` to `path` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace airgate
