#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "hyplab/arith.hpp"

namespace hyplab::cli {

/// On-disk store of sieved windows. Files hold an 8-byte magic, a format
/// version, the key, little-endian fixed-width values and an FNV-1a checksum.
class SegmentCache {
 public:
  static constexpr std::uint32_t kVersion = 1;

  explicit SegmentCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// The stored table for (spec, lo, hi), or nothing when absent, stale or
  /// corrupt. Corruption is reported on standard error.
  std::optional<ValueTable> load(const FunctionSpec& spec, std::uint64_t lo, std::uint64_t hi) const;
  /// Best effort; write failures are reported on standard error.
  void store(const ValueTable& table) const;

  std::filesystem::path path_for(const FunctionSpec& spec, std::uint64_t lo, std::uint64_t hi) const;

 private:
  std::filesystem::path dir_;
};

std::string serialize_table(const ValueTable& table);
/// Throws hyplab::Error (io) on any mismatch.
ValueTable deserialize_table(const std::string& bytes, const FunctionSpec& spec, std::uint64_t lo, std::uint64_t hi);

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace hyplab::cli
