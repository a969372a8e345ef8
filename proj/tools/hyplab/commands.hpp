#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hyplab/experiment.hpp"
#include "hyplab/parallel.hpp"

namespace hyplab::cli {

enum class Format { csv, json };

struct GlobalConfig {
  unsigned threads = 1;
  std::string cache_dir;  // empty: no cache
  Format format = Format::csv;
  std::uint64_t seed = 20240601;
  double epsilon = 0.1;
  std::uint64_t work_cap = 10'000'000;

  ComputeOptions compute() const;
};

/// Thrown for bad command-line input that parsing alone cannot catch.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses "1000", "1e6", "2.5e3"; the value must be a non-negative integer.
std::uint64_t parse_count(const std::string& text);
/// Comma-separated parse_count values.
std::vector<std::uint64_t> parse_count_list(const std::string& text);

struct EntryChoice {
  std::string name;  // registry family name or function alias, may be empty
  int k = 0;
  std::string spec;  // raw canonical spec, used when name is empty
};

struct ShortsumArgs {
  EntryChoice what;
  std::string x, y;
  std::string method = "sieve";
  std::optional<double> T;
};

struct DeltaArgs {
  std::string n;
  int r = 2;
  std::optional<std::string> lemma5_N;
};

struct VerifyArgs {
  EntryChoice what;
  std::string xgrid;
  std::string y_rule = "geomean";
  std::string ys;
};

struct EnvelopesArgs {
  std::string which;
  int m = 1;
  int r = 2;
  std::string grid = "small";
  std::optional<std::string> xs;
  std::optional<std::string> Hs;
  std::size_t points = 1000;
  std::string spec = "tau_m(2)";
};

int cmd_shortsum(const GlobalConfig& g, const ShortsumArgs& a, std::ostream& out);
int cmd_delta(const GlobalConfig& g, const DeltaArgs& a, std::ostream& out);
int cmd_verify(const GlobalConfig& g, const VerifyArgs& a, std::ostream& out);
int cmd_envelopes(const GlobalConfig& g, const EnvelopesArgs& a, std::ostream& out);
int cmd_selftest(const GlobalConfig& g, std::ostream& out);

CorollaryEntry resolve_entry(const EntryChoice& c);

}  // namespace hyplab::cli
