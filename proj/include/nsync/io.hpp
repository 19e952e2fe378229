#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsync/objective.hpp"
#include "nsync/sampling.hpp"

namespace nsync {

/// Instance files are JSON documents with keys "A" (array of rows), "b",
/// "gamma", "v". Scheme files carry "n", "tau", "sets" (1-based index
/// arrays) and "q"; "q" may be omitted where only the sets matter (probability
/// design reads sets and writes q). All loaders raise std::runtime_error with
/// the file name and the offending field or parse position.

ProblemSpec load_instance(const std::string& path);
void save_instance(const ProblemSpec& prob, const std::string& path);

SamplingScheme load_scheme(const std::string& path);
void save_scheme(const SamplingScheme& scheme, const std::string& path);

struct SetsFile {
  int n = 0;
  int tau = 0;
  std::vector<IndexSet> sets;
  std::optional<Vector> q;
};

SetsFile load_sets(const std::string& path);

/// Shortest round-trip decimal form of a double (std::to_chars), used for
/// every number we write so outputs are byte-deterministic.
std::string format_double(double value);

/// FNV-1a over the dimensions and raw little-endian bits of A, b, gamma, v.
std::string instance_hash(const ProblemSpec& prob);

/// Buffered CSV writer: "# key: value" metadata lines first, then the header,
/// then rows. Content is held in memory and written on save() so a failed run
/// leaves no partial file.
class CsvWriter {
 public:
  void metadata(const std::string& key, const std::string& value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void save(const std::string& path) const;
  const std::string& content() const { return buffer_; }

 private:
  std::string buffer_;
  bool header_written_ = false;
};

}  // namespace nsync
