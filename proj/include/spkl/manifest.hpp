#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spkl {

std::string sha256_hex(std::string_view data);
/// Throws DataError if the file cannot be read.
std::string file_digest(const std::filesystem::path& path);

/// Provenance of one stage run: what it read, under which settings, what it wrote.
struct ManifestEntry {
  std::string stage;
  std::string config_digest;
  std::vector<std::pair<std::string, std::string>> inputs;   ///< file name -> digest
  std::vector<std::pair<std::string, std::string>> outputs;  ///< file name -> digest

  std::string to_line() const;
  static ManifestEntry parse(const std::string& line);
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// manifest.tsv in a stage output directory; one line per stage, rewritten when
/// the stage reruns.
class Manifest {
 public:
  static Manifest load(const std::filesystem::path& dir);
  void record(ManifestEntry entry);
  void save(const std::filesystem::path& dir) const;
  const std::vector<ManifestEntry>& entries() const { return entries_; }
  const ManifestEntry* find(const std::string& stage) const;

 private:
  std::vector<ManifestEntry> entries_;
};

}  // namespace spkl
