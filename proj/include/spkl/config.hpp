#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spkl/embedding.hpp"
#include "spkl/ingest.hpp"
#include "spkl/projection.hpp"
#include "spkl/synthetic.hpp"

namespace spkl {

/// Everything one run needs, read from a sectioned key = value file. Every key
/// except run.input and run.seed has a default.
struct RunConfig {
  std::filesystem::path source;  ///< the file this was read from
  std::filesystem::path input;
  std::filesystem::path output_dir = "out";
  std::filesystem::path lexicons;
  std::optional<std::uint64_t> seed;
  std::size_t min_activity = 5;

  VenueSpec venues;
  SelectOptions select;

  std::size_t phrase_min_count = 5;
  double phrase_threshold = 10.0;
  std::filesystem::path stoplist;        ///< replaces the bundled list when set
  std::filesystem::path extra_stopwords;  ///< added to the active list
  std::filesystem::path lemma_exceptions;

  TrainConfig train;
  bool export_text = false;

  std::uint64_t max_pairs = 10'000'000;
  std::size_t analyze_min_activity = 1;

  ProjectionConfig projection;
  bool keyword_overlay = true;

  PlantSpec plant;

  /// Checks values and that the paths `stage` reads exist; throws ConfigError
  /// listing every violation.
  void validate(const std::string& stage = "pipeline") const;
  std::uint64_t run_seed() const;
  /// Canonical "section.key=value" lines of every setting except file paths,
  /// which enter provenance through their content digests instead.
  std::string canonical() const;
};

/// Parses the configuration text; relative paths resolve against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Parses "w0 w1 ..." mixture weights.
std::vector<double> parse_weights(const std::string& text);

}  // namespace spkl
