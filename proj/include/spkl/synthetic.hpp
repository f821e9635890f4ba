#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spkl/analysis.hpp"
#include "spkl/ingest.hpp"
#include "spkl/preprocess.hpp"
#include "spkl/types.hpp"

namespace spkl {

/// Planted structure of a synthetic corpus. Each (group, context) cell has a
/// mixture over `topics` lexicons plus a final filler entry.
struct PlantSpec {
  std::size_t authors_per_group = 50;
  std::size_t comments_per_context = 5;
  double mean_length = 20.0;  ///< geometric comment length, floored at 3
  std::size_t topics = 10;
  std::size_t words_per_topic = 20;
  std::size_t filler_words = 50;
  /// Indexed by GroupKey::index(); each has topics + 1 entries summing to 1.
  std::array<std::vector<double>, 4> mixtures;
  /// Authors violating the cohort rules (both single venues, mixed only), plus
  /// bot and deleted comments, to exercise selection end to end.
  std::size_t decoy_authors = 0;

  std::string venue_a = "single_a";
  std::string venue_b = "single_b";
  std::string venue_mixed = "mixed";

  /// Throws ConfigError listing every violated constraint.
  void validate() const;
  VenueSpec venue_spec() const;
  const std::vector<double>& mixture(GroupKey key) const { return mixtures[key.index()]; }
};

std::string topic_word(std::size_t topic, std::size_t index);
std::string filler_word(std::size_t index);
std::string synthetic_author(Group group, std::size_t index);

struct GeneratedCorpus {
  std::vector<RawComment> comments;  ///< in the dump format's field layout
  std::map<std::string, Group> author_groups;  ///< ground truth of planted authors
  std::array<std::vector<double>, 4> mixtures;
  std::vector<TopicLexicon> lexicons;  ///< one per topic, all of its words
  std::vector<std::string> filler;
};

/// Per token: draw a topic from the author's (group, context) mixture, then a
/// word uniformly within that topic (or the filler list). Deterministic in seed.
GeneratedCorpus generate(const PlantSpec& spec, std::uint64_t seed);

/// Writes <dir>/corpus.jsonl, <dir>/lexicons.txt and <dir>/truth.json.
void write_generated(const GeneratedCorpus& corpus, const std::filesystem::path& dir);

/// Index of the largest topic weight (filler excluded).
std::size_t dominant_topic(const std::vector<double>& mixture);

}  // namespace spkl
