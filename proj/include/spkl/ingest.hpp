#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spkl/types.hpp"

namespace spkl {

/// One authored message, the ingestion unit.
struct RawComment {
  std::string id;
  std::string author;
  std::string venue;
  std::string body;
  std::int64_t created_utc = 0;

  friend bool operator==(const RawComment&, const RawComment&) = default;
};

enum class AudienceClass { SingleGenderA, SingleGenderB, Mixed };

std::optional<AudienceClass> parse_audience_class(std::string_view s);
std::string_view to_string(AudienceClass c);

/// Venue name -> audience class. Exactly one mixed venue, at least one single-gender venue.
class VenueSpec {
 public:
  VenueSpec() = default;
  explicit VenueSpec(std::map<std::string, AudienceClass> venues);

  /// Throws ConfigError listing every violated rule.
  void validate() const;

  std::optional<AudienceClass> classify(const std::string& venue) const;
  const std::string& mixed_venue() const;
  /// First venue (by name) of the given class, if any.
  std::optional<std::string> venue_of(AudienceClass c) const;
  const std::map<std::string, AudienceClass>& venues() const { return venues_; }

 private:
  std::map<std::string, AudienceClass> venues_;
};

struct LoadResult {
  std::vector<RawComment> comments;
  std::size_t skipped = 0;  ///< malformed lines
};

/// Reads newline-delimited dump records (fields id, author, subreddit, body, created_utc).
/// Throws DataError if the file cannot be opened.
LoadResult load_comments(const std::filesystem::path& path);
LoadResult parse_comments(std::istream& in);

/// Writes comments in the same dump format load_comments reads.
void write_comments(std::ostream& out, std::span<const RawComment> comments);
void write_comments(const std::filesystem::path& path, std::span<const RawComment> comments);

struct SelectOptions {
  std::string bot_author = "AutoModerator";
};

struct SelectStats {
  std::size_t bot_comments = 0;
  std::size_t deleted_comments = 0;
  std::size_t unknown_venue_comments = 0;
  std::size_t authors_in_both_single = 0;
  std::size_t authors_missing_context = 0;
  std::vector<std::string> warnings;
};

struct CohortAuthor {
  std::string author;
  Group group = Group::A;
  std::vector<RawComment> single;  ///< comments in the author's single-gender venue
  std::vector<RawComment> mixed;   ///< comments in the mixed venue

  const std::vector<RawComment>& comments(Context c) const {
    return c == Context::Single ? single : mixed;
  }
};

/// Dual-venue authors, sorted by name; each author's comments sorted by (venue, id).
struct Cohort {
  std::vector<CohortAuthor> authors;

  bool empty() const { return authors.empty(); }
  std::size_t comment_count() const;
  /// All retained comments in stable (author, venue, id) order.
  std::vector<RawComment> comments() const;
  const CohortAuthor* find(const std::string& author) const;
};

bool is_deletion_placeholder(const std::string& body);

/// Drops bot and deleted comments, authors in both single-gender venues and
/// authors lacking either a single-gender or a mixed comment. An empty result is
/// reported through `warning` rather than thrown.
Cohort select_cohort(std::span<const RawComment> comments, const VenueSpec& venues,
                     const SelectOptions& options = {}, SelectStats* stats = nullptr);

struct CohortSummary {
  std::array<std::size_t, 2> authors{};  ///< indexed by Group
  /// (venue, group) -> comment count; ordered for deterministic output.
  std::map<std::pair<std::string, Group>, std::size_t> comments;

  std::size_t total_authors() const { return authors[0] + authors[1]; }
  std::size_t total_comments() const;
};

CohortSummary cohort_summary(const Cohort& cohort);

}  // namespace spkl
