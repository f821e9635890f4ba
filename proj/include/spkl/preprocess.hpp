#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spkl/ingest.hpp"
#include "spkl/types.hpp"

namespace spkl {

/// A cleaned comment: ordered lowercase tokens plus author/audience labels.
struct TokenDoc {
  std::string id;
  std::string author;
  Group group = Group::A;
  Context context = Context::Single;
  std::vector<std::string> tokens;

  friend bool operator==(const TokenDoc&, const TokenDoc&) = default;
};

/// Lowercases, strips URLs, deletes apostrophes in place and splits on every
/// other non-alphanumeric ASCII character. Bytes >= 0x80 (UTF-8 letters) are
/// kept as word characters, except the typographic apostrophe U+2019 which is
/// deleted like ASCII '.
std::vector<std::string> tokenize(std::string_view body);

/// Set of lowercase words removed from token streams.
class StopList {
 public:
  StopList() = default;

  /// The bundled English function-word list plus the contraction additions.
  static StopList bundled();
  /// One entry per line; blank lines and lines starting with '#' are ignored.
  static StopList from_file(const std::filesystem::path& path);
  static StopList from_text(std::string_view text);

  void add(std::string_view word);
  void merge(const StopList& other);
  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const { return words_.size(); }
  /// Sorted entries.
  std::vector<std::string> entries() const;

 private:
  std::unordered_set<std::string> words_;
};

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens,
                                          const StopList& stoplist);

inline constexpr char kPhraseJoiner = '_';

/// Bigram collocation model. A pair (a, b) is merged into "a_b" when
///   (count(ab) - min_count) * V / (count(a) * count(b)) > threshold,
/// V being the number of distinct unigrams.
class PhraseModel {
 public:
  PhraseModel() = default;

  std::size_t min_count() const { return min_count_; }
  double threshold() const { return threshold_; }
  std::size_t vocabulary_size() const { return unigrams_.size(); }

  std::uint64_t unigram_count(const std::string& w) const;
  std::uint64_t bigram_count(const std::string& a, const std::string& b) const;
  double score(const std::string& a, const std::string& b) const;
  bool merges(const std::string& a, const std::string& b) const;
  std::size_t phrase_count() const { return phrases_.size(); }

  /// One greedy left-to-right merging pass.
  std::vector<std::string> apply(std::span<const std::string> tokens) const;

  friend PhraseModel fit_phrases(std::span<const std::vector<std::string>> corpus,
                                 std::size_t min_count, double threshold);

 private:
  static std::string pair_key(std::string_view a, std::string_view b);

  std::size_t min_count_ = 5;
  double threshold_ = 10.0;
  std::unordered_map<std::string, std::uint64_t> unigrams_;
  std::unordered_map<std::string, std::uint64_t> bigrams_;
  std::unordered_set<std::string> phrases_;
};

/// Counts unigrams/bigrams over `corpus` and records every bigram scoring above
/// `threshold`. Throws ConfigError if min_count is 0.
PhraseModel fit_phrases(std::span<const std::vector<std::string>> corpus, std::size_t min_count,
                        double threshold);

/// Maps a token to its dictionary form.
class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::string lemma(std::string_view token) const = 0;
};

/// Exception table followed by ordered suffix rules (ies->y, sses->ss, plural s,
/// -ing, -ed), applied until a fixpoint so that lemma(lemma(t)) == lemma(t).
class RuleLemmatizer final : public Lemmatizer {
 public:
  RuleLemmatizer() = default;
  explicit RuleLemmatizer(std::unordered_map<std::string, std::string> exceptions);

  /// Uses the bundled exception table.
  static RuleLemmatizer bundled();
  /// "surface TAB lemma" per line.
  static RuleLemmatizer from_file(const std::filesystem::path& path);
  static RuleLemmatizer from_text(std::string_view text);

  std::string lemma(std::string_view token) const override;
  std::size_t exception_count() const { return exceptions_.size(); }

 private:
  std::string step(const std::string& token) const;

  std::unordered_map<std::string, std::string> exceptions_;
};

std::vector<std::string> lemmatize(std::span<const std::string> tokens, const Lemmatizer& lemmatizer);
std::vector<std::string> lemmatize(std::span<const std::string> tokens);

struct PreprocessOptions {
  std::size_t phrase_min_count = 5;
  double phrase_threshold = 10.0;
  StopList stoplist = StopList::bundled();
  std::shared_ptr<const Lemmatizer> lemmatizer = std::make_shared<RuleLemmatizer>(RuleLemmatizer::bundled());
};

/// Documents that became empty at each stage.
struct CleanStats {
  std::size_t input_docs = 0;
  std::size_t empty_after_tokenize = 0;
  std::size_t empty_after_stopwords = 0;
  std::size_t output_docs = 0;
  std::size_t phrases = 0;
};

/// tokenize -> phrases -> stopwords -> lemmatize over every cohort comment,
/// dropping documents left without tokens. Output order is (author, venue, id).
std::vector<TokenDoc> clean_corpus(const Cohort& cohort, const PreprocessOptions& options = {},
                                   CleanStats* stats = nullptr);

}  // namespace spkl
