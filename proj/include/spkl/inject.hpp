#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spkl/preprocess.hpp"
#include "spkl/random.hpp"
#include "spkl/types.hpp"

namespace spkl {

/// Reserved prefix; the tokenizer treats ':' as a separator so no natural token carries it.
inline constexpr std::string_view kSpeakerPrefix = "spk::";

/// Identity of one author in one audience context, rendered "spk::<author>::<context>".
struct SpeakerToken {
  std::string author;
  Context context = Context::Single;

  std::string render() const;
  static std::optional<SpeakerToken> parse(std::string_view token);

  friend auto operator<=>(const SpeakerToken&, const SpeakerToken&) = default;
};

inline bool is_speaker_token(std::string_view token) { return token.starts_with(kSpeakerPrefix); }

/// Inserts the document's speaker token at an index drawn uniformly from
/// {0, ..., n}. Throws DataError on an empty document.
TokenDoc inject_speaker(const TokenDoc& doc, Rng& rng, std::size_t* position = nullptr);

/// Injects every document using a per-document substream derived from
/// (seed, author, context, id), so the output does not depend on the order of
/// `docs` or on how the work is split. Output is sorted by (author, context, id).
std::vector<TokenDoc> inject_corpus(std::vector<TokenDoc> docs, std::uint64_t seed);

/// Removes the (single) speaker token; the inverse of inject_speaker.
TokenDoc strip_speaker(const TokenDoc& doc);

/// One document per line, tokens joined by single spaces.
void write_corpus_text(std::ostream& out, std::span<const TokenDoc> docs);
void write_corpus_text(const std::filesystem::path& path, std::span<const TokenDoc> docs);
std::vector<std::vector<std::string>> read_corpus_text(std::istream& in);
std::vector<std::vector<std::string>> read_corpus_text(const std::filesystem::path& path);

/// Per-speaker bookkeeping emitted next to the injected corpus.
struct SpeakerInfo {
  std::string token;
  std::string author;
  Group group = Group::A;
  Context context = Context::Single;
  std::size_t documents = 0;

  GroupKey key() const { return {group, context}; }
  friend bool operator==(const SpeakerInfo&, const SpeakerInfo&) = default;
};

/// Distinct speakers of a corpus, sorted by token.
std::vector<SpeakerInfo> speakers_of(std::span<const TokenDoc> docs);

/// TSV: token, author, group, context, documents.
void write_speakers(const std::filesystem::path& path, std::span<const SpeakerInfo> speakers);
std::vector<SpeakerInfo> read_speakers(const std::filesystem::path& path);

}  // namespace spkl
