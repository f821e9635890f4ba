#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "spkl/random.hpp"

namespace spkl {

using TokenId = std::uint32_t;

/// Token <-> index bijection with corpus frequencies. Indices follow descending
/// count, ties broken lexicographically, so the assignment is a pure function of
/// the corpus multiset.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Builds from explicit (token, count) entries; re-sorts into canonical order.
  static Vocabulary from_counts(std::vector<std::pair<std::string, std::uint64_t>> entries);

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  std::optional<TokenId> find(const std::string& token) const;
  /// Throws DataError if absent.
  TokenId at(const std::string& token) const;
  bool contains(const std::string& token) const { return index_.contains(token); }
  const std::string& token(TokenId id) const { return tokens_[id]; }
  std::uint64_t count(TokenId id) const { return counts_[id]; }
  std::uint64_t total_count() const;
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.counts_ == b.counts_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, TokenId> index_;
};

/// Every distinct token with its frequency (no minimum count). Throws DataError on
/// an empty corpus.
Vocabulary build_vocab(std::span<const std::vector<std::string>> corpus);

/// Draws token ids with P(i) proportional to count(i)^power.
class NegativeSampler {
 public:
  explicit NegativeSampler(const Vocabulary& vocab, double power = 0.75);

  double probability(TokenId id) const;
  TokenId sample(Rng& rng) const;
  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

inline NegativeSampler build_negative_table(const Vocabulary& vocab, double power = 0.75) {
  return NegativeSampler(vocab, power);
}

}  // namespace spkl
