#include "spkl/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spkl/error.hpp"

namespace spkl {

Vocabulary Vocabulary::from_counts(std::vector<std::pair<std::string, std::uint64_t>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary v;
  v.tokens_.reserve(entries.size());
  v.counts_.reserve(entries.size());
  for (auto& [token, count] : entries) {
    if (count == 0) throw DataError("vocabulary count must be >= 1 for '" + token + "'");
    const auto id = static_cast<TokenId>(v.tokens_.size());
    if (!v.index_.emplace(token, id).second) throw DataError("duplicate vocabulary token '" + token + "'");
    v.tokens_.push_back(std::move(token));
    v.counts_.push_back(count);
  }
  return v;
}

std::optional<TokenId> Vocabulary::find(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::at(const std::string& token) const {
  auto id = find(token);
  if (!id) throw DataError("token not in vocabulary: " + token);
  return *id;
}

std::uint64_t Vocabulary::total_count() const {
  std::uint64_t n = 0;
  for (auto c : counts_) n += c;
  return n;
}

Vocabulary build_vocab(std::span<const std::vector<std::string>> corpus) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& doc : corpus) {
    for (const auto& t : doc) ++counts[t];
  }
  if (counts.empty()) throw DataError("cannot build a vocabulary from an empty corpus");
  return Vocabulary::from_counts({counts.begin(), counts.end()});
}

NegativeSampler::NegativeSampler(const Vocabulary& vocab, double power) {
  if (vocab.empty()) throw DataError("negative sampler needs a nonempty vocabulary");
  cdf_.resize(vocab.size());
  double total = 0.0;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    total += std::pow(static_cast<double>(vocab.count(static_cast<TokenId>(i))), power);
    cdf_[i] = total;
  }
  for (auto& c : cdf_) c /= total;
  cdf_.back() = 1.0;
}

double NegativeSampler::probability(TokenId id) const {
  return id == 0 ? cdf_[0] : cdf_[id] - cdf_[id - 1];
}

TokenId NegativeSampler::sample(Rng& rng) const {
  const double u = uniform01(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<TokenId>(it - cdf_.begin());
}

}  // namespace spkl
