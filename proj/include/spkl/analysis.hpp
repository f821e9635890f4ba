#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spkl/embedding.hpp"
#include "spkl/error.hpp"
#include "spkl/ingest.hpp"
#include "spkl/inject.hpp"
#include "spkl/preprocess.hpp"
#include "spkl/types.hpp"

namespace spkl {

/// a.b / (|a| |b|), evaluated in double precision. Throws DataError on a
/// dimension mismatch or a zero vector.
template <typename A, typename B>
double cosine(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.size() != b.size()) throw DataError("cosine: dimension mismatch");
  const Eigen::VectorXd x = a.reshaped().template cast<double>();
  const Eigen::VectorXd y = b.reshaped().template cast<double>();
  const double nx = x.norm(), ny = y.norm();
  if (nx == 0.0 || ny == 0.0) throw DataError("cosine: zero vector");
  return std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
}

/// Componentwise mean of the rows of `vectors`. Throws DataError when empty.
template <typename M>
Eigen::VectorXd centroid(const Eigen::MatrixBase<M>& vectors) {
  if (vectors.rows() == 0) throw DataError("centroid: empty set");
  return vectors.template cast<double>().colwise().mean().transpose();
}

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation
  std::size_t count = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

Summary summarize(std::span<const double> values);

/// A labelled sample of cosine values.
struct SimilarityDistribution {
  std::string label;
  std::vector<double> values;
  Summary summary;

  friend bool operator==(const SimilarityDistribution&, const SimilarityDistribution&) = default;
};

SimilarityDistribution make_distribution(std::string label, std::vector<double> values);

struct PairwiseOptions {
  /// Above this many pairs a seeded uniform subsample of that size is drawn.
  std::uint64_t max_pairs = 10'000'000;
  std::uint64_t seed = 0;
};

/// Cosines of all n(n-1)/2 unordered pairs of rows. Throws DataError for n < 2.
SimilarityDistribution group_concentration_pairwise(const Eigen::MatrixXd& vectors,
                                                    std::string label = {},
                                                    const PairwiseOptions& options = {});

/// Cosine of each row with the group centroid. Throws DataError if the centroid
/// is zero or the group is empty.
SimilarityDistribution group_concentration_centroid(const Eigen::MatrixXd& vectors,
                                                    std::string label = {});

/// Cosine between the single- and mixed-context speaker vectors of `author`.
/// Throws DataError naming the missing context.
double audience_shift(const EmbeddingModel& model, const std::string& author);

/// Named keyword list locating a topic in the landscape.
struct TopicLexicon {
  std::string name;
  std::vector<std::string> keywords;
};

/// Sectioned text: "[topic]" header lines followed by one keyword per line.
std::vector<TopicLexicon> parse_lexicons(std::string_view text);
std::vector<TopicLexicon> load_lexicons(const std::filesystem::path& path);
void write_lexicons(const std::filesystem::path& path, std::span<const TopicLexicon> lexicons);

/// Runs keywords through the corpus normalisation (tokenize, lemmatize); a
/// multi-word keyword becomes a phrase joined with '_'.
TopicLexicon normalize_lexicon(const TopicLexicon& lexicon, const Lemmatizer& lemmatizer);

struct TopicAffinity {
  double value = 0.0;
  std::vector<std::string> found;
  std::vector<std::string> missing;
};

/// cosine(centroid(group rows), centroid(in-vocabulary keyword vectors)).
/// Throws DataError if no keyword is in the vocabulary or the group is empty.
TopicAffinity topic_affinity(const Eigen::MatrixXd& group_vectors, const TopicLexicon& lexicon,
                             const EmbeddingModel& model);

/// Rows = input vectors of the given tokens, in order.
Eigen::MatrixXd token_vectors(const EmbeddingModel& model, std::span<const std::string> tokens);

/// Speaker tokens of one analysis group that are present in the model.
std::vector<std::string> group_tokens(std::span<const SpeakerInfo> speakers, GroupKey key,
                                      const EmbeddingModel& model);

/// Keeps authors with at least `k` comments in both of their contexts.
Cohort min_activity_filter(const Cohort& cohort, std::size_t k = 5);

}  // namespace spkl
