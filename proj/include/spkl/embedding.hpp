#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spkl/sgns.hpp"
#include "spkl/vocab.hpp"

namespace spkl {

struct TrainConfig {
  int dim = 200;
  int window = 15;  ///< fixed symmetric radius; never shrunk at random
  int negatives = 5;
  int epochs = 5;
  double lr_initial = 0.025;
  double lr_final = 0.0001;
  std::uint64_t seed = 1;
  int workers = 1;  ///< 1 = bit-reproducible; >1 = lock-free shared updates

  /// Throws ConfigError listing every violated constraint.
  void validate() const;
  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

using EmbeddingMatrix = RowMatrix<float>;

struct EmbeddingModel {
  Vocabulary vocab;
  EmbeddingMatrix input;   ///< |V| x dim, the token vectors used for analysis
  EmbeddingMatrix output;  ///< |V| x dim, context vectors
  TrainConfig config;
  std::vector<double> epoch_losses;  ///< mean per-pair loss of each epoch

  int dim() const { return static_cast<int>(input.cols()); }
  double final_loss() const { return epoch_losses.empty() ? 0.0 : epoch_losses.back(); }
  /// Input vector of `token`; throws DataError if absent.
  Eigen::VectorXd vector(const std::string& token) const;

  friend bool operator==(const EmbeddingModel&, const EmbeddingModel&) = default;
};

/// Number of (target, context) pairs one epoch generates: every ordered pair of
/// positions at distance 1..window inside a document.
std::uint64_t count_pairs(std::span<const std::vector<std::string>> corpus, int window);

struct TrainProgress {
  int epoch = 0;
  double mean_loss = 0.0;
  double learning_rate = 0.0;
};

using ProgressCallback = std::function<void(const TrainProgress&)>;

/// Skip-gram with negative sampling over `corpus` (one token list per document,
/// context never crosses documents). Learning rate decays linearly from
/// lr_initial to lr_final over the total pair count. Throws DataError on an
/// empty corpus and InvariantError if the loss becomes non-finite.
EmbeddingModel train(std::span<const std::vector<std::string>> corpus, const TrainConfig& config,
                     const ProgressCallback& progress = {});

/// Binary little-endian format: "SPKL", version, |V|, dim, vocabulary, input
/// rows, output rows, then a training metadata trailer.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(const EmbeddingModel& model, std::ostream& out);
void save_model(const EmbeddingModel& model, const std::filesystem::path& path);
EmbeddingModel load_model(std::istream& in);
EmbeddingModel load_model(const std::filesystem::path& path);

/// "<|V|> <dim>" header, then "token v1 ... vdim" per line (input vectors).
void export_text(const EmbeddingModel& model, std::ostream& out);
void export_text(const EmbeddingModel& model, const std::filesystem::path& path);

}  // namespace spkl
