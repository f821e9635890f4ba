#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "spkl/embedding.hpp"
#include "spkl/error.hpp"

namespace spkl {

void TrainConfig::validate() const {
  std::vector<std::string> problems;
  if (dim < 1) problems.push_back("train.dim must be >= 1");
  if (window < 1) problems.push_back("train.window must be >= 1");
  if (negatives < 1) problems.push_back("train.negatives must be >= 1");
  if (epochs < 1) problems.push_back("train.epochs must be >= 1");
  if (!(lr_final > 0.0)) problems.push_back("train.lr_final must be > 0");
  if (!(lr_initial > lr_final)) problems.push_back("train.lr_initial must be > train.lr_final");
  if (workers < 1) problems.push_back("train.workers must be >= 1");
  if (!problems.empty()) {
    std::ostringstream msg;
    for (std::size_t i = 0; i < problems.size(); ++i) msg << (i ? "\n" : "") << problems[i];
    throw ConfigError(msg.str());
  }
}

Eigen::VectorXd EmbeddingModel::vector(const std::string& token) const {
  return input.row(vocab.at(token)).transpose().cast<double>();
}

std::uint64_t count_pairs(std::span<const std::vector<std::string>> corpus, int window) {
  std::uint64_t pairs = 0;
  const auto w = static_cast<std::uint64_t>(window);
  for (const auto& doc : corpus) {
    const auto n = static_cast<std::uint64_t>(doc.size());
    // Each unordered pair at distance d <= w contributes two ordered pairs.
    for (std::uint64_t d = 1; d <= std::min(w, n ? n - 1 : 0); ++d) pairs += 2 * (n - d);
  }
  return pairs;
}

namespace {

using VecMap = Eigen::Map<Eigen::VectorXf>;

// Shared state of one training run. In multi-worker mode the matrices are
// updated without synchronisation; interleaved writes may drop updates, which
// SGD tolerates, at the cost of run-to-run reproducibility.
class SgnsTrainer {
 public:
  SgnsTrainer(const std::vector<std::vector<TokenId>>& docs, const NegativeSampler& sampler,
              const TrainConfig& config, EmbeddingMatrix& input, EmbeddingMatrix& output,
              std::uint64_t total_pairs)
      : docs_(docs),
        sampler_(sampler),
        config_(config),
        input_(input),
        output_(output),
        total_pairs_(std::max<std::uint64_t>(total_pairs, 1)) {}

  double learning_rate(std::uint64_t done) const {
    const double frac = std::min(1.0, static_cast<double>(done) / static_cast<double>(total_pairs_));
    return config_.lr_initial - (config_.lr_initial - config_.lr_final) * frac;
  }

  // Trains documents worker, worker + stride, ... for one epoch; returns the
  // summed loss and the number of pairs seen.
  std::pair<double, std::uint64_t> run_shard(std::size_t worker, std::size_t stride, Rng& rng,
                                             std::atomic<std::uint64_t>& progress) {
    const int dim = config_.dim;
    Eigen::VectorXf grad_target(dim);
    std::vector<TokenId> negs(static_cast<std::size_t>(config_.negatives));
    std::vector<float> neg_scale(negs.size());
    double loss_sum = 0.0;
    std::uint64_t pairs = 0;
    std::uint64_t local_done = 0;
    constexpr std::uint64_t kPublishEvery = 1024;
    double lr = learning_rate(progress.load(std::memory_order_relaxed));

    for (std::size_t d = worker; d < docs_.size(); d += stride) {
      const auto& doc = docs_[d];
      const auto n = static_cast<std::ptrdiff_t>(doc.size());
      for (std::ptrdiff_t t = 0; t < n; ++t) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, t - config_.window);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, t + config_.window);
        for (std::ptrdiff_t c = lo; c <= hi; ++c) {
          if (c == t) continue;
          loss_sum += step(doc[static_cast<std::size_t>(t)], doc[static_cast<std::size_t>(c)],
                           static_cast<float>(lr), rng, grad_target, negs, neg_scale);
          ++pairs;
          if (++local_done == kPublishEvery || stride == 1) {
            const auto done = progress.fetch_add(local_done, std::memory_order_relaxed) + local_done;
            local_done = 0;
            lr = learning_rate(done);
          }
        }
      }
      if (!std::isfinite(loss_sum)) {
        throw InvariantError("non-finite training loss in document " + std::to_string(d));
      }
    }
    progress.fetch_add(local_done, std::memory_order_relaxed);
    return {loss_sum, pairs};
  }

 private:
  double step(TokenId target, TokenId context, float lr, Rng& rng, Eigen::VectorXf& grad_target,
              std::vector<TokenId>& negs, std::vector<float>& neg_scale) {
    const int dim = config_.dim;
    VecMap u(input_.row(target).data(), dim);
    VecMap v(output_.row(context).data(), dim);

    // Negatives equal to the positive context or to the target are redrawn.
    std::size_t k = 0;
    for (std::size_t i = 0; i < negs.size(); ++i) {
      for (int attempt = 0; attempt < 32; ++attempt) {
        const TokenId draw = sampler_.sample(rng);
        if (draw != context && draw != target) {
          negs[k++] = draw;
          break;
        }
      }
    }

    // All gradients are taken at the current parameters, then applied.
    const float pos_dot = u.dot(v);
    const float pos_scale = sigmoid(pos_dot) - 1.0f;
    double loss = neg_log_sigmoid(static_cast<double>(pos_dot));
    grad_target.noalias() = pos_scale * v;
    for (std::size_t i = 0; i < k; ++i) {
      VecMap n(output_.row(negs[i]).data(), dim);
      const float dot = u.dot(n);
      neg_scale[i] = sigmoid(dot);
      loss += neg_log_sigmoid(-static_cast<double>(dot));
      grad_target.noalias() += neg_scale[i] * n;
    }
    v.noalias() -= (lr * pos_scale) * u;
    for (std::size_t i = 0; i < k; ++i) {
      VecMap n(output_.row(negs[i]).data(), dim);
      n.noalias() -= (lr * neg_scale[i]) * u;
    }
    u.noalias() -= lr * grad_target;
    return loss;
  }

  const std::vector<std::vector<TokenId>>& docs_;
  const NegativeSampler& sampler_;
  const TrainConfig& config_;
  EmbeddingMatrix& input_;
  EmbeddingMatrix& output_;
  std::uint64_t total_pairs_;
};

}  // namespace

EmbeddingModel train(std::span<const std::vector<std::string>> corpus, const TrainConfig& config,
                     const ProgressCallback& progress) {
  config.validate();
  EmbeddingModel model;
  model.vocab = build_vocab(corpus);
  model.config = config;
  const NegativeSampler sampler(model.vocab);

  std::vector<std::vector<TokenId>> docs;
  docs.reserve(corpus.size());
  for (const auto& doc : corpus) {
    std::vector<TokenId> ids;
    ids.reserve(doc.size());
    for (const auto& t : doc) ids.push_back(model.vocab.at(t));
    if (!ids.empty()) docs.push_back(std::move(ids));
  }

  const auto rows = static_cast<Eigen::Index>(model.vocab.size());
  model.input.resize(rows, config.dim);
  model.output = EmbeddingMatrix::Zero(rows, config.dim);
  Rng init_rng(derive_seed(config.seed, "init"));
  const double half_range = 0.5 / config.dim;
  for (Eigen::Index i = 0; i < model.input.size(); ++i) {
    model.input.data()[i] = static_cast<float>((uniform01(init_rng) * 2.0 - 1.0) * half_range);
  }

  const std::uint64_t epoch_pairs = count_pairs(corpus, config.window);
  SgnsTrainer trainer(docs, sampler, config, model.input, model.output,
                      epoch_pairs * static_cast<std::uint64_t>(config.epochs));
  std::atomic<std::uint64_t> done{0};
  const auto workers = static_cast<std::size_t>(config.workers);
  std::vector<Rng> rngs;
  for (std::size_t w = 0; w < workers; ++w) rngs.emplace_back(derive_seed(config.seed, w + 1));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::uint64_t pairs = 0;
    if (workers == 1) {
      std::tie(loss_sum, pairs) = trainer.run_shard(0, 1, rngs[0], done);
    } else {
      std::vector<std::pair<double, std::uint64_t>> partial(workers);
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          try {
            partial[w] = trainer.run_shard(w, workers, rngs[w], done);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& th : threads) th.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
      for (const auto& [l, p] : partial) {
        loss_sum += l;
        pairs += p;
      }
    }
    const double mean = pairs ? loss_sum / static_cast<double>(pairs) : 0.0;
    if (!std::isfinite(mean)) {
      throw InvariantError("non-finite mean loss in epoch " + std::to_string(epoch + 1));
    }
    model.epoch_losses.push_back(mean);
    if (progress) progress({epoch + 1, mean, trainer.learning_rate(done.load())});
  }

  if (!model.input.allFinite() || !model.output.allFinite()) {
    throw InvariantError("training produced non-finite vectors");
  }
  return model;
}

}  // namespace spkl
