#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "spkl/embedding.hpp"
#include "spkl/error.hpp"
#include "test_util.hpp"

using namespace spkl;
using Corpus = std::vector<std::vector<std::string>>;

TEST_CASE("vocabulary construction") {
  const Corpus c{{"a", "b", "a"}};
  const Vocabulary v = build_vocab(c);
  CHECK(v.size() == 2);
  CHECK(v.at("a") == 0);
  CHECK(v.count(0) == 2);
  CHECK(v.count(1) == 1);
  CHECK(build_vocab(c) == v);
  CHECK_THROWS_AS(build_vocab(Corpus{}), DataError);
  CHECK_THROWS_AS(v.at("zzz"), DataError);

  const Corpus ties{{"c", "b", "a", "b"}};
  CHECK(build_vocab(ties).tokens() == std::vector<std::string>{"b", "a", "c"});
}

TEST_CASE("vocabulary covers natural and speaker tokens") {
  const Corpus c{{"spk::a::single", "baby", "nap"}, {"nap", "spk::a::mixed"}, {"spk::b::single", "baby"}};
  const Vocabulary v = build_vocab(c);
  CHECK(v.size() == 2 + 3);
  CHECK(v.total_count() == 7);
}

TEST_CASE("negative sampling probabilities") {
  const NegativeSampler s(Vocabulary::from_counts({{"a", 3}, {"b", 1}}));
  const double pa = std::pow(3.0, 0.75) / (std::pow(3.0, 0.75) + 1.0);
  CHECK(s.probability(0) == doctest::Approx(pa).epsilon(1e-12));
  CHECK(s.probability(0) == doctest::Approx(0.6951).epsilon(1e-4));
  CHECK(NegativeSampler(Vocabulary::from_counts({{"a", 5}})).probability(0) == 1.0);
  const NegativeSampler eq(Vocabulary::from_counts({{"a", 4}, {"b", 4}, {"c", 4}}));
  CHECK(eq.probability(0) == doctest::Approx(eq.probability(2)));

  Rng rng(3);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += s.sample(rng) == 0;
  CHECK(hits / 100000.0 == doctest::Approx(pa).epsilon(0.01));
}

TEST_CASE("sgns loss closed forms") {
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd v = Eigen::VectorXd::Ones(4);
  const RowMatrix<double> none(0, 4);
  CHECK(sgns_loss(u, v, none) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const Eigen::VectorXd big = Eigen::VectorXd::Constant(4, 30.0);
  CHECK(sgns_loss(big, big, none) < 1e-300 + 1e-12);
  RowMatrix<double> one(1, 4);
  one.setOnes();
  CHECK(sgns_loss(u, v, one) == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(sgns_loss(u, Eigen::VectorXd::Ones(3), none), InvariantError);
}

TEST_CASE("sgns gradient closed forms") {
  Eigen::VectorXd u(3), v(3);
  u << 1, 0, 0;
  v << 0, 1, 0;
  const RowMatrix<double> none(0, 3);
  const auto g = sgns_grad(u, v, none);
  CHECK((g.context + u / 2).norm() < 1e-15);

  const Eigen::VectorXd z = Eigen::VectorXd::Zero(3);
  RowMatrix<double> zn = RowMatrix<double>::Zero(2, 3);
  const auto gz = sgns_grad(z, z, zn);
  CHECK(gz.target.norm() == 0.0);
  CHECK_THROWS_AS(sgns_grad(u, v, RowMatrix<double>::Zero(1, 2)), InvariantError);
}

TEST_CASE("sgns gradient matches finite differences") {
  Rng rng(2024);
  const int dim = 8;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = static_cast<int>(uniform_index(rng, 6));
    auto draw = [&] {
      Eigen::VectorXd x(dim);
      for (int i = 0; i < dim; ++i) x[i] = standard_normal(rng) * 0.5;
      return x;
    };
    const Eigen::VectorXd u = draw(), v = draw();
    std::vector<Eigen::VectorXd> negs;
    RowMatrix<double> nm(k, dim);
    for (int i = 0; i < k; ++i) {
      negs.push_back(draw());
      nm.row(i) = negs.back().transpose();
    }
    const auto g = sgns_grad(u, v, nm);
    auto rel = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
      return (a - b).norm() / std::max(1e-8, std::max(a.norm(), b.norm()));
    };
    worst = std::max(worst, rel(g.target, oracle::numeric_gradient([&](const Eigen::VectorXd& x) { return oracle::sgns_loss(x, v, negs); }, u, 1e-5)));
    worst = std::max(worst, rel(g.context, oracle::numeric_gradient([&](const Eigen::VectorXd& x) { return oracle::sgns_loss(u, x, negs); }, v, 1e-5)));
    for (int i = 0; i < k; ++i) {
      auto f = [&](const Eigen::VectorXd& x) {
        auto copy = negs;
        copy[static_cast<std::size_t>(i)] = x;
        return oracle::sgns_loss(u, v, copy);
      };
      worst = std::max(worst, rel(g.negatives.row(i).transpose(), oracle::numeric_gradient(f, negs[static_cast<std::size_t>(i)], 1e-5)));
    }
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("window semantics") {
  CHECK(count_pairs(Corpus{{"a", "b", "c"}}, 15) == 6);
  CHECK(count_pairs(Corpus{{"a", "b", "c"}}, 1) == 4);
  CHECK(count_pairs(Corpus{{"a"}, {"b"}}, 15) == 0);
  std::vector<std::string> long_doc(40, "x");
  // 2 * sum_{d=1..15} (40 - d)
  CHECK(count_pairs(Corpus{long_doc}, 15) == 2 * (15 * 40 - 120));
}

namespace {

Corpus small_corpus() {
  Corpus c;
  Rng rng(5);
  for (int d = 0; d < 200; ++d) {
    std::vector<std::string> doc;
    for (int i = 0; i < 12; ++i) doc.push_back("w" + std::to_string(uniform_index(rng, 30)));
    c.push_back(doc);
  }
  return c;
}

TrainConfig small_config() {
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.epochs = 3;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("training is deterministic with one worker") {
  const auto c = small_corpus();
  const auto a = train(c, small_config());
  const auto b = train(c, small_config());
  CHECK(a == b);
  CHECK(a.epoch_losses.size() == 3);
  CHECK(a.vocab.size() == 30);
  CHECK(a.input.allFinite());
  std::ostringstream sa, sb;
  save_model(a, sa);
  save_model(b, sb);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("training with several workers stays finite") {
  auto cfg = small_config();
  cfg.workers = 3;
  const auto m = train(small_corpus(), cfg);
  CHECK(m.input.allFinite());
  CHECK(m.epoch_losses.size() == 3);
}

TEST_CASE("training rejects bad input") {
  CHECK_THROWS_AS(train(Corpus{}, small_config()), DataError);
  auto cfg = small_config();
  cfg.dim = 0;
  CHECK_THROWS_AS(train(small_corpus(), cfg), ConfigError);
}

TEST_CASE("model file round trip and failure modes") {
  const auto m = train(small_corpus(), small_config());
  std::stringstream buf;
  save_model(m, buf);
  const std::string bytes = buf.str();

  std::istringstream in(bytes);
  CHECK(load_model(in) == m);

  std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(load_model(truncated), DataError);

  std::string future = bytes;
  future[4] = 2;  // version follows the 4-byte magic
  std::istringstream newer(future);
  try {
    load_model(newer);
    FAIL("expected a version error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("version") != std::string::npos);
  }

  std::string bad = bytes;
  bad[0] = 'X';
  std::istringstream wrong_magic(bad);
  CHECK_THROWS_AS(load_model(wrong_magic), DataError);

  testutil::TempDir dir("model");
  save_model(m, dir / "m.spkl");
  CHECK(load_model(dir / "m.spkl") == m);
  export_text(m, dir / "v.txt");
  std::istringstream txt(testutil::slurp(dir / "v.txt"));
  std::size_t rows = 0, dim = 0;
  txt >> rows >> dim;
  CHECK(rows == m.vocab.size());
  CHECK(dim == 16);
}
