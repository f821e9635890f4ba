#include "spkl/analysis.hpp"

#include <fstream>
#include <sstream>

#include "spkl/random.hpp"
#include "spkl/stats.hpp"

namespace spkl {

Summary summarize(std::span<const double> values) {
  return Summary{mean(values), stddev(values), values.size()};
}

SimilarityDistribution make_distribution(std::string label, std::vector<double> values) {
  SimilarityDistribution d{std::move(label), std::move(values), {}};
  d.summary = summarize(d.values);
  return d;
}

namespace {

Eigen::MatrixXd normalized_rows(const Eigen::MatrixXd& vectors) {
  Eigen::MatrixXd out = vectors;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double n = out.row(i).norm();
    if (n == 0.0) throw DataError("zero speaker vector at row " + std::to_string(i));
    out.row(i) /= n;
  }
  return out;
}

}  // namespace

SimilarityDistribution group_concentration_pairwise(const Eigen::MatrixXd& vectors, std::string label,
                                                    const PairwiseOptions& options) {
  const auto n = static_cast<std::uint64_t>(vectors.rows());
  if (n < 2) throw DataError("pairwise concentration needs at least 2 vectors");
  const Eigen::MatrixXd unit = normalized_rows(vectors);
  const std::uint64_t total = n * (n - 1) / 2;

  std::vector<double> values;
  if (total <= options.max_pairs) {
    values.reserve(total);
    for (Eigen::Index i = 0; i + 1 < unit.rows(); ++i) {
      const Eigen::VectorXd row = unit.bottomRows(unit.rows() - i - 1) * unit.row(i).transpose();
      for (double v : row) values.push_back(std::clamp(v, -1.0, 1.0));
    }
  } else {
    Rng rng(derive_seed(options.seed, "pairwise"));
    values.reserve(options.max_pairs);
    for (std::uint64_t s = 0; s < options.max_pairs; ++s) {
      const auto i = uniform_index(rng, n);
      auto j = uniform_index(rng, n - 1);
      if (j >= i) ++j;
      const double v = unit.row(static_cast<Eigen::Index>(i)).dot(unit.row(static_cast<Eigen::Index>(j)));
      values.push_back(std::clamp(v, -1.0, 1.0));
    }
  }
  return make_distribution(std::move(label), std::move(values));
}

SimilarityDistribution group_concentration_centroid(const Eigen::MatrixXd& vectors, std::string label) {
  const Eigen::VectorXd c = centroid(vectors);
  if (c.norm() == 0.0) throw DataError("group centroid is the zero vector");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(vectors.rows()));
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) values.push_back(cosine(vectors.row(i), c));
  return make_distribution(std::move(label), std::move(values));
}

double audience_shift(const EmbeddingModel& model, const std::string& author) {
  const std::string single = SpeakerToken{author, Context::Single}.render();
  const std::string mixed = SpeakerToken{author, Context::Mixed}.render();
  auto s = model.vocab.find(single);
  auto m = model.vocab.find(mixed);
  if (!s) throw DataError("author '" + author + "' has no single-context speaker token");
  if (!m) throw DataError("author '" + author + "' has no mixed-context speaker token");
  return cosine(model.input.row(*s), model.input.row(*m));
}

std::vector<TopicLexicon> parse_lexicons(std::string_view text) {
  std::vector<TopicLexicon> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string entry = line.substr(first, last - first + 1);
    if (entry.front() == '[' && entry.back() == ']') {
      out.push_back(TopicLexicon{entry.substr(1, entry.size() - 2), {}});
      continue;
    }
    if (out.empty()) {
      throw DataError("lexicon line " + std::to_string(line_no) + ": keyword before any [topic] header");
    }
    out.back().keywords.push_back(entry);
  }
  for (const auto& lex : out) {
    if (lex.keywords.empty()) throw DataError("topic lexicon '" + lex.name + "' has no keywords");
  }
  return out;
}

std::vector<TopicLexicon> load_lexicons(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open topic lexicons: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lexicons(ss.str());
}

void write_lexicons(const std::filesystem::path& path, std::span<const TopicLexicon> lexicons) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write topic lexicons: " + path.string());
  for (const auto& lex : lexicons) {
    out << '[' << lex.name << "]\n";
    for (const auto& k : lex.keywords) out << k << '\n';
  }
}

TopicLexicon normalize_lexicon(const TopicLexicon& lexicon, const Lemmatizer& lemmatizer) {
  TopicLexicon out{lexicon.name, {}};
  for (const auto& k : lexicon.keywords) {
    const auto parts = lemmatize(tokenize(k), lemmatizer);
    if (parts.empty()) continue;
    std::string joined;
    for (const auto& p : parts) joined += (joined.empty() ? "" : std::string(1, kPhraseJoiner)) + p;
    if (std::find(out.keywords.begin(), out.keywords.end(), joined) == out.keywords.end()) {
      out.keywords.push_back(std::move(joined));
    }
  }
  return out;
}

TopicAffinity topic_affinity(const Eigen::MatrixXd& group_vectors, const TopicLexicon& lexicon,
                             const EmbeddingModel& model) {
  if (group_vectors.rows() == 0) throw DataError("topic affinity: empty group");
  TopicAffinity result;
  for (const auto& k : lexicon.keywords) {
    (model.vocab.contains(k) ? result.found : result.missing).push_back(k);
  }
  if (result.found.empty()) {
    throw DataError("topic '" + lexicon.name + "': no keyword is in the vocabulary");
  }
  const Eigen::VectorXd topic = centroid(token_vectors(model, result.found));
  result.value = cosine(centroid(group_vectors), topic);
  return result;
}

Eigen::MatrixXd token_vectors(const EmbeddingModel& model, std::span<const std::string> tokens) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(tokens.size()), model.input.cols());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = model.input.row(model.vocab.at(tokens[i])).cast<double>();
  }
  return out;
}

std::vector<std::string> group_tokens(std::span<const SpeakerInfo> speakers, GroupKey key,
                                      const EmbeddingModel& model) {
  std::vector<std::string> out;
  for (const auto& s : speakers) {
    if (s.key() == key && model.vocab.contains(s.token)) out.push_back(s.token);
  }
  return out;
}

Cohort min_activity_filter(const Cohort& cohort, std::size_t k) {
  if (k < 1) throw ConfigError("activity threshold must be >= 1");
  Cohort out;
  for (const auto& a : cohort.authors) {
    if (a.single.size() >= k && a.mixed.size() >= k) out.authors.push_back(a);
  }
  return out;
}

}  // namespace spkl
