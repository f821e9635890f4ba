#include "spkl/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "spkl/error.hpp"
#include "spkl/random.hpp"

namespace spkl {

void PlantSpec::validate() const {
  std::vector<std::string> problems;
  if (topics < 2) problems.push_back("synth.topics must be >= 2");
  if (authors_per_group < 1) problems.push_back("synth.authors_per_group must be >= 1");
  if (comments_per_context < 1) problems.push_back("synth.comments_per_context must be >= 1");
  if (words_per_topic < 1) problems.push_back("synth.words_per_topic must be >= 1");
  if (!(mean_length >= 1.0)) problems.push_back("synth.mean_length must be >= 1");
  for (const auto key : kGroupKeys) {
    const auto& m = mixture(key);
    const std::string name = "synth.mixture " + key.name();
    if (m.size() != topics + 1) {
      problems.push_back(name + ": expected " + std::to_string(topics + 1) + " weights, got " +
                         std::to_string(m.size()));
      continue;
    }
    bool negative = false;
    for (double w : m) negative |= !(w >= 0.0);
    if (negative) problems.push_back(name + ": weights must be nonnegative");
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) problems.push_back(name + ": weights must sum to 1");
    if (m.back() > 0.0 && filler_words == 0) {
      problems.push_back(name + ": filler weight set but synth.filler_words is 0");
    }
  }
  if (venue_a == venue_b || venue_a == venue_mixed || venue_b == venue_mixed) {
    problems.push_back("synth venue names must be distinct");
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    throw ConfigError(msg);
  }
}

VenueSpec PlantSpec::venue_spec() const {
  return VenueSpec({{venue_a, AudienceClass::SingleGenderA},
                    {venue_b, AudienceClass::SingleGenderB},
                    {venue_mixed, AudienceClass::Mixed}});
}

std::string topic_word(std::size_t topic, std::size_t index) {
  return "t" + std::to_string(topic) + "w" + std::to_string(index);
}

std::string filler_word(std::size_t index) { return "f" + std::to_string(index); }

std::string synthetic_author(Group group, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "user%s%04zu", group == Group::A ? "A" : "B", index);
  return buf;
}

std::size_t dominant_topic(const std::vector<double>& mixture) {
  if (mixture.size() < 2) throw DataError("dominant_topic: mixture has no topics");
  return static_cast<std::size_t>(std::max_element(mixture.begin(), mixture.end() - 1) - mixture.begin());
}

namespace {

std::size_t draw_category(const std::vector<double>& weights, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  // Rounding: fall back to the last category with positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return weights.size() - 1;
}

std::size_t draw_length(double mean, Rng& rng) {
  // Geometric on {1, 2, ...} with the requested mean, floored at 3.
  std::size_t len = 1;
  if (mean > 1.0) {
    const double p = 1.0 / mean;
    double u = uniform01(rng);
    while (u <= 0.0) u = uniform01(rng);
    len = static_cast<std::size_t>(std::ceil(std::log(u) / std::log1p(-p)));
  }
  return std::max<std::size_t>(3, len);
}

struct Generator {
  const PlantSpec& spec;
  GeneratedCorpus& out;
  std::size_t next_id = 0;
  std::int64_t base_time = 1'577'836'800;  // 2020-01-01

  std::string body(const std::vector<double>& mixture, Rng& rng) const {
    const std::size_t len = draw_length(spec.mean_length, rng);
    std::string text;
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t cat = draw_category(mixture, rng);
      std::string word;
      if (cat == spec.topics) {
        word = filler_word(uniform_index(rng, spec.filler_words));
      } else {
        word = topic_word(cat, uniform_index(rng, spec.words_per_topic));
      }
      if (!text.empty()) text += ' ';
      text += word;
    }
    return text;
  }

  void emit(const std::string& author, const std::string& venue, std::string text) {
    char id[32];
    std::snprintf(id, sizeof id, "c%08zu", next_id);
    out.comments.push_back(
        RawComment{id, author, venue, std::move(text), base_time + static_cast<std::int64_t>(next_id)});
    ++next_id;
  }
};

}  // namespace

GeneratedCorpus generate(const PlantSpec& spec, std::uint64_t seed) {
  spec.validate();
  GeneratedCorpus out;
  out.mixtures = spec.mixtures;
  for (std::size_t t = 0; t < spec.topics; ++t) {
    TopicLexicon lex{"topic" + std::to_string(t), {}};
    for (std::size_t j = 0; j < spec.words_per_topic; ++j) lex.keywords.push_back(topic_word(t, j));
    out.lexicons.push_back(std::move(lex));
  }
  for (std::size_t j = 0; j < spec.filler_words; ++j) out.filler.push_back(filler_word(j));

  Generator gen{spec, out};
  for (Group g : kGroups) {
    const std::string& single_venue = g == Group::A ? spec.venue_a : spec.venue_b;
    for (std::size_t i = 0; i < spec.authors_per_group; ++i) {
      const std::string author = synthetic_author(g, i);
      out.author_groups[author] = g;
      Rng rng(derive_seed(seed, author));
      for (Context ctx : kContexts) {
        const auto& mixture = spec.mixture({g, ctx});
        const std::string& venue = ctx == Context::Single ? single_venue : spec.venue_mixed;
        for (std::size_t c = 0; c < spec.comments_per_context; ++c) gen.emit(author, venue, gen.body(mixture, rng));
      }
    }
  }

  // Decoys: an author in both single venues, an author only in the mixed venue,
  // a bot comment and a deleted comment per decoy.
  for (std::size_t i = 0; i < spec.decoy_authors; ++i) {
    Rng rng(derive_seed(seed, "decoy" + std::to_string(i)));
    const auto& mix = spec.mixture({Group::A, Context::Mixed});
    const std::string both = "decoyBoth" + std::to_string(i);
    gen.emit(both, spec.venue_a, gen.body(mix, rng));
    gen.emit(both, spec.venue_b, gen.body(mix, rng));
    gen.emit(both, spec.venue_mixed, gen.body(mix, rng));
    gen.emit("decoyMixed" + std::to_string(i), spec.venue_mixed, gen.body(mix, rng));
    gen.emit("AutoModerator", spec.venue_mixed, gen.body(mix, rng));
    gen.emit(synthetic_author(Group::A, i % spec.authors_per_group), spec.venue_a, "[deleted]");
  }
  return out;
}

void write_generated(const GeneratedCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_comments(dir / "corpus.jsonl", corpus.comments);
  write_lexicons(dir / "lexicons.txt", corpus.lexicons);

  nlohmann::ordered_json truth;
  truth["authors"] = nlohmann::ordered_json::object();
  for (const auto& [author, g] : corpus.author_groups) truth["authors"][author] = std::string(to_string(g));
  truth["mixtures"] = nlohmann::ordered_json::object();
  for (const auto key : kGroupKeys) {
    truth["mixtures"][key.name()] = corpus.mixtures[key.index()];
    truth["dominant_topic"][key.name()] = dominant_topic(corpus.mixtures[key.index()]);
  }
  std::ofstream out(dir / "truth.json", std::ios::binary);
  if (!out) throw DataError("cannot write " + (dir / "truth.json").string());
  out << truth.dump(2) << '\n';
}

}  // namespace spkl
