#include "spkl/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "spkl/csv.hpp"
#include "spkl/error.hpp"

namespace spkl {

namespace pt = boost::property_tree;

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  std::istringstream ss(text);
  for (std::string w; ss >> w;) out.push_back(csv::parse_double(w));
  return out;
}

namespace {

// Collects conversion errors instead of failing on the first one.
class Reader {
 public:
  Reader(const pt::ptree& tree, std::filesystem::path base) : tree_(tree), base_(std::move(base)) {}

  std::optional<std::string> raw(const std::string& section, const std::string& key) {
    known_.insert(section + "." + key);
    auto sec = tree_.get_child_optional(pt::ptree::path_type(section, '\0'));
    if (!sec) return std::nullopt;
    auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return *v;
  }

  template <typename T>
  void number(const std::string& section, const std::string& key, T& target) {
    auto v = raw(section, key);
    if (!v) return;
    T parsed{};
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), parsed);
    if (ec != std::errc() || ptr != v->data() + v->size()) {
      errors.push_back(section + "." + key + ": not a valid number: '" + *v + "'");
      return;
    }
    target = parsed;
  }

  void flag(const std::string& section, const std::string& key, bool& target) {
    auto v = raw(section, key);
    if (!v) return;
    if (*v == "true" || *v == "1" || *v == "yes") {
      target = true;
    } else if (*v == "false" || *v == "0" || *v == "no") {
      target = false;
    } else {
      errors.push_back(section + "." + key + ": expected true/false, got '" + *v + "'");
    }
  }

  void path(const std::string& section, const std::string& key, std::filesystem::path& target) {
    auto v = raw(section, key);
    if (!v || v->empty()) return;
    std::filesystem::path p(*v);
    target = p.is_absolute() ? p : base_ / p;
  }

  void text(const std::string& section, const std::string& key, std::string& target) {
    if (auto v = raw(section, key)) target = *v;
  }

  void weights(const std::string& section, const std::string& key, std::vector<double>& target) {
    auto v = raw(section, key);
    if (!v) return;
    try {
      target = parse_weights(*v);
    } catch (const Error& e) {
      errors.push_back(section + "." + key + ": " + e.what());
    }
  }

  // Keys present in the file that no reader asked for.
  void check_unknown(const std::set<std::string>& free_sections) {
    for (const auto& [section, body] : tree_) {
      if (free_sections.contains(section)) continue;
      if (body.empty() && !body.data().empty()) {
        errors.push_back("key '" + section + "' outside of any [section]");
        continue;
      }
      for (const auto& [key, value] : body) {
        if (!known_.contains(section + "." + key)) errors.push_back("unknown key " + section + "." + key);
      }
    }
  }

  std::vector<std::string> errors;

 private:
  const pt::ptree& tree_;
  std::filesystem::path base_;
  std::set<std::string> known_;
};

void throw_if_any(const std::vector<std::string>& errors) {
  if (errors.empty()) return;
  std::string msg;
  for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
  throw ConfigError(msg);
}

std::string metric_name(Metric m) { return m == Metric::Cosine ? "cosine" : "euclidean"; }

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  RunConfig c;
  Reader r(tree, base_dir);

  r.path("run", "input", c.input);
  r.path("run", "output_dir", c.output_dir);
  if (!c.output_dir.is_absolute()) c.output_dir = base_dir / c.output_dir;
  r.path("run", "lexicons", c.lexicons);
  std::uint64_t seed = 0;
  if (r.raw("run", "seed")) {
    r.number("run", "seed", seed);
    c.seed = seed;
  }
  r.number("run", "min_activity", c.min_activity);
  r.number("run", "workers", c.train.workers);

  std::map<std::string, AudienceClass> venues;
  if (auto sec = tree.get_child_optional("venues")) {
    for (const auto& [name, value] : *sec) {
      auto cls = parse_audience_class(value.data());
      if (!cls) {
        r.errors.push_back("venues." + name + ": unknown audience class '" + value.data() +
                           "' (single_gender_A, single_gender_B or mixed)");
        continue;
      }
      venues[name] = *cls;
    }
  }

  r.text("ingest", "bot_author", c.select.bot_author);

  r.number("preprocess", "phrase_min_count", c.phrase_min_count);
  r.number("preprocess", "phrase_threshold", c.phrase_threshold);
  r.path("preprocess", "stoplist", c.stoplist);
  r.path("preprocess", "extra_stopwords", c.extra_stopwords);
  r.path("preprocess", "lemma_exceptions", c.lemma_exceptions);

  r.number("train", "dim", c.train.dim);
  r.number("train", "window", c.train.window);
  r.number("train", "negatives", c.train.negatives);
  r.number("train", "epochs", c.train.epochs);
  r.number("train", "lr_initial", c.train.lr_initial);
  r.number("train", "lr_final", c.train.lr_final);
  r.flag("train", "export_text", c.export_text);

  r.number("analyze", "max_pairs", c.max_pairs);
  r.number("analyze", "min_activity", c.analyze_min_activity);

  auto& p = c.projection;
  r.number("project", "n_neighbors", p.n_neighbors);
  r.number("project", "min_dist", p.min_dist);
  r.number("project", "spread", p.spread);
  r.number("project", "epochs", p.epochs);
  r.number("project", "negative_sample_rate", p.negative_sample_rate);
  r.number("project", "learning_rate", p.learning_rate);
  r.flag("project", "keyword_overlay", c.keyword_overlay);
  if (auto m = r.raw("project", "metric")) {
    if (*m == "cosine") {
      p.metric = Metric::Cosine;
    } else if (*m == "euclidean") {
      p.metric = Metric::Euclidean;
    } else {
      r.errors.push_back("project.metric: expected cosine or euclidean, got '" + *m + "'");
    }
  }

  auto& s = c.plant;
  r.number("synth", "authors_per_group", s.authors_per_group);
  r.number("synth", "comments_per_context", s.comments_per_context);
  r.number("synth", "mean_length", s.mean_length);
  r.number("synth", "topics", s.topics);
  r.number("synth", "words_per_topic", s.words_per_topic);
  r.number("synth", "filler_words", s.filler_words);
  r.number("synth", "decoy_authors", s.decoy_authors);
  r.text("synth", "venue_a", s.venue_a);
  r.text("synth", "venue_b", s.venue_b);
  r.text("synth", "venue_mixed", s.venue_mixed);
  for (const auto key : kGroupKeys) {
    r.weights("synth", "mixture_" + std::string(to_string(key.group)) + "_" + std::string(to_string(key.context)),
              s.mixtures[key.index()]);
  }

  r.check_unknown({"venues"});
  throw_if_any(r.errors);

  // Without explicit venues, fall back to the synthetic generator's names.
  c.venues = venues.empty() ? c.plant.venue_spec() : VenueSpec(std::move(venues));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  RunConfig c = parse_config(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
  c.source = path;
  return c;
}

void RunConfig::validate(const std::string& stage) const {
  std::vector<std::string> errors;
  auto collect = [&](auto&& check) {
    try {
      check();
    } catch (const ConfigError& e) {
      std::istringstream lines(e.what());
      for (std::string l; std::getline(lines, l);) errors.push_back(l);
    }
  };
  if (!seed) errors.push_back("run.seed is required (or pass --seed)");
  if (min_activity < 1) errors.push_back("run.min_activity must be >= 1");
  if (analyze_min_activity < 1) errors.push_back("analyze.min_activity must be >= 1");
  if (phrase_min_count < 1) errors.push_back("preprocess.phrase_min_count must be >= 1");
  if (max_pairs < 1) errors.push_back("analyze.max_pairs must be >= 1");
  collect([&] { venues.validate(); });
  collect([&] { train.validate(); });
  collect([&] { projection.validate(); });
  if (stage == "synth") collect([&] { plant.validate(); });

  const bool reads_input = stage == "ingest" || stage == "pipeline";
  if (reads_input) {
    if (input.empty()) {
      errors.push_back("run.input is required");
    } else if (!std::filesystem::exists(input)) {
      errors.push_back("run.input not found: " + input.string());
    }
  }
  for (const auto& [key, path] : {std::pair{"run.lexicons", lexicons}, std::pair{"preprocess.stoplist", stoplist},
                                  std::pair{"preprocess.extra_stopwords", extra_stopwords},
                                  std::pair{"preprocess.lemma_exceptions", lemma_exceptions}}) {
    if (stage != "synth" && !path.empty() && !std::filesystem::exists(path)) {
      errors.push_back(std::string(key) + " not found: " + path.string());
    }
  }
  throw_if_any(errors);
}

std::uint64_t RunConfig::run_seed() const {
  if (!seed) throw ConfigError("run.seed is required (or pass --seed)");
  return *seed;
}

std::string RunConfig::canonical() const {
  std::ostringstream o;
  auto num = [](double v) { return csv::format_double(v); };
  o << "run.seed=" << (seed ? std::to_string(*seed) : "") << '\n'
    << "run.min_activity=" << min_activity << '\n'
    << "run.workers=" << train.workers << '\n';
  for (const auto& [name, cls] : venues.venues()) o << "venues." << name << '=' << to_string(cls) << '\n';
  o << "ingest.bot_author=" << select.bot_author << '\n'
    << "preprocess.phrase_min_count=" << phrase_min_count << '\n'
    << "preprocess.phrase_threshold=" << num(phrase_threshold) << '\n'
    << "train.dim=" << train.dim << '\n'
    << "train.window=" << train.window << '\n'
    << "train.negatives=" << train.negatives << '\n'
    << "train.epochs=" << train.epochs << '\n'
    << "train.lr_initial=" << num(train.lr_initial) << '\n'
    << "train.lr_final=" << num(train.lr_final) << '\n'
    << "train.export_text=" << export_text << '\n'
    << "analyze.max_pairs=" << max_pairs << '\n'
    << "analyze.min_activity=" << analyze_min_activity << '\n'
    << "project.n_neighbors=" << projection.n_neighbors << '\n'
    << "project.min_dist=" << num(projection.min_dist) << '\n'
    << "project.spread=" << num(projection.spread) << '\n'
    << "project.epochs=" << projection.epochs << '\n'
    << "project.negative_sample_rate=" << projection.negative_sample_rate << '\n'
    << "project.learning_rate=" << num(projection.learning_rate) << '\n'
    << "project.metric=" << metric_name(projection.metric) << '\n'
    << "project.keyword_overlay=" << keyword_overlay << '\n'
    << "synth.authors_per_group=" << plant.authors_per_group << '\n'
    << "synth.comments_per_context=" << plant.comments_per_context << '\n'
    << "synth.mean_length=" << num(plant.mean_length) << '\n'
    << "synth.topics=" << plant.topics << '\n'
    << "synth.words_per_topic=" << plant.words_per_topic << '\n'
    << "synth.filler_words=" << plant.filler_words << '\n'
    << "synth.decoy_authors=" << plant.decoy_authors << '\n';
  for (const auto key : kGroupKeys) {
    o << "synth.mixture_" << to_string(key.group) << '_' << to_string(key.context) << '=';
    for (double w : plant.mixtures[key.index()]) o << num(w) << ' ';
    o << '\n';
  }
  return o.str();
}

}  // namespace spkl
