#include "spkl/pipeline.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "spkl/analysis.hpp"
#include "spkl/csv.hpp"
#include "spkl/error.hpp"
#include "spkl/inject.hpp"
#include "spkl/manifest.hpp"
#include "spkl/plot.hpp"
#include "spkl/preprocess.hpp"
#include "spkl/report.hpp"

namespace spkl {

namespace {

namespace fs = std::filesystem;

struct StageIo {
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
};

// Artifact name -> stage that writes it.
const std::map<std::string, std::string> kProducer{
    {"cohort.jsonl", "ingest"},       {"corpus.txt", "preprocess"},     {"speakers.tsv", "preprocess"},
    {"model.spkl", "train"},          {"distributions.csv", "analyze"}, {"topic_affinity.csv", "analyze"},
    {"layout.csv", "project"},        {"corpus.jsonl", "synth"}};

fs::path require(const fs::path& dir, const std::string& name) {
  const fs::path p = dir / name;
  if (!fs::exists(p)) {
    const auto it = kProducer.find(name);
    std::string stem = name.substr(0, name.find('.'));
    throw DataError(stem + " missing; run " + (it == kProducer.end() ? std::string("the producing stage") : it->second) +
                    " (" + p.string() + ")");
  }
  return p;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

std::shared_ptr<const Lemmatizer> make_lemmatizer(const RunConfig& c) {
  if (!c.lemma_exceptions.empty()) return std::make_shared<RuleLemmatizer>(RuleLemmatizer::from_file(c.lemma_exceptions));
  return std::make_shared<RuleLemmatizer>(RuleLemmatizer::bundled());
}

Cohort load_cohort(const RunConfig& c, const fs::path& path) {
  const auto loaded = load_comments(path);
  return select_cohort(loaded.comments, c.venues, c.select);
}

std::vector<TopicLexicon> load_normalized_lexicons(const RunConfig& c) {
  std::vector<TopicLexicon> out;
  if (c.lexicons.empty()) return out;
  const auto lemmatizer = make_lemmatizer(c);
  for (const auto& lex : load_lexicons(c.lexicons)) out.push_back(normalize_lexicon(lex, *lemmatizer));
  return out;
}

StageIo stage_synth(const RunConfig& c, std::ostream& log) {
  const auto corpus = generate(c.plant, c.run_seed());
  write_generated(corpus, c.output_dir);
  log << "synth: " << corpus.comments.size() << " comments by " << corpus.author_groups.size()
      << " planted authors\n";
  return {{}, {c.output_dir / "corpus.jsonl", c.output_dir / "lexicons.txt", c.output_dir / "truth.json"}};
}

StageIo stage_ingest(const RunConfig& c, std::ostream& log) {
  const auto loaded = load_comments(c.input);
  SelectStats stats;
  const Cohort cohort = select_cohort(loaded.comments, c.venues, c.select, &stats);
  log << "ingest: " << loaded.comments.size() << " comments read, " << loaded.skipped << " malformed lines skipped\n"
      << "ingest: dropped " << stats.bot_comments << " bot, " << stats.deleted_comments << " deleted, "
      << stats.unknown_venue_comments << " other-venue comments; " << stats.authors_in_both_single
      << " authors in both single-gender venues, " << stats.authors_missing_context
      << " authors without both audiences\n";
  for (const auto& w : stats.warnings) log << "warning: " << w << '\n';

  const fs::path cohort_path = c.output_dir / "cohort.jsonl";
  write_comments(cohort_path, cohort.comments());

  const auto summary = cohort_summary(cohort);
  const fs::path summary_path = c.output_dir / "cohort_summary.csv";
  std::ofstream out(summary_path, std::ios::binary);
  csv::write_row(out, {"venue", "group", "authors", "comments"});
  for (const auto& [key, count] : summary.comments) {
    csv::write_row(out, {key.first, std::string(to_string(key.second)),
                         std::to_string(summary.authors[static_cast<std::size_t>(key.second)]), std::to_string(count)});
  }
  log << "ingest: cohort of " << summary.authors[0] << " A and " << summary.authors[1] << " B authors, "
      << summary.total_comments() << " comments\n";
  return {{c.input}, {cohort_path, summary_path}};
}

StageIo stage_preprocess(const RunConfig& c, std::ostream& log) {
  const fs::path cohort_path = require(c.output_dir, "cohort.jsonl");
  const Cohort cohort = load_cohort(c, cohort_path);

  PreprocessOptions opt;
  opt.phrase_min_count = c.phrase_min_count;
  opt.phrase_threshold = c.phrase_threshold;
  if (!c.stoplist.empty()) opt.stoplist = StopList::from_file(c.stoplist);
  if (!c.extra_stopwords.empty()) opt.stoplist.merge(StopList::from_file(c.extra_stopwords));
  opt.lemmatizer = make_lemmatizer(c);

  CleanStats stats;
  auto docs = clean_corpus(cohort, opt, &stats);
  docs = inject_corpus(std::move(docs), derive_seed(c.run_seed(), "inject"));
  const auto speakers = speakers_of(docs);

  const fs::path corpus_path = c.output_dir / "corpus.txt";
  const fs::path speakers_path = c.output_dir / "speakers.tsv";
  const fs::path stats_path = c.output_dir / "clean_stats.csv";
  write_corpus_text(corpus_path, docs);
  write_speakers(speakers_path, speakers);
  std::ofstream out(stats_path, std::ios::binary);
  csv::write_row(out, {"input_docs", "empty_after_tokenize", "empty_after_stopwords", "output_docs", "phrases"});
  csv::write_row(out, {std::to_string(stats.input_docs), std::to_string(stats.empty_after_tokenize),
                       std::to_string(stats.empty_after_stopwords), std::to_string(stats.output_docs),
                       std::to_string(stats.phrases)});
  log << "preprocess: " << stats.output_docs << " of " << stats.input_docs << " documents kept, "
      << speakers.size() << " speaker tokens, " << stats.phrases << " phrases\n";
  return {{cohort_path}, {corpus_path, speakers_path, stats_path}};
}

StageIo stage_train(const RunConfig& c, std::ostream& log) {
  const fs::path corpus_path = require(c.output_dir, "corpus.txt");
  const auto corpus = read_corpus_text(corpus_path);
  TrainConfig tc = c.train;
  tc.seed = c.run_seed();
  const auto model = train(corpus, tc, [&](const TrainProgress& p) {
    log << "train: epoch " << p.epoch << " mean loss " << p.mean_loss << '\n';
  });
  const fs::path model_path = c.output_dir / "model.spkl";
  save_model(model, model_path);
  StageIo io{{corpus_path}, {model_path}};
  if (c.export_text) {
    export_text(model, c.output_dir / "vectors.txt");
    io.outputs.push_back(c.output_dir / "vectors.txt");
  }
  log << "train: " << model.vocab.size() << " tokens x " << model.dim() << " dimensions\n";
  return io;
}

std::vector<std::string> active_authors(const RunConfig& c, std::size_t k) {
  const Cohort cohort = min_activity_filter(load_cohort(c, require(c.output_dir, "cohort.jsonl")), k);
  std::vector<std::string> out;
  for (const auto& a : cohort.authors) out.push_back(a.author);
  return out;
}

StageIo stage_analyze(const RunConfig& c, std::ostream& log) {
  const fs::path model_path = require(c.output_dir, "model.spkl");
  const fs::path speakers_path = require(c.output_dir, "speakers.tsv");
  const auto model = load_model(model_path);
  const auto speakers = read_speakers(speakers_path);
  const auto lexicons = load_normalized_lexicons(c);

  AnalyzeOptions opt;
  opt.pairwise.max_pairs = c.max_pairs;
  opt.pairwise.seed = derive_seed(c.run_seed(), "pairwise");
  StageIo io{{model_path, speakers_path}, {}};
  if (c.analyze_min_activity > 1) {
    opt.allowed_authors = active_authors(c, c.analyze_min_activity);
    io.inputs.push_back(c.output_dir / "cohort.jsonl");
  }
  if (!c.lexicons.empty()) io.inputs.push_back(c.lexicons);

  const auto report = run_analysis(model, speakers, lexicons, opt);
  io.outputs = write_report(report, c.output_dir);
  for (const auto& row : report.summary) {
    log << "analyze: " << row.group << ' ' << row.variant << " mean " << row.mean << " (sd " << row.stddev
        << ", n " << row.count << ")\n";
  }
  return io;
}

StageIo stage_project(const RunConfig& c, std::ostream& log) {
  const fs::path model_path = require(c.output_dir, "model.spkl");
  const fs::path speakers_path = require(c.output_dir, "speakers.tsv");
  const fs::path cohort_path = require(c.output_dir, "cohort.jsonl");
  const auto model = load_model(model_path);
  const auto speakers = read_speakers(speakers_path);
  const auto authors = active_authors(c, c.min_activity);
  const std::set<std::string> active(authors.begin(), authors.end());

  std::vector<std::string> tokens, groups;
  std::map<std::string, std::vector<const SpeakerInfo*>> by_author;
  for (const auto& s : speakers) {
    if (active.contains(s.author) && model.vocab.contains(s.token)) by_author[s.author].push_back(&s);
  }
  for (const auto& [author, list] : by_author) {
    if (list.size() != 2) continue;  // both audiences needed for a pair of points
    for (const auto* s : list) {
      tokens.push_back(s->token);
      groups.push_back(s->key().name());
    }
  }
  const std::size_t speaker_points = tokens.size();

  StageIo io{{model_path, speakers_path, cohort_path}, {}};
  if (c.keyword_overlay && !c.lexicons.empty()) {
    io.inputs.push_back(c.lexicons);
    std::set<std::string> seen(tokens.begin(), tokens.end());
    for (const auto& lex : load_normalized_lexicons(c)) {
      for (const auto& k : lex.keywords) {
        if (model.vocab.contains(k) && seen.insert(k).second) {
          tokens.push_back(k);
          groups.push_back("topic:" + lex.name);
        }
      }
    }
  }
  if (tokens.empty()) throw DataError("project: no speaker passes the activity filter");

  ProjectionConfig pc = c.projection;
  pc.seed = c.run_seed();
  const auto layout = project(token_vectors(model, tokens), tokens, groups, pc);
  const fs::path layout_path = c.output_dir / "layout.csv";
  write_layout_csv(layout_path, layout);
  io.outputs.push_back(layout_path);
  log << "project: " << speaker_points << " speaker points (" << speaker_points / 2 << " authors) and "
      << tokens.size() - speaker_points << " keywords; curve a=" << layout.curve.a << " b=" << layout.curve.b << '\n';
  return io;
}

StageIo stage_plot(const RunConfig& c, std::ostream& log) {
  const fs::path layout_path = require(c.output_dir, "layout.csv");
  const fs::path dist_path = require(c.output_dir, "distributions.csv");
  const fs::path affinity_path = require(c.output_dir, "topic_affinity.csv");

  const auto layout = read_layout_csv(layout_path);
  const auto dists = read_distributions(dist_path);
  std::vector<SimilarityDistribution> concentration, shift;
  for (const auto& d : dists) {
    if (d.label.ends_with(std::string(":") + kPairwise)) concentration.push_back(d);
    if (d.label.ends_with(":shift")) shift.push_back(d);
  }
  const auto affinities = read_affinities(affinity_path);

  StageIo io{{layout_path, dist_path, affinity_path},
             {c.output_dir / "landscape.svg", c.output_dir / "distributions.svg", c.output_dir / "audience_shift.svg",
              c.output_dir / "affinity.svg"}};
  write_text(io.outputs[0], plot_landscape(layout));
  write_text(io.outputs[1], plot_distributions(concentration, "Pairwise similarity within groups"));
  write_text(io.outputs[2], plot_distributions(shift, "Similarity between the two versions of each author"));
  write_text(io.outputs[3], plot_affinity(affinities));
  log << "plot: wrote " << io.outputs.size() << " figures\n";
  return io;
}

}  // namespace

void run_stage(const std::string& stage, const RunConfig& config, std::ostream& log) {
  config.validate(stage);
  fs::create_directories(config.output_dir);

  StageIo io;
  if (stage == "synth") {
    io = stage_synth(config, log);
  } else if (stage == "ingest") {
    io = stage_ingest(config, log);
  } else if (stage == "preprocess") {
    io = stage_preprocess(config, log);
  } else if (stage == "train") {
    io = stage_train(config, log);
  } else if (stage == "analyze") {
    io = stage_analyze(config, log);
  } else if (stage == "project") {
    io = stage_project(config, log);
  } else if (stage == "plot") {
    io = stage_plot(config, log);
  } else {
    throw ConfigError("unknown stage '" + stage + "'");
  }

  ManifestEntry entry;
  entry.stage = stage;
  entry.config_digest = sha256_hex(config.canonical());
  for (const auto& p : io.inputs) entry.inputs.emplace_back(p.filename().string(), file_digest(p));
  for (const auto& p : io.outputs) entry.outputs.emplace_back(p.filename().string(), file_digest(p));
  Manifest manifest = Manifest::load(config.output_dir);
  manifest.record(std::move(entry));
  manifest.save(config.output_dir);
}

void run_pipeline(const RunConfig& config, std::ostream& log) {
  config.validate("pipeline");
  for (const auto& stage : kPipelineStages) run_stage(stage, config, log);
}

}  // namespace spkl
