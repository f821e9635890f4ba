#include "spkl/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "spkl/csv.hpp"
#include "spkl/error.hpp"

namespace spkl {

const SimilarityDistribution* AnalysisReport::find(const std::string& group, const std::string& variant) const {
  const std::string label = group + ":" + variant;
  for (const auto& d : distributions) {
    if (d.label == label) return &d;
  }
  return nullptr;
}

const ComparisonRow* AnalysisReport::comparison(const std::string& left, const std::string& right,
                                                const std::string& variant) const {
  for (const auto& c : comparisons) {
    if (c.variant != variant) continue;
    if ((c.left == left && c.right == right) || (c.left == right && c.right == left)) return &c;
  }
  return nullptr;
}

namespace {

ComparisonRow compare(const std::string& left, const std::string& right, const std::string& variant,
                      std::span<const double> x, std::span<const double> y) {
  ComparisonRow row{left, right, variant};
  const auto ks = ks_two_sample(x, y);
  row.ks_statistic = ks.statistic;
  row.ks_p = ks.p_value;
  row.t_statistic = std::numeric_limits<double>::quiet_NaN();
  row.t_p = std::numeric_limits<double>::quiet_NaN();
  if (x.size() >= 2 && y.size() >= 2) {
    try {
      const auto t = t_test(x, y);
      row.t_statistic = t.statistic;
      row.t_p = t.p_value;
    } catch (const DataError&) {
      // zero variance with different means: no finite statistic
    }
  }
  return row;
}

}  // namespace

AnalysisReport run_analysis(const EmbeddingModel& model, std::span<const SpeakerInfo> speakers,
                            std::span<const TopicLexicon> lexicons, const AnalyzeOptions& options) {
  const std::set<std::string> allowed(options.allowed_authors.begin(), options.allowed_authors.end());
  std::vector<SpeakerInfo> kept;
  for (const auto& s : speakers) {
    if (allowed.empty() || allowed.contains(s.author)) kept.push_back(s);
  }

  AnalysisReport report;
  std::map<std::size_t, Eigen::MatrixXd> group_vectors;
  for (const auto key : kGroupKeys) {
    const auto tokens = group_tokens(kept, key, model);
    if (tokens.empty()) continue;
    group_vectors[key.index()] = token_vectors(model, tokens);
    const auto& vectors = group_vectors[key.index()];
    if (vectors.rows() >= 2) {
      auto d = group_concentration_pairwise(vectors, key.name() + ":" + kPairwise, options.pairwise);
      report.summary.push_back({key.name(), kPairwise, d.summary.mean, d.summary.stddev, d.summary.count});
      report.distributions.push_back(std::move(d));
    }
    if (centroid(vectors).norm() > 0.0) {
      auto d = group_concentration_centroid(vectors, key.name() + ":" + kCentroid);
      report.summary.push_back({key.name(), kCentroid, d.summary.mean, d.summary.stddev, d.summary.count});
      report.distributions.push_back(std::move(d));
    }
  }

  for (const char* variant : {kPairwise, kCentroid}) {
    for (std::size_t i = 0; i < kGroupKeys.size(); ++i) {
      for (std::size_t j = i + 1; j < kGroupKeys.size(); ++j) {
        const auto* x = report.find(kGroupKeys[i].name(), variant);
        const auto* y = report.find(kGroupKeys[j].name(), variant);
        if (!x || !y) continue;
        report.comparisons.push_back(
            compare(kGroupKeys[i].name(), kGroupKeys[j].name(), variant, x->values, y->values));
      }
    }
  }

  std::map<std::string, Group> authors;
  for (const auto& s : kept) authors.emplace(s.author, s.group);
  std::array<std::vector<double>, 2> shifts;
  for (const auto& [author, group] : authors) {
    const bool both = model.vocab.contains(SpeakerToken{author, Context::Single}.render()) &&
                      model.vocab.contains(SpeakerToken{author, Context::Mixed}.render());
    if (!both) continue;
    const double s = audience_shift(model, author);
    report.shifts.push_back({author, std::string(to_string(group)), s});
    shifts[static_cast<std::size_t>(group)].push_back(s);
  }
  for (Group g : kGroups) {
    if (!shifts[static_cast<std::size_t>(g)].empty()) {
      report.distributions.push_back(
          make_distribution(std::string(to_string(g)) + ":shift", shifts[static_cast<std::size_t>(g)]));
    }
  }
  if (!shifts[0].empty() && !shifts[1].empty()) {
    report.comparisons.push_back(compare("A", "B", "shift", shifts[0], shifts[1]));
  }

  for (const auto key : kGroupKeys) {
    auto it = group_vectors.find(key.index());
    if (it == group_vectors.end()) continue;
    for (const auto& lex : lexicons) {
      AffinityRow row;
      row.group = key.name();
      row.topic = lex.name;
      try {
        const auto a = topic_affinity(it->second, lex, model);
        row.affinity = a.value;
        row.found = a.found.size();
        row.missing = a.missing;
      } catch (const DataError&) {
        row.affinity = std::numeric_limits<double>::quiet_NaN();
        row.missing = lex.keywords;
      }
      report.affinities.push_back(std::move(row));
    }
  }
  return report;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, const std::vector<std::string>& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> row;
  if (!csv::read_row(in, row) || row != header) throw DataError(path.string() + ": unexpected header");
  return in;
}

template <typename F>
void for_rows(std::ifstream& in, const std::filesystem::path& path, std::size_t width, F&& f) {
  std::vector<std::string> row;
  while (csv::read_row(in, row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != width) throw DataError(path.string() + ": row has " + std::to_string(row.size()) + " fields");
    f(row);
  }
}

const std::vector<std::string> kSummaryHeader{"group", "variant", "mean", "std", "n"};
const std::vector<std::string> kComparisonHeader{"left", "right", "variant", "ks_D", "ks_p", "t", "t_p"};
const std::vector<std::string> kShiftHeader{"author", "group", "shift"};
const std::vector<std::string> kAffinityHeader{"group", "topic", "affinity", "found", "missing"};
const std::vector<std::string> kDistributionHeader{"label", "value"};

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : std::string(1, sep)) + p;
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

void write_group_summary(const std::filesystem::path& path, std::span<const GroupSummaryRow> rows) {
  auto out = open_out(path);
  csv::write_row(out, kSummaryHeader);
  for (const auto& r : rows) {
    csv::write_row(out, {r.group, r.variant, csv::format_double(r.mean), csv::format_double(r.stddev),
                         std::to_string(r.count)});
  }
}

std::vector<GroupSummaryRow> read_group_summary(const std::filesystem::path& path) {
  auto in = open_in(path, kSummaryHeader);
  std::vector<GroupSummaryRow> rows;
  for_rows(in, path, kSummaryHeader.size(), [&](const auto& f) {
    rows.push_back({f[0], f[1], csv::parse_double(f[2]), csv::parse_double(f[3]), std::stoull(f[4])});
  });
  return rows;
}

void write_comparisons(const std::filesystem::path& path, std::span<const ComparisonRow> rows) {
  auto out = open_out(path);
  csv::write_row(out, kComparisonHeader);
  for (const auto& r : rows) {
    csv::write_row(out, {r.left, r.right, r.variant, csv::format_double(r.ks_statistic), csv::format_double(r.ks_p),
                         csv::format_double(r.t_statistic), csv::format_double(r.t_p)});
  }
}

std::vector<ComparisonRow> read_comparisons(const std::filesystem::path& path) {
  auto in = open_in(path, kComparisonHeader);
  std::vector<ComparisonRow> rows;
  for_rows(in, path, kComparisonHeader.size(), [&](const auto& f) {
    rows.push_back({f[0], f[1], f[2], csv::parse_double(f[3]), csv::parse_double(f[4]), csv::parse_double(f[5]),
                    csv::parse_double(f[6])});
  });
  return rows;
}

void write_ks_matrix(const std::filesystem::path& path, const AnalysisReport& report, const std::string& variant) {
  auto out = open_out(path);
  std::vector<std::string> header{"group"};
  for (const auto key : kGroupKeys) {
    header.push_back(key.name() + ":D");
    header.push_back(key.name() + ":p");
  }
  csv::write_row(out, header);
  for (const auto row_key : kGroupKeys) {
    std::vector<std::string> row{row_key.name()};
    for (const auto col_key : kGroupKeys) {
      if (row_key == col_key) {
        row.insert(row.end(), {"0", "1"});
      } else if (const auto* c = report.comparison(row_key.name(), col_key.name(), variant)) {
        row.push_back(csv::format_double(c->ks_statistic));
        row.push_back(csv::format_double(c->ks_p));
      } else {
        row.insert(row.end(), {"", ""});
      }
    }
    csv::write_row(out, row);
  }
}

void write_shifts(const std::filesystem::path& path, std::span<const ShiftRow> rows) {
  auto out = open_out(path);
  csv::write_row(out, kShiftHeader);
  for (const auto& r : rows) csv::write_row(out, {r.author, r.group, csv::format_double(r.shift)});
}

std::vector<ShiftRow> read_shifts(const std::filesystem::path& path) {
  auto in = open_in(path, kShiftHeader);
  std::vector<ShiftRow> rows;
  for_rows(in, path, kShiftHeader.size(),
           [&](const auto& f) { rows.push_back({f[0], f[1], csv::parse_double(f[2])}); });
  return rows;
}

void write_affinities(const std::filesystem::path& path, std::span<const AffinityRow> rows) {
  auto out = open_out(path);
  csv::write_row(out, kAffinityHeader);
  for (const auto& r : rows) {
    csv::write_row(out, {r.group, r.topic, csv::format_double(r.affinity), std::to_string(r.found),
                         join(r.missing, ' ')});
  }
}

std::vector<AffinityRow> read_affinities(const std::filesystem::path& path) {
  auto in = open_in(path, kAffinityHeader);
  std::vector<AffinityRow> rows;
  for_rows(in, path, kAffinityHeader.size(), [&](const auto& f) {
    rows.push_back({f[0], f[1], csv::parse_double(f[2]), std::stoull(f[3]), split(f[4], ' ')});
  });
  return rows;
}

void write_distributions(const std::filesystem::path& path, std::span<const SimilarityDistribution> dists) {
  auto out = open_out(path);
  csv::write_row(out, kDistributionHeader);
  for (const auto& d : dists) {
    for (double v : d.values) csv::write_row(out, {d.label, csv::format_double(v)});
  }
}

std::vector<SimilarityDistribution> read_distributions(const std::filesystem::path& path) {
  auto in = open_in(path, kDistributionHeader);
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> values;
  for_rows(in, path, kDistributionHeader.size(), [&](const auto& f) {
    auto [it, inserted] = values.try_emplace(f[0]);
    if (inserted) order.push_back(f[0]);
    it->second.push_back(csv::parse_double(f[1]));
  });
  std::vector<SimilarityDistribution> out;
  for (const auto& label : order) out.push_back(make_distribution(label, std::move(values[label])));
  return out;
}

std::vector<std::filesystem::path> write_report(const AnalysisReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths{dir / "group_summary.csv", dir / "group_tests.csv",
                                           dir / "ks_matrix.csv",     dir / "audience_shift.csv",
                                           dir / "topic_affinity.csv", dir / "distributions.csv"};
  write_group_summary(paths[0], report.summary);
  write_comparisons(paths[1], report.comparisons);
  write_ks_matrix(paths[2], report, kCentroid);
  write_shifts(paths[3], report.shifts);
  write_affinities(paths[4], report.affinities);
  write_distributions(paths[5], report.distributions);
  return paths;
}

}  // namespace spkl
