#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "spkl/analysis.hpp"
#include "spkl/embedding.hpp"
#include "spkl/inject.hpp"
#include "spkl/stats.hpp"

namespace spkl {

inline constexpr const char* kPairwise = "pairwise";
inline constexpr const char* kCentroid = "centroid";

/// One row of the group concentration table (group, variant, mean, std, n).
struct GroupSummaryRow {
  std::string group;
  std::string variant;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;

  friend bool operator==(const GroupSummaryRow&, const GroupSummaryRow&) = default;
};

/// KS and Student t between two labelled samples.
struct ComparisonRow {
  std::string left;
  std::string right;
  std::string variant;
  double ks_statistic = 0.0;
  double ks_p = 1.0;
  double t_statistic = 0.0;
  double t_p = 1.0;

  friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

struct ShiftRow {
  std::string author;
  std::string group;
  double shift = 0.0;

  friend bool operator==(const ShiftRow&, const ShiftRow&) = default;
};

struct AffinityRow {
  std::string group;
  std::string topic;
  double affinity = 0.0;
  std::size_t found = 0;
  std::vector<std::string> missing;

  friend bool operator==(const AffinityRow&, const AffinityRow&) = default;
};

struct AnalysisReport {
  /// Labels "<group>:<variant>", e.g. "A/single:pairwise".
  std::vector<SimilarityDistribution> distributions;
  std::vector<GroupSummaryRow> summary;
  std::vector<ComparisonRow> comparisons;
  std::vector<ShiftRow> shifts;
  std::vector<AffinityRow> affinities;

  const SimilarityDistribution* find(const std::string& group, const std::string& variant) const;
  const ComparisonRow* comparison(const std::string& left, const std::string& right,
                                  const std::string& variant) const;
};

struct AnalyzeOptions {
  PairwiseOptions pairwise;
  /// Speakers whose token is absent from this set are skipped (empty = keep all).
  std::vector<std::string> allowed_authors;
};

/// Concentration (both variants) for the four groups, all pairwise group
/// comparisons, per-author audience shift with an A-vs-B comparison, and
/// group-by-topic affinities.
AnalysisReport run_analysis(const EmbeddingModel& model, std::span<const SpeakerInfo> speakers,
                            std::span<const TopicLexicon> lexicons, const AnalyzeOptions& options = {});

/// Writes group_summary.csv, group_tests.csv, ks_matrix.csv, audience_shift.csv,
/// topic_affinity.csv and distributions.csv into `dir`; returns the paths.
std::vector<std::filesystem::path> write_report(const AnalysisReport& report, const std::filesystem::path& dir);

void write_group_summary(const std::filesystem::path& path, std::span<const GroupSummaryRow> rows);
std::vector<GroupSummaryRow> read_group_summary(const std::filesystem::path& path);
void write_comparisons(const std::filesystem::path& path, std::span<const ComparisonRow> rows);
std::vector<ComparisonRow> read_comparisons(const std::filesystem::path& path);
/// Square table: one row per group, "<g>:D" and "<g>:p" columns per group.
void write_ks_matrix(const std::filesystem::path& path, const AnalysisReport& report, const std::string& variant);
void write_shifts(const std::filesystem::path& path, std::span<const ShiftRow> rows);
std::vector<ShiftRow> read_shifts(const std::filesystem::path& path);
void write_affinities(const std::filesystem::path& path, std::span<const AffinityRow> rows);
std::vector<AffinityRow> read_affinities(const std::filesystem::path& path);
void write_distributions(const std::filesystem::path& path, std::span<const SimilarityDistribution> dists);
std::vector<SimilarityDistribution> read_distributions(const std::filesystem::path& path);

}  // namespace spkl
