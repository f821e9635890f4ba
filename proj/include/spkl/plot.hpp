#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spkl/analysis.hpp"
#include "spkl/projection.hpp"
#include "spkl/report.hpp"

namespace spkl {

inline constexpr const char* kAxesCaveat = "Axes and distances are not directly interpretable.";

/// Scatter plot of a 2D layout: one marker per speaker point coloured by its
/// group, plus (when present) topic keywords, whose group label starts with
/// "topic:", as smaller markers coloured by topic.
std::string plot_landscape(const Layout2D& layout, const std::string& title = "Speaker landscape");

/// Gaussian kernel density of `values` on `points` evenly spaced x in [lo, hi].
/// A sample with zero spread uses a narrow fixed bandwidth (a spike).
std::vector<std::pair<double, double>> density_curve(std::span<const double> values, double lo = -1.0,
                                                     double hi = 1.0, std::size_t points = 201);

/// Density curves of several similarity distributions on a shared [-1, 1] axis.
std::string plot_distributions(std::span<const SimilarityDistribution> distributions,
                               const std::string& title = "Similarity within groups");

/// Group x topic heatmap of cosine affinities.
std::string plot_affinity(std::span<const AffinityRow> rows, const std::string& title = "Topic affinity");

}  // namespace spkl
