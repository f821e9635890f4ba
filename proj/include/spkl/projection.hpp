#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace spkl {

enum class Metric { Cosine, Euclidean };

struct ProjectionConfig {
  int n_neighbors = 15;
  double min_dist = 0.1;
  double spread = 1.0;
  int epochs = 500;
  int negative_sample_rate = 5;
  double learning_rate = 1.0;
  std::uint64_t seed = 1;
  Metric metric = Metric::Cosine;

  /// Throws ConfigError listing every violated constraint.
  void validate() const;
};

/// k nearest neighbours of every point (self excluded), ascending by distance,
/// ties by index.
struct KnnResult {
  Eigen::MatrixXi indices;     ///< n x k
  Eigen::MatrixXd distances;   ///< n x k
  int k() const { return static_cast<int>(indices.cols()); }
};

/// 1 - cosine for Metric::Cosine.
double point_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Metric metric);

/// Exhaustive scan. Throws ConfigError unless 1 <= k < rows.
KnnResult knn(const Eigen::MatrixXd& points, int k, Metric metric = Metric::Cosine);

struct FuzzyGraph {
  Eigen::SparseMatrix<double> directed;  ///< row i: exp(-max(0, d_ij - rho_i) / sigma_i)
  Eigen::SparseMatrix<double> weights;   ///< symmetrised: w + w^T - w o w^T
  Eigen::VectorXd rho;
  Eigen::VectorXd sigma;
  std::size_t unconverged = 0;  ///< points whose sigma search hit the iteration cap

  Eigen::Index size() const { return weights.rows(); }
};

/// Per point: rho = nearest distance, sigma by bisection so that the membership
/// strengths sum to log2(k); then fuzzy union symmetrisation.
FuzzyGraph fuzzy_graph(const KnnResult& neighbors);

/// Least-squares fit of 1 / (1 + a x^(2b)) to the min_dist/spread target curve
/// on 300 points of [0, 3 spread].
struct CurveParams {
  double a = 0.0;
  double b = 0.0;
};
CurveParams fit_ab(double min_dist, double spread = 1.0);

/// SGD layout: attraction along sampled edges, negative-sampled repulsion.
/// Deterministic for a given seed. Returns n x 2 coordinates.
Eigen::MatrixXd layout(const FuzzyGraph& graph, const ProjectionConfig& config, CurveParams curve);

/// Two-dimensional positions of labelled tokens. Axes and distances carry no
/// direct meaning; only neighbourhoods do.
struct Layout2D {
  std::vector<std::string> tokens;
  std::vector<std::string> groups;  ///< per-token label used for colouring
  Eigen::MatrixXd coords;           ///< n x 2
  ProjectionConfig config;
  CurveParams curve;
};

/// knn -> fuzzy_graph -> layout with fitted (a, b).
Layout2D project(const Eigen::MatrixXd& points, std::vector<std::string> tokens,
                 std::vector<std::string> groups, const ProjectionConfig& config);

/// CSV columns: token, group, x, y.
void write_layout_csv(const std::filesystem::path& path, const Layout2D& layout);
Layout2D read_layout_csv(const std::filesystem::path& path);

}  // namespace spkl
