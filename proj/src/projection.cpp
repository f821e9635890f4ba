#include "spkl/projection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "spkl/csv.hpp"
#include "spkl/error.hpp"
#include "spkl/random.hpp"

namespace spkl {

void ProjectionConfig::validate() const {
  std::vector<std::string> problems;
  if (n_neighbors < 2) problems.push_back("project.n_neighbors must be >= 2");
  if (!(min_dist >= 0.0 && min_dist < 1.0)) problems.push_back("project.min_dist must be in [0, 1)");
  if (!(spread > 0.0)) problems.push_back("project.spread must be > 0");
  if (min_dist > spread) problems.push_back("project.min_dist must not exceed project.spread");
  if (epochs < 1) problems.push_back("project.epochs must be >= 1");
  if (negative_sample_rate < 0) problems.push_back("project.negative_sample_rate must be >= 0");
  if (!(learning_rate > 0.0)) problems.push_back("project.learning_rate must be > 0");
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    throw ConfigError(msg);
  }
}

double point_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Metric metric) {
  if (metric == Metric::Euclidean) return (a - b).norm();
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw DataError("cosine distance of a zero vector");
  return std::max(0.0, 1.0 - a.dot(b) / (na * nb));
}

KnnResult knn(const Eigen::MatrixXd& points, int k, Metric metric) {
  const Eigen::Index n = points.rows();
  if (k < 1 || k >= n) {
    throw ConfigError("knn: k = " + std::to_string(k) + " must be in [1, " + std::to_string(n - 1) + "]");
  }
  Eigen::MatrixXd unit = points;
  if (metric == Metric::Cosine) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double norm = unit.row(i).norm();
      if (norm == 0.0) throw DataError("knn: zero vector at row " + std::to_string(i));
      unit.row(i) /= norm;
    }
  }

  KnnResult r;
  r.indices.resize(n, k);
  r.distances.resize(n, k);
  std::vector<int> order(static_cast<std::size_t>(n));
  Eigen::VectorXd dist(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (metric == Metric::Cosine) {
      dist = (1.0 - (unit * unit.row(i).transpose()).array()).max(0.0).matrix();
    } else {
      dist = (unit.rowwise() - unit.row(i)).rowwise().norm();
    }
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::erase(order, static_cast<int>(i));
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
      return dist(a) < dist(b) || (dist(a) == dist(b) && a < b);
    });
    for (int j = 0; j < k; ++j) {
      r.indices(i, j) = order[static_cast<std::size_t>(j)];
      r.distances(i, j) = dist(order[static_cast<std::size_t>(j)]);
    }
  }
  return r;
}

FuzzyGraph fuzzy_graph(const KnnResult& neighbors) {
  const Eigen::Index n = neighbors.indices.rows();
  const int k = neighbors.k();
  const double target = std::log2(static_cast<double>(k));
  constexpr int kMaxIter = 64;

  FuzzyGraph g;
  g.rho.resize(n);
  g.sigma.resize(n);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(n * k));

  for (Eigen::Index i = 0; i < n; ++i) {
    const double rho = neighbors.distances(i, 0);
    auto membership_sum = [&](double sigma) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += std::exp(-std::max(0.0, neighbors.distances(i, j) - rho) / sigma);
      return s;
    };
    // The sum grows monotonically with sigma; bracket by doubling, then bisect.
    double lo = 0.0, hi = std::numeric_limits<double>::infinity(), sigma = 1.0;
    bool converged = false;
    for (int it = 0; it < kMaxIter; ++it) {
      const double s = membership_sum(sigma);
      if (std::abs(s - target) <= 1e-12 * target) {
        converged = true;
        break;
      }
      if (s > target) {
        hi = sigma;
      } else {
        lo = sigma;
      }
      const double next = std::isinf(hi) ? sigma * 2.0 : 0.5 * (lo + hi);
      if (next == sigma) {
        converged = true;
        break;
      }
      sigma = next;
    }
    if (!converged) {
      // Clamp to a small multiple of the mean neighbour distance so that
      // degenerate neighbourhoods (all distances equal) still get finite weights.
      ++g.unconverged;
      const double mean_dist = neighbors.distances.row(i).mean();
      sigma = std::max(sigma, 1e-3 * (mean_dist > 0.0 ? mean_dist : 1.0));
    }
    g.rho(i) = rho;
    g.sigma(i) = sigma;
    for (int j = 0; j < k; ++j) {
      const double w = std::exp(-std::max(0.0, neighbors.distances(i, j) - rho) / sigma);
      triplets.emplace_back(i, neighbors.indices(i, j), w);
    }
  }

  g.directed.resize(n, n);
  g.directed.setFromTriplets(triplets.begin(), triplets.end());
  const Eigen::SparseMatrix<double> transposed = g.directed.transpose();
  g.weights = g.directed + transposed - g.directed.cwiseProduct(transposed);
  g.weights.prune(0.0);
  return g;
}

CurveParams fit_ab(double min_dist, double spread) {
  constexpr int kPoints = 300;
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(kPoints, 0.0, 3.0 * spread);
  Eigen::VectorXd y(kPoints);
  for (int i = 0; i < kPoints; ++i) y(i) = x(i) < min_dist ? 1.0 : std::exp(-(x(i) - min_dist) / spread);

  // Levenberg-Marquardt on the two parameters.
  Eigen::Vector2d p(1.0, 1.0);
  auto residuals = [&](const Eigen::Vector2d& q, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    r.resize(kPoints);
    if (jac) jac->resize(kPoints, 2);
    for (int i = 0; i < kPoints; ++i) {
      const double xi = x(i);
      const double pow2b = xi > 0.0 ? std::pow(xi, 2.0 * q(1)) : 0.0;
      const double denom = 1.0 + q(0) * pow2b;
      r(i) = 1.0 / denom - y(i);
      if (jac) {
        const double dr = -1.0 / (denom * denom);
        (*jac)(i, 0) = dr * pow2b;
        (*jac)(i, 1) = xi > 0.0 ? dr * q(0) * pow2b * 2.0 * std::log(xi) : 0.0;
      }
    }
  };
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residuals(p, r, &jac);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  for (int iter = 0; iter < 500; ++iter) {
    const Eigen::Matrix2d jtj = jac.transpose() * jac;
    const Eigen::Vector2d jtr = jac.transpose() * r;
    Eigen::Matrix2d damped = jtj;
    damped.diagonal() += lambda * jtj.diagonal();
    const Eigen::Vector2d step = damped.ldlt().solve(-jtr);
    Eigen::Vector2d candidate = p + step;
    candidate = candidate.cwiseMax(1e-6);
    Eigen::VectorXd rc;
    residuals(candidate, rc, nullptr);
    const double cand_cost = rc.squaredNorm();
    if (cand_cost < cost) {
      const double gain = cost - cand_cost;
      p = candidate;
      residuals(p, r, &jac);
      cost = cand_cost;
      lambda = std::max(lambda * 0.3, 1e-12);
      if (gain < 1e-15 * std::max(cost, 1e-300) && step.norm() < 1e-12) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
  }
  return {p(0), p(1)};
}

namespace {

double clip(double v) { return std::clamp(v, -4.0, 4.0); }

}  // namespace

Eigen::MatrixXd layout(const FuzzyGraph& graph, const ProjectionConfig& config, CurveParams curve) {
  const Eigen::Index n = graph.size();
  if (n == 0) return Eigen::MatrixXd(0, 2);
  const double a = curve.a, b = curve.b;

  struct Edge {
    Eigen::Index head, tail;
    double weight;
  };
  std::vector<Edge> edges;
  double max_w = 0.0;
  for (Eigen::Index col = 0; col < graph.weights.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(graph.weights, col); it; ++it) {
      if (it.row() == it.col() || it.value() <= 0.0) continue;
      edges.push_back({it.row(), it.col(), it.value()});
      max_w = std::max(max_w, it.value());
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.head, x.tail) < std::tie(y.head, y.tail);
  });
  const double n_epochs = static_cast<double>(config.epochs);
  std::erase_if(edges, [&](const Edge& e) { return e.weight < max_w / n_epochs; });

  std::vector<double> epochs_per_sample, next_sample, epochs_per_negative, next_negative;
  for (const auto& e : edges) {
    const double eps = max_w / e.weight;
    epochs_per_sample.push_back(eps);
    next_sample.push_back(eps);
    const double neg = config.negative_sample_rate > 0 ? eps / config.negative_sample_rate
                                                       : std::numeric_limits<double>::infinity();
    epochs_per_negative.push_back(neg);
    next_negative.push_back(neg);
  }

  Rng rng(derive_seed(config.seed, "layout"));
  Eigen::MatrixXd y(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    y(i, 0) = uniform01(rng) * 20.0 - 10.0;
    y(i, 1) = uniform01(rng) * 20.0 - 10.0;
  }

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double alpha = config.learning_rate * (1.0 - epoch / n_epochs);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (next_sample[e] > epoch) continue;
      const Eigen::Index j = edges[e].head, k = edges[e].tail;

      Eigen::Vector2d diff = y.row(j) - y.row(k);
      double d2 = diff.squaredNorm();
      if (d2 > 0.0) {
        const double coeff = -2.0 * a * b * std::pow(d2, b - 1.0) / (a * std::pow(d2, b) + 1.0);
        for (int dim = 0; dim < 2; ++dim) {
          const double grad = clip(coeff * diff(dim)) * alpha;
          y(j, dim) += grad;
          y(k, dim) -= grad;
        }
      }
      next_sample[e] += epochs_per_sample[e];

      const int n_neg = static_cast<int>((epoch - next_negative[e]) / epochs_per_negative[e]);
      for (int s = 0; s < n_neg; ++s) {
        const auto other = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
        if (other == j) continue;
        diff = y.row(j) - y.row(other);
        d2 = diff.squaredNorm();
        double coeff = 0.0;
        if (d2 > 0.0) coeff = 2.0 * b / ((0.001 + d2) * (a * std::pow(d2, b) + 1.0));
        for (int dim = 0; dim < 2; ++dim) {
          const double grad = coeff > 0.0 ? clip(coeff * diff(dim)) : 4.0;
          y(j, dim) += grad * alpha;
        }
      }
      if (n_neg > 0) next_negative[e] += n_neg * epochs_per_negative[e];
    }
  }
  if (!y.allFinite()) throw InvariantError("layout produced non-finite coordinates");
  return y;
}

Layout2D project(const Eigen::MatrixXd& points, std::vector<std::string> tokens,
                 std::vector<std::string> groups, const ProjectionConfig& config) {
  config.validate();
  if (static_cast<Eigen::Index>(tokens.size()) != points.rows() || groups.size() != tokens.size()) {
    throw DataError("project: token/group labels do not match the point count");
  }
  Layout2D out;
  out.tokens = std::move(tokens);
  out.groups = std::move(groups);
  out.config = config;
  out.curve = fit_ab(config.min_dist, config.spread);
  if (points.rows() < 2) {
    out.coords = Eigen::MatrixXd::Zero(points.rows(), 2);
    return out;
  }
  const int k = std::min<int>(config.n_neighbors, static_cast<int>(points.rows()) - 1);
  const FuzzyGraph graph = fuzzy_graph(knn(points, k, config.metric));
  out.coords = layout(graph, config, out.curve);
  return out;
}

void write_layout_csv(const std::filesystem::path& path, const Layout2D& layout) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write layout: " + path.string());
  csv::write_row(out, {"token", "group", "x", "y"});
  for (std::size_t i = 0; i < layout.tokens.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    csv::write_row(out, {layout.tokens[i], layout.groups[i], csv::format_double(layout.coords(r, 0)),
                         csv::format_double(layout.coords(r, 1))});
  }
}

Layout2D read_layout_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open layout: " + path.string());
  std::vector<std::string> row;
  if (!csv::read_row(in, row) || row != std::vector<std::string>{"token", "group", "x", "y"}) {
    throw DataError(path.string() + ": unexpected layout header");
  }
  Layout2D out;
  std::vector<Eigen::Vector2d> pts;
  while (csv::read_row(in, row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 4) throw DataError(path.string() + ": malformed layout row");
    out.tokens.push_back(row[0]);
    out.groups.push_back(row[1]);
    pts.emplace_back(csv::parse_double(row[2]), csv::parse_double(row[3]));
  }
  out.coords.resize(static_cast<Eigen::Index>(pts.size()), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) out.coords.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
  return out;
}

}  // namespace spkl
