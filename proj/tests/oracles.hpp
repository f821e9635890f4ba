// Reference implementations used only by the tests. They favour the most
// literal formulation over speed and share no code with the library.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(dot / std::sqrt(na * nb));
}

inline std::vector<double> centroid(const std::vector<std::vector<double>>& rows) {
  std::vector<long double> acc(rows.front().size(), 0.0L);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < r.size(); ++j) acc[j] += r[j];
  std::vector<double> out(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) out[j] = static_cast<double>(acc[j] / rows.size());
  return out;
}

// Fraction of the sample <= t, by counting.
inline double ecdf(const std::vector<double>& s, double t) {
  std::size_t c = 0;
  for (double v : s) c += v <= t;
  return static_cast<double>(c) / static_cast<double>(s.size());
}

// sup |F_x - F_y| evaluated at every jump point of either sample.
inline double ks_statistic(const std::vector<double>& x, const std::vector<double>& y) {
  double d = 0.0;
  for (const auto* s : {&x, &y})
    for (double t : *s) d = std::max(d, std::abs(ecdf(x, t) - ecdf(y, t)));
  return d;
}

// Exact P(D >= d) for continuous data by enumerating every interleaving of
// n x's and m y's (feasible for n + m <= ~16).
inline double ks_exact_enumerated(std::size_t n, std::size_t m, double d) {
  const std::size_t total = n + m;
  std::size_t hits = 0, all = 0;
  for (unsigned mask = 0; mask < (1u << total); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != n) continue;
    ++all;
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    for (std::size_t k = 0; k < total; ++k) {
      ((mask >> k) & 1u) ? ++i : ++j;
      sup = std::max(sup, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    hits += sup >= d - 1e-12;
  }
  return static_cast<double>(hits) / static_cast<double>(all);
}

struct PooledT {
  double t;
  double df;
};

// Textbook pooled-variance two-sample t with a two-pass variance.
inline PooledT pooled_t(const std::vector<double>& x, const std::vector<double>& y) {
  auto mean = [](const std::vector<double>& s) {
    long double a = 0;
    for (double v : s) a += v;
    return a / s.size();
  };
  auto ss = [](const std::vector<double>& s, long double m) {
    long double a = 0;
    for (double v : s) a += (v - m) * (v - m);
    return a;
  };
  const long double mx = mean(x), my = mean(y);
  const double nx = x.size(), ny = y.size();
  const long double sp2 = (ss(x, mx) + ss(y, my)) / (nx + ny - 2);
  const long double se = std::sqrt(sp2 * (1.0L / nx + 1.0L / ny));
  return {static_cast<double>((mx - my) / se), nx + ny - 2};
}

// Two-sided Student t p-value by Simpson integration of the density.
inline double t_two_sided_p(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  auto f = [&](double s) { return c * std::pow(1 + s * s / df, -(df + 1) / 2); };
  const double a = 0.0, b = std::abs(t);
  const int n = 20000;
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4 : 2);
  return 1.0 - 2.0 * acc * h / 3.0;
}

// Exhaustive neighbour scan; ties resolved by the smaller index.
inline std::vector<std::vector<std::pair<double, int>>> knn_scan(const Eigen::MatrixXd& x, int k, bool cosine_metric) {
  const int n = static_cast<int>(x.rows());
  std::vector<std::vector<std::pair<double, int>>> out(n);
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> all;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double d;
      if (cosine_metric) {
        d = 1.0 - x.row(i).dot(x.row(j)) / (x.row(i).norm() * x.row(j).norm());
        d = std::max(0.0, d);
      } else {
        d = (x.row(i) - x.row(j)).norm();
      }
      all.emplace_back(d, j);
    }
    std::sort(all.begin(), all.end());
    all.resize(static_cast<std::size_t>(k));
    out[static_cast<std::size_t>(i)] = all;
  }
  return out;
}

// Membership strengths straight from the definition: rho is the nearest
// distance and sigma solves sum_j exp(-(d_j - rho)/sigma) = log2(k) by a
// plain bisection on [1e-12, 1e6].
inline std::vector<std::vector<double>> fuzzy_weights(const std::vector<std::vector<std::pair<double, int>>>& nn) {
  const std::size_t n = nn.size();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = nn[i].front().first;
    const double target = std::log2(static_cast<double>(nn[i].size()));
    auto total = [&](double sigma) {
      double s = 0;
      for (const auto& [d, j] : nn[i]) s += std::exp(-std::max(0.0, d - rho) / sigma);
      return s;
    };
    double lo = 1e-12, hi = 1e6;
    for (int it = 0; it < 300; ++it) {
      const double mid = 0.5 * (lo + hi);
      (total(mid) > target ? hi : lo) = mid;
    }
    const double sigma = 0.5 * (lo + hi);
    for (const auto& [d, j] : nn[i]) w[i][static_cast<std::size_t>(j)] = std::exp(-std::max(0.0, d - rho) / sigma);
  }
  std::vector<std::vector<double>> s(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s[i][j] = w[i][j] + w[j][i] - w[i][j] * w[j][i];
  return s;
}

// Mean silhouette coefficient with Euclidean distance.
inline double silhouette(const Eigen::MatrixXd& y, const std::vector<int>& label) {
  const std::size_t n = label.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double same = 0, other = 0;
    std::size_t ns = 0, no = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (y.row(static_cast<Eigen::Index>(i)) - y.row(static_cast<Eigen::Index>(j))).norm();
      if (label[j] == label[i]) {
        same += d;
        ++ns;
      } else {
        other += d;
        ++no;
      }
    }
    const double a = same / ns, b = other / no;
    total += (b - a) / std::max(a, b);
  }
  return total / n;
}

// Mean over points of |kNN_2d(i) ∩ kNN_hd(i)| / k_2d.
inline double neighbour_preservation(const Eigen::MatrixXd& high, const Eigen::MatrixXd& low, int k_low, int k_high,
                                     bool cosine_high) {
  const auto hn = knn_scan(high, k_high, cosine_high);
  const auto ln = knn_scan(low, k_low, false);
  double acc = 0.0;
  for (std::size_t i = 0; i < hn.size(); ++i) {
    std::set<int> h;
    for (const auto& p : hn[i]) h.insert(p.second);
    int hit = 0;
    for (const auto& p : ln[i]) hit += h.count(p.second) ? 1 : 0;
    acc += static_cast<double>(hit) / k_low;
  }
  return acc / static_cast<double>(hn.size());
}

// Central finite-difference gradient of f at x.
inline Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x,
                                        double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

// Literal SGNS loss: -log s(u.v) - sum log s(-u.n).
inline double sgns_loss(const Eigen::VectorXd& u, const Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& negs) {
  auto s = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
  double l = -std::log(s(u.dot(v)));
  for (const auto& n : negs) l -= std::log(s(-u.dot(n)));
  return l;
}

}  // namespace oracle
