#include "spkl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "spkl/error.hpp"

namespace spkl {

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // P(K <= l) = sqrt(2 pi) / l * sum_k exp(-(2k-1)^2 pi^2 / (8 l^2))
    const double w = pi * pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      cdf += std::exp(-odd * odd * w);
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  // P(K > l) = 2 sum_k (-1)^(k-1) exp(-2 k^2 l^2)
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw DataError("ks_two_sample: empty sample");
  std::vector<double> a(x.begin(), x.end()), b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());

  // Walk the merged jump points; ties advance both samples before comparing.
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      v = a[i];
    } else {
      v = b[j];
    }
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }

  KsResult r;
  r.statistic = d;
  const double ne = na * nb / (na + nb);
  r.p_value = kolmogorov_survival(std::sqrt(ne) * d);
  return r;
}

double ks_exact_p_value(std::size_t n, std::size_t m, double d) {
  if (n == 0 || m == 0) throw DataError("ks_exact_p_value: empty sample");
  if (d <= 0.0) return 1.0;
  // A path through (i, j) reaches D >= d iff |i/n - j/m| >= d, i.e.
  // |i m - j n| >= d n m (compared with a tolerance for rounding of d).
  const double bound = d * static_cast<double>(n) * static_cast<double>(m) - 1e-7;
  auto outside = [&](std::size_t i, std::size_t j) {
    const double diff = std::abs(static_cast<double>(i) * static_cast<double>(m) -
                                 static_cast<double>(j) * static_cast<double>(n));
    return diff >= bound;
  };
  // paths[j] = probability-weighted count of paths to (i, j) staying inside.
  // Each lattice path is uniformly likely under H0; normalise by C(n+m, n)
  // incrementally to avoid overflow.
  std::vector<double> paths(m + 1, 0.0);
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      double value;
      if (i == 0 && j == 0) {
        value = 1.0;
      } else {
        const double from_left = i > 0 ? paths[j] * static_cast<double>(i) / static_cast<double>(i + j) : 0.0;
        const double from_below =
            j > 0 ? paths[j - 1] * static_cast<double>(j) / static_cast<double>(i + j) : 0.0;
        value = from_left + from_below;
      }
      paths[j] = outside(i, j) ? 0.0 : value;
    }
  }
  return std::clamp(1.0 - paths[m], 0.0, 1.0);
}

TTestResult t_test(std::span<const double> x, std::span<const double> y, TTestVariant variant) {
  if (x.size() < 2 || y.size() < 2) throw DataError("t_test: each sample needs at least 2 values");
  const double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
  const double m1 = mean(x), m2 = mean(y);
  const double v1 = std::pow(stddev(x), 2), v2 = std::pow(stddev(y), 2);

  TTestResult r;
  double se2;
  if (variant == TTestVariant::Student) {
    r.df = n1 + n2 - 2.0;
    const double pooled = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / r.df;
    se2 = pooled * (1.0 / n1 + 1.0 / n2);
  } else {
    const double a = v1 / n1, b = v2 / n2;
    se2 = a + b;
    r.df = se2 > 0.0 ? se2 * se2 / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0)) : n1 + n2 - 2.0;
  }
  if (se2 <= 0.0) {
    if (m1 == m2) {
      r.statistic = 0.0;
      r.p_value = 1.0;
      return r;
    }
    throw DataError("t_test: zero variance with different means");
  }
  r.statistic = (m1 - m2) / std::sqrt(se2);
  const boost::math::students_t dist(r.df);
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.statistic))));
  return r;
}

ChiSquareResult chi_square_gof(std::span<const double> observed, std::span<const double> expected_prob) {
  if (observed.size() != expected_prob.size() || observed.size() < 2) {
    throw DataError("chi_square_gof: need matching observed/expected vectors with >= 2 cells");
  }
  double total = 0.0;
  for (double o : observed) total += o;
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_prob[i] * total;
    if (e <= 0.0) throw DataError("chi_square_gof: expected count must be positive");
    r.statistic += (observed[i] - e) * (observed[i] - e) / e;
  }
  r.df = static_cast<double>(observed.size() - 1);
  const boost::math::chi_squared dist(r.df);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace spkl
