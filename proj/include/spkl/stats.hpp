#pragma once

#include <cstddef>
#include <span>

namespace spkl {

struct KsResult {
  double statistic = 0.0;  ///< D = sup |ECDF_x - ECDF_y|
  double p_value = 1.0;    ///< asymptotic two-sided
};

/// Two-sample Kolmogorov-Smirnov test. The p-value comes from the limiting
/// Kolmogorov distribution at sqrt(n_e) * D with n_e = nm / (n + m).
/// Throws DataError if either sample is empty.
KsResult ks_two_sample(std::span<const double> x, std::span<const double> y);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

/// Exact P(D >= d) for two samples of sizes n and m without ties, by counting
/// monotone lattice paths. Intended for small n, m.
double ks_exact_p_value(std::size_t n, std::size_t m, double d);

enum class TTestVariant { Student, Welch };

struct TTestResult {
  double statistic = 0.0;
  double p_value = 1.0;  ///< two-sided
  double df = 0.0;
};

/// Two-sample t test; Student uses the pooled variance with n + m - 2 degrees of
/// freedom. Zero variance with equal means yields t = 0, p = 1; zero variance
/// with different means throws DataError, as does a sample of size < 2.
TTestResult t_test(std::span<const double> x, std::span<const double> y,
                   TTestVariant variant = TTestVariant::Student);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df = 0.0;
};

/// Goodness of fit of observed counts against expected probabilities.
ChiSquareResult chi_square_gof(std::span<const double> observed, std::span<const double> expected_prob);

double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> x);

}  // namespace spkl
