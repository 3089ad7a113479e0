#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace kg {

/// Moments of a scalar sample with plain standard error for the mean and
/// jackknife standard errors for the nonlinear statistics.
struct MomentStats {
  std::int64_t count = 0;
  double mean = 0.0, se_mean = 0.0;
  double variance = 0.0, se_variance = 0.0;
  double skewness = 0.0, se_skewness = 0.0;
  double excess_kurtosis = 0.0, se_kurtosis = 0.0;
};

MomentStats moment_stats(const std::vector<double>& xs);

/// Mean of a complex sample with the combined standard error
/// sqrt((Var Re + Var Im)/n).
struct ComplexMeanStats {
  std::int64_t count = 0;
  std::complex<double> mean{0.0, 0.0};
  double se = 0.0;
};

ComplexMeanStats complex_mean_stats(const std::vector<std::complex<double>>& zs);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace kg
