#include "kg/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace kg {

namespace {

struct CentralMoments {
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
};

double skew_of(const CentralMoments& c) {
  return c.m2 > 0.0 ? c.m3 / std::pow(c.m2, 1.5) : 0.0;
}
double kurt_of(const CentralMoments& c) {
  return c.m2 > 0.0 ? c.m4 / (c.m2 * c.m2) - 3.0 : 0.0;
}

}  // namespace

MomentStats moment_stats(const std::vector<double>& xs) {
  const std::int64_t n = static_cast<std::int64_t>(xs.size());
  if (n < 2) throw std::invalid_argument("moment_stats: need at least 2 samples");
  MomentStats st;
  st.count = n;

  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  st.mean = mean;

  // centered power sums
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  CentralMoments full{s2 / n, s3 / n, s4 / n};
  st.variance = s2 / (n - 1);
  st.se_mean = std::sqrt(st.variance / n);
  st.skewness = skew_of(full);
  st.excess_kurtosis = kurt_of(full);

  // jackknife over leave-one-out statistics from the centered sums
  const double nn = static_cast<double>(n - 1);
  double jvar_mean = 0.0, jskew_mean = 0.0, jkurt_mean = 0.0;
  std::vector<double> jvar(n), jskew(n), jkurt(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double d = xs[i] - mean;
    const double mu = -d / nn;  // leave-one-out mean in centered coords
    const double r2 = s2 - d * d;
    const double r3 = s3 - d * d * d;
    const double r4 = s4 - d * d * d * d;
    CentralMoments c;
    c.m2 = (r2 - nn * mu * mu) / nn;
    c.m3 = (r3 - 3.0 * mu * r2 + 2.0 * nn * mu * mu * mu) / nn;
    c.m4 = (r4 - 4.0 * mu * r3 + 6.0 * mu * mu * r2 - 3.0 * nn * mu * mu * mu * mu) / nn;
    jvar[i] = c.m2 * nn / (nn - 1.0);
    jskew[i] = skew_of(c);
    jkurt[i] = kurt_of(c);
    jvar_mean += jvar[i];
    jskew_mean += jskew[i];
    jkurt_mean += jkurt[i];
  }
  jvar_mean /= n;
  jskew_mean /= n;
  jkurt_mean /= n;
  double av = 0.0, as = 0.0, ak = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    av += (jvar[i] - jvar_mean) * (jvar[i] - jvar_mean);
    as += (jskew[i] - jskew_mean) * (jskew[i] - jskew_mean);
    ak += (jkurt[i] - jkurt_mean) * (jkurt[i] - jkurt_mean);
  }
  const double fac = nn / n;
  st.se_variance = std::sqrt(fac * av);
  st.se_skewness = std::sqrt(fac * as);
  st.se_kurtosis = std::sqrt(fac * ak);
  return st;
}

ComplexMeanStats complex_mean_stats(const std::vector<std::complex<double>>& zs) {
  const std::int64_t n = static_cast<std::int64_t>(zs.size());
  if (n < 2)
    throw std::invalid_argument("complex_mean_stats: need at least 2 samples");
  ComplexMeanStats st;
  st.count = n;
  std::complex<double> mean(0.0, 0.0);
  for (const auto& z : zs) mean += z;
  mean /= static_cast<double>(n);
  st.mean = mean;
  double vr = 0.0, vi = 0.0;
  for (const auto& z : zs) {
    vr += (z.real() - mean.real()) * (z.real() - mean.real());
    vi += (z.imag() - mean.imag()) * (z.imag() - mean.imag());
  }
  st.se = std::sqrt((vr + vi) / ((n - 1.0) * n));
  return st;
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_line: need matching samples, >= 2");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

}  // namespace kg
