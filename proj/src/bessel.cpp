#include "kg/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kg {

namespace {

constexpr double kBranchSwitch = 12.0;

double j1_series(double z) {
  // J1(z) = (z/2) sum_j (-1)^j (z^2/4)^j / (j! (j+1)!)
  const double q = 0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < 64; ++j) {
    term *= -q / (static_cast<double>(j) * (j + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return 0.5 * z * sum;
}

double j1_asymptotic(double z) {
  // Hankel expansion: J1(z) = sqrt(2/(pi z)) [P cos(chi) - Q sin(chi)],
  // chi = z - 3pi/4, with mu = 4 nu^2 = 4:
  //   P ~ 1 + sum_{k>=1} (-1)^k a_{2k}/(8z)^{2k}
  //   Q ~ sum_{k>=0} (-1)^k a_{2k+1}/(8z)^{2k+1}
  // a_j = prod_{l=1..j} (mu - (2l-1)^2) / (j! ...) handled by recursion.
  const double w = 8.0 * z;
  double p = 1.0, q = 0.0;
  double term = 1.0;
  double prev = 1.0;
  const double mu = 4.0;
  // term_j = prod_{l=1..j}(mu - (2l-1)^2) / (j! w^j); alternate into P, Q.
  // Asymptotic series: truncate at the smallest term.
  for (int j = 1; j <= 20; ++j) {
    const double odd = 2.0 * j - 1.0;
    term *= (mu - odd * odd) / (j * w);
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    if (j % 2 == 0)
      p += (j % 4 == 0 ? term : -term);
    else
      q += ((j - 1) % 4 == 0 ? term : -term);
  }
  const double chi = z - 0.75 * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * z)) *
         (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j1(double z) {
  if (z < 0.0) return -bessel_j1(-z);
  if (z <= kBranchSwitch) return j1_series(z);
  return j1_asymptotic(z);
}

double fundamental_solution_3d(double x_radius, double t, double m) {
  if (!(t > 0.0)) throw std::invalid_argument("fundamental_solution_3d: t <= 0");
  if (!(m >= 0.0)) throw std::invalid_argument("fundamental_solution_3d: m < 0");
  if (x_radius >= t) return 0.0;
  const double s = std::sqrt(t * t - x_radius * x_radius);
  return -(m / (4.0 * std::numbers::pi)) * bessel_j1(m * s) / s;
}

}  // namespace kg
