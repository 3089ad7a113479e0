#pragma once

#include <vector>

#include "kg/fields.hpp"
#include "kg/random_fields.hpp"
#include "kg/spectral_covariance.hpp"

namespace kg {

/// Canonical Gibbs distribution parameters: covariances g^00 = T/(|k|^2+m^2),
/// g^11 = T, zero off-diagonals.
struct GibbsSpec {
  double temperature = 1.0;
  double mass = 1.0;
};

/// Exact covariance propagation q_t(k) = G_t(k) q_0(k) G_t(k)^T.
SpectralCovariance evolve_covariance(const SpectralCovariance& q0,
                                     const Dispersion& disp, double t);

/// Long-time limit covariance:
///   q00 = (q0_00 + q0_11/w^2)/2, q11 = (q0_11 + w^2 q0_00)/2,
///   q01 = (q0_01 - q0_10)/2 = -q10.
SpectralCovariance limit_covariance(const SpectralCovariance& q0,
                                    const Dispersion& disp);

SpectralCovariance gibbs_covariance(const GibbsSpec& gibbs,
                                    const LatticeSpec& lat);

/// Test pair transformed once for repeated quadratic-form evaluations.
struct TransformedTest {
  LatticeSpec lattice;
  ArrayXcd p0hat, p1hat;
};

TransformedTest transform_test(const TestFunction& psi);

/// Q(Psi,Psi) = L^-n sum_k Psihat(k)^H q(k) Psihat(k); real and >= 0 for a
/// PSD spectral matrix.
double quadratic_form_eval(const SpectralCovariance& q, const TestFunction& psi);
double quadratic_form_eval(const SpectralCovariance& q,
                           const TransformedTest& psi);

/// Expected squared weighted Sobolev norm of the pair under the Gaussian
/// measure with spectral covariance q:
///   C(alpha) L^-n sum_k [ <k>^{2s} q11 + <k>^{2(1+s)} q00 ],
/// C(alpha) = dx^n sum_x <x>^{2 alpha}.
double expected_sobolev_norm(const SpectralCovariance& q, double s,
                             double alpha);

/// Gibbs-limit experiment along a decreasing list of correlation radii r:
/// band-limited distances of the limit covariance of the scaled family to
/// the CGD covariances (T/w^2, T), plus the G2 functional.
struct GibbsLimitRow {
  double r = 1.0;
  double dist00 = 0.0;  // max |q00_inf,r - T/w^2| over |k| <= k_max
  double dist11 = 0.0;  // max |q11_inf,r - T| over |k| <= k_max
  double g2 = 0.0;      // (q11_r(0) + m^2 q00_r(0))/2
};

struct GibbsLimitReport {
  double temperature = 0.0;  // T = q11_hat(0)/2 of the base family
  double k_max = 0.0;        // band limit (default: half-Nyquist)
  std::vector<GibbsLimitRow> rows;
  bool distances_monotone = false;
  double g2_rel_err_at_smallest_r = 0.0;
};

GibbsLimitReport gibbs_limit_experiment(const MeasureSpec& base,
                                        const Dispersion& disp,
                                        const std::vector<double>& r_list,
                                        double k_max = 0.0);

}  // namespace kg
