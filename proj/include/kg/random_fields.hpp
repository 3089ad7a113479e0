#pragma once

#include <cstdint>
#include <optional>

#include "kg/fields.hpp"
#include "kg/spectral_covariance.hpp"

namespace kg {

/// Finite-range mixing profile: the Ibragimov-Linnik coefficient is bounded
/// by 1 on [0, effective_range) and vanishes beyond. effective_range is the
/// measured support of the real-space covariance, not the nominal r0.
struct MixingProfile {
  double support_radius = 0.0;   // nominal r0 of the construction
  double effective_range = 0.0;  // measured covariance support
};

enum class MapKind { identity, tanh_saturating, linear };

/// Odd C^1 scalar map with bounded derivative, f(x) applied pointwise.
struct PointwiseMap {
  MapKind kind = MapKind::identity;
  double gain = 1.0;  // f(x) = tanh(gain x) or gain * x

  double operator()(double x) const;
};

enum class MeasureKind { gaussian, mapped, counterexample };

/// Initial probability measure satisfying S0-S3. `base_spectral` drives the
/// Gaussian sampler; `spectral` is the covariance of the actual measure
/// (identical for the gaussian kind, Hermite-transformed for the mapped
/// kind). The 2.6.1 family parameters are kept so scaling can re-evaluate
/// the analytic density.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::gaussian;
  SpectralCovariance base_spectral;
  SpectralCovariance spectral;
  MixingProfile mixing;
  PointwiseMap map0, map1;
  // analytic family parameters (d0 f(k1)...f(kn), d1 f(k1)...f(kn))
  bool analytic_family = false;
  double d0 = 0.0, d1 = 0.0, r0 = 0.0;
  double family_scale = 1.0;       // r of the scaled family
  double gibbs_temperature = 0.0;  // T = q11_hat(0)/2 for the scaled family
};

/// Product spectral density of the compact-support family:
///   q^{ii}(k) = D_i f(k_1) ... f(k_n),  f(z) = ((1 - cos(r0 z/sqrt(n)))/z^2)^2
/// with the z = 0 value filled by the analytic limit. Real-space support is
/// 2 r0/sqrt(n) per axis; errors if that does not fit the torus window.
SpectralCovariance build_spectral_density(const LatticeSpec& lat, double m,
                                          double d0, double d1, double r0);

MeasureSpec make_gaussian_measure(const LatticeSpec& lat, double m, double d0,
                                  double d1, double r0);

/// Gaussian measure pushed through odd pointwise maps (u -> f0(u),
/// v -> f1(v)); the measure covariance is computed with the Hermite series
/// oracle below.
MeasureSpec make_mapped_measure(const LatticeSpec& lat, double m, double d0,
                                double d1, double r0, const PointwiseMap& f0,
                                const PointwiseMap& f1);

/// Spectral draw: per-mode 2-vectors through the Hermitian square root of
/// the spectral matrix, Hermitian-symmetrized so fields are real, with the
/// normalization fixed so the empirical covariance estimates the lattice
/// covariance q(z). Deterministic in (seed, sample_index).
RealFieldPair sample_gaussian(const MeasureSpec& spec, std::uint64_t seed,
                              std::uint64_t sample_index);

RealFieldPair apply_pointwise_map(const RealFieldPair& y,
                                  const PointwiseMap& f0,
                                  const PointwiseMap& f1);

/// Draws from the measure of any kind (gaussian, mapped, counterexample).
RealFieldPair sample_measure(const MeasureSpec& spec, std::uint64_t seed,
                             std::uint64_t sample_index);

/// Scaling family q_{0,r}^{ij}(z) = r^{2-n-i-j} q_0^{ij}(z/r), realized
/// spectrally as q_r^{ij}(k) = r^{2-i-j} q_0^{ij}(r k) on the analytic
/// family; records the target temperature T = (1/2) q11_hat(0).
MeasureSpec scaled_family(const MeasureSpec& base, double r);

/// Non-mixing two-point ensemble u0 = +-1, v0 = 0 with a fair seeded coin.
RealFieldPair counterexample_ensemble(const LatticeSpec& lat,
                                      std::uint64_t seed,
                                      std::uint64_t sample_index);

MeasureSpec make_counterexample_measure(const LatticeSpec& lat);

/// S3 integral int_0^inf r^{n-1} phi^{1/2}(r) dr for the finite-range
/// bound phi <= 1 on [0, effective_range): closed form range^n / n.
double mixing_condition_check(const MixingProfile& profile, int n);

/// Covariance of the image of a stationary Gaussian field under an odd
/// pointwise map, by the Hermite (Mehler) series
///   E f(X) f(Y) = sum_j b_j^2 rho^j,  b_j = E[f(sigma xi) h_j(xi)]
/// with h_j the orthonormal Hermite functions. Used as the engine-side
/// oracle for the mapped measure.
ArrayXd mapped_covariance_real_space(const ArrayXd& cov_base,
                                     const PointwiseMap& f, int terms = 40);

/// Scalar version of the Mehler series for unit-variance inputs scaled by
/// sigma: E f(X) f(Y) with Cov(X,Y) = c, Var X = Var Y = sigma^2.
double mapped_covariance_scalar(double c, double sigma2, const PointwiseMap& f,
                                int terms = 40);

}  // namespace kg
