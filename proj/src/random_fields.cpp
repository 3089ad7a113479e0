#include "kg/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kg/rng.hpp"

namespace kg {

double PointwiseMap::operator()(double x) const {
  switch (kind) {
    case MapKind::identity:
      return x;
    case MapKind::tanh_saturating:
      return std::tanh(gain * x);
    case MapKind::linear:
      return gain * x;
  }
  return x;
}

namespace {

// f(z) = ((1 - cos(a z))/z^2)^2 = (a^2/2)^2 sinc^4(a z / 2), a = r0/sqrt(n)
double family_factor(double z, double a) {
  const double u = 0.5 * a * z;
  const double s = (std::abs(u) < 1e-8) ? 1.0 - u * u / 6.0 : std::sin(u) / u;
  const double g = 0.5 * a * a * s * s;
  return g * g;
}

ArrayXd family_product(const LatticeSpec& lat, double r0, double scale) {
  const double a = r0 / std::sqrt(static_cast<double>(lat.dim));
  ArrayXd out(lat.size());
  for (std::int64_t f = 0; f < lat.size(); ++f) {
    const auto idx = lat.decompose(f);
    double p = 1.0;
    for (int ax = 0; ax < lat.dim; ++ax)
      p *= family_factor(scale * lat.axis_wavenumbers[idx[ax]], a);
    out[f] = p;
  }
  return out;
}

}  // namespace

SpectralCovariance build_spectral_density(const LatticeSpec& lat, double m,
                                          double d0, double d1, double r0) {
  if (!(m > 0.0)) throw std::invalid_argument("build_spectral_density: m <= 0");
  if (d0 < 0.0 || d1 < 0.0)
    throw std::invalid_argument("build_spectral_density: D_i must be >= 0");
  if (!(r0 > 0.0)) throw std::invalid_argument("build_spectral_density: r0 <= 0");
  const double per_axis_support = 2.0 * r0 / std::sqrt(lat.dim);
  if (per_axis_support > lat.box_length / 2)
    throw std::invalid_argument(
        "build_spectral_density: covariance support exceeds the torus window "
        "(need 2 r0/sqrt(n) <= L/2)");

  SpectralCovariance q = SpectralCovariance::zero(lat, CovKind::initial);
  const ArrayXd prod = family_product(lat, r0, 1.0);
  q.e00 = (d0 * prod).cast<Complex>();
  q.e11 = (d1 * prod).cast<Complex>();
  return q;
}

MeasureSpec make_gaussian_measure(const LatticeSpec& lat, double m, double d0,
                                  double d1, double r0) {
  MeasureSpec spec;
  spec.kind = MeasureKind::gaussian;
  spec.base_spectral = build_spectral_density(lat, m, d0, d1, r0);
  spec.spectral = spec.base_spectral;
  spec.mixing.support_radius = r0;
  // measured support: 2 r0/sqrt(n) per axis, radial envelope = box diagonal
  spec.mixing.effective_range = 2.0 * r0;
  spec.analytic_family = true;
  spec.d0 = d0;
  spec.d1 = d1;
  spec.r0 = r0;
  spec.gibbs_temperature = 0.5 * spec.base_spectral.e11[0].real();
  return spec;
}

MeasureSpec make_mapped_measure(const LatticeSpec& lat, double m, double d0,
                                double d1, double r0, const PointwiseMap& f0,
                                const PointwiseMap& f1) {
  MeasureSpec spec = make_gaussian_measure(lat, m, d0, d1, r0);
  spec.kind = MeasureKind::mapped;
  spec.map0 = f0;
  spec.map1 = f1;

  const ArrayXd base00 = covariance_entry_real_space(spec.base_spectral, 0, 0);
  const ArrayXd base11 = covariance_entry_real_space(spec.base_spectral, 1, 1);
  const ArrayXd mapped00 = mapped_covariance_real_space(base00, f0);
  const ArrayXd mapped11 = mapped_covariance_real_space(base11, f1);
  spec.spectral = SpectralCovariance::zero(lat, CovKind::initial);
  spec.spectral.e00 = fft::forward(lat, mapped00);
  spec.spectral.e11 = fft::forward(lat, mapped11);
  const double scale = std::max(
      {1.0, spec.spectral.e00.abs().maxCoeff(), spec.spectral.e11.abs().maxCoeff()});
  regularize_psd(spec.spectral, 1e-10 * scale);
  spec.analytic_family = false;  // scaling applies to the Gaussian base only
  return spec;
}

RealFieldPair sample_gaussian(const MeasureSpec& spec, std::uint64_t seed,
                              std::uint64_t sample_index) {
  const SpectralCovariance& q = spec.base_spectral;
  const LatticeSpec& lat = q.lattice;
  const std::int64_t n = lat.size();

  if (min_eigenvalue(q) < -1e-10)
    throw std::runtime_error("sample_gaussian: spectral matrix not PSD");

  auto rng = make_engine(seed, sample_index);
  ArrayXd w0(n), w1(n);
  fill_normal(rng, w0);
  fill_normal(rng, w1);

  // one forward transform carries both noises; unscramble by Hermitian split
  ArrayXcd z(n);
  for (std::int64_t f = 0; f < n; ++f) z[f] = Complex(w0[f], w1[f]);
  const ArrayXcd zh = fft::forward(lat, z);
  const Eigen::ArrayXi conj_map = conjugate_index_map(lat);

  const double inv_sqrt_cell = 1.0 / std::sqrt(lat.cell_volume());
  ArrayXcd packed(n);
  for (std::int64_t f = 0; f < n; ++f) {
    const Complex zc = std::conj(zh[conj_map[f]]);
    const Complex n0 = 0.5 * (zh[f] + zc);
    const Complex n1 = Complex(0.0, -0.5) * (zh[f] - zc);

    // Hermitian square root of the 2x2 PSD matrix at this mode:
    // B = (M + sqrt(det) I) / sqrt(tr + 2 sqrt(det))
    const double a = std::max(q.e00[f].real(), 0.0);
    const double d = std::max(q.e11[f].real(), 0.0);
    const Complex b = 0.5 * (q.e01[f] + std::conj(q.e10[f]));
    const double det = std::max(a * d - std::norm(b), 0.0);
    const double s = std::sqrt(det);
    const double tr = a + d;
    const double denom = std::sqrt(tr + 2.0 * s);
    Complex uh(0, 0), vh(0, 0);
    if (denom > 0.0) {
      const double inv = inv_sqrt_cell / denom;
      uh = ((a + s) * n0 + b * n1) * inv;
      vh = (std::conj(b) * n0 + (d + s) * n1) * inv;
    }
    packed[f] = uh + Complex(0.0, 1.0) * vh;
  }

  const ArrayXcd xy = fft::inverse(lat, packed);
  RealFieldPair y;
  y.lattice = lat;
  y.u = xy.real();
  y.v = xy.imag();
  return y;
}

RealFieldPair apply_pointwise_map(const RealFieldPair& y,
                                  const PointwiseMap& f0,
                                  const PointwiseMap& f1) {
  RealFieldPair out;
  out.lattice = y.lattice;
  out.u = y.u.unaryExpr([&](double x) { return f0(x); });
  out.v = y.v.unaryExpr([&](double x) { return f1(x); });
  return out;
}

RealFieldPair sample_measure(const MeasureSpec& spec, std::uint64_t seed,
                             std::uint64_t sample_index) {
  switch (spec.kind) {
    case MeasureKind::gaussian:
      return sample_gaussian(spec, seed, sample_index);
    case MeasureKind::mapped:
      return apply_pointwise_map(sample_gaussian(spec, seed, sample_index),
                                 spec.map0, spec.map1);
    case MeasureKind::counterexample:
      return counterexample_ensemble(spec.base_spectral.lattice, seed,
                                     sample_index);
  }
  throw std::logic_error("sample_measure: unknown kind");
}

MeasureSpec scaled_family(const MeasureSpec& base, double r) {
  if (!base.analytic_family)
    throw std::invalid_argument("scaled_family: base is not the analytic family");
  if (!(r > 0.0) || r > 1.0)
    throw std::invalid_argument("scaled_family: need 0 < r <= 1");
  const LatticeSpec& lat = base.base_spectral.lattice;
  const double scale = base.family_scale * r;
  const double per_axis_support =
      scale * 2.0 * base.r0 / std::sqrt(lat.dim);
  if (per_axis_support < 2.0 * lat.spacing)
    throw std::invalid_argument(
        "scaled_family: scaled correlation below lattice resolution");

  MeasureSpec spec = base;
  spec.family_scale = scale;
  const ArrayXd prod = family_product(lat, base.r0, scale);
  spec.base_spectral.e00 = (scale * scale * base.d0 * prod).cast<Complex>();
  spec.base_spectral.e11 = (base.d1 * prod).cast<Complex>();
  spec.spectral = spec.base_spectral;
  spec.mixing.support_radius = base.r0 * scale;
  spec.mixing.effective_range = base.mixing.effective_range * scale;
  spec.gibbs_temperature = 0.5 * spec.base_spectral.e11[0].real();
  return spec;
}

RealFieldPair counterexample_ensemble(const LatticeSpec& lat,
                                      std::uint64_t seed,
                                      std::uint64_t sample_index) {
  auto rng = make_engine(seed, sample_index);
  const double sign = (rng() & 1u) ? 1.0 : -1.0;
  RealFieldPair y;
  y.lattice = lat;
  y.u = ArrayXd::Constant(lat.size(), sign);
  y.v = ArrayXd::Zero(lat.size());
  return y;
}

MeasureSpec make_counterexample_measure(const LatticeSpec& lat) {
  MeasureSpec spec;
  spec.kind = MeasureKind::counterexample;
  spec.base_spectral = SpectralCovariance::zero(lat);
  spec.spectral = SpectralCovariance::zero(lat);
  // constant field: covariance q00(z) = 1, all mass at k = 0
  spec.spectral.e00[0] = lat.box_volume();
  spec.mixing.support_radius = std::numeric_limits<double>::infinity();
  spec.mixing.effective_range = std::numeric_limits<double>::infinity();
  return spec;
}

double mixing_condition_check(const MixingProfile& profile, int n) {
  if (n < 1) throw std::invalid_argument("mixing_condition_check: n < 1");
  if (!std::isfinite(profile.effective_range))
    return std::numeric_limits<double>::infinity();
  return std::pow(profile.effective_range, n) / n;
}

namespace {

// squared orthonormal-Hermite coefficients b_j^2 of xi -> f(sigma xi),
// b_j = E[f(sigma xi) h_j(xi)], by trapezoid against the normal density
// (superalgebraic convergence for smooth f)
std::vector<double> hermite_weights(const PointwiseMap& f, double sigma2,
                                    int terms) {
  const double sigma = std::sqrt(sigma2);
  const int npts = 4001;
  const double lim = 10.0;
  const double h = 2.0 * lim / (npts - 1);
  std::vector<double> b(terms, 0.0);
  for (int i = 0; i < npts; ++i) {
    const double xi = -lim + h * i;
    const double phi =
        std::exp(-0.5 * xi * xi) / std::sqrt(2.0 * std::numbers::pi);
    const double fx = f(sigma * xi);
    double hm1 = 0.0, hj = 1.0;  // h_0 = 1
    for (int j = 0; j < terms; ++j) {
      b[j] += fx * hj * phi * h;
      const double hp = (xi * hj - std::sqrt(static_cast<double>(j)) * hm1) /
                        std::sqrt(static_cast<double>(j + 1));
      hm1 = hj;
      hj = hp;
    }
  }
  std::vector<double> w(terms);
  for (int j = 0; j < terms; ++j) w[j] = b[j] * b[j];
  return w;
}

double mehler_sum(const std::vector<double>& weights, double rho) {
  double acc = 0.0, rp = 1.0;
  for (std::size_t j = 1; j < weights.size(); ++j) {
    rp *= rho;
    acc += weights[j] * rp;
  }
  return acc;
}

}  // namespace

double mapped_covariance_scalar(double c, double sigma2, const PointwiseMap& f,
                                int terms) {
  if (sigma2 <= 0.0) return 0.0;
  const double rho = std::clamp(c / sigma2, -1.0, 1.0);
  return mehler_sum(hermite_weights(f, sigma2, terms), rho);
}

ArrayXd mapped_covariance_real_space(const ArrayXd& cov_base,
                                     const PointwiseMap& f, int terms) {
  const double sigma2 = cov_base[0];
  ArrayXd out = ArrayXd::Zero(cov_base.size());
  if (sigma2 <= 0.0) return out;
  if (f.kind == MapKind::identity) return cov_base;
  if (f.kind == MapKind::linear) return f.gain * f.gain * cov_base;

  const std::vector<double> weights = hermite_weights(f, sigma2, terms);
  for (Eigen::Index z = 0; z < cov_base.size(); ++z)
    out[z] = mehler_sum(weights, std::clamp(cov_base[z] / sigma2, -1.0, 1.0));
  return out;
}

}  // namespace kg
