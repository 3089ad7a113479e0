#include "kg/covariance_engine.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kg {

SpectralCovariance evolve_covariance(const SpectralCovariance& q0,
                                     const Dispersion& disp, double t) {
  if (!q0.lattice.same_grid(disp.lattice))
    throw std::invalid_argument("evolve_covariance: lattice mismatch");
  const auto g = propagator(disp, t);
  const ArrayXd& c = g.cos_wt;
  const ArrayXd& s = g.sin_wt_ov;
  const ArrayXd& w = g.w_sin_wt;

  SpectralCovariance q = q0;
  q.kind = CovKind::evolved;
  // rows of G q0
  const ArrayXcd a00 = c * q0.e00 + s * q0.e10;
  const ArrayXcd a01 = c * q0.e01 + s * q0.e11;
  const ArrayXcd a10 = -w * q0.e00 + c * q0.e10;
  const ArrayXcd a11 = -w * q0.e01 + c * q0.e11;
  // multiply by G^T on the right
  q.e00 = a00 * c + a01 * s;
  q.e01 = -a00 * w + a01 * c;
  q.e10 = a10 * c + a11 * s;
  q.e11 = -a10 * w + a11 * c;
  return q;
}

SpectralCovariance limit_covariance(const SpectralCovariance& q0,
                                    const Dispersion& disp) {
  if (!q0.lattice.same_grid(disp.lattice))
    throw std::invalid_argument("limit_covariance: lattice mismatch");
  const ArrayXd w2 = disp.omega.square();
  SpectralCovariance q = q0;
  q.kind = CovKind::limit;
  q.e00 = 0.5 * (q0.e00 + q0.e11 / w2);
  q.e11 = 0.5 * (q0.e11 + w2 * q0.e00);
  q.e01 = 0.5 * (q0.e01 - q0.e10);
  q.e10 = -q.e01;
  return q;
}

SpectralCovariance gibbs_covariance(const GibbsSpec& gibbs,
                                    const LatticeSpec& lat) {
  if (!(gibbs.temperature > 0.0) || !(gibbs.mass > 0.0))
    throw std::invalid_argument("gibbs_covariance: need T, m > 0");
  SpectralCovariance q = SpectralCovariance::zero(lat, CovKind::gibbs);
  const ArrayXd k2 = squared_wavenumber(lat);
  q.e00 = (gibbs.temperature / (k2 + gibbs.mass * gibbs.mass)).cast<Complex>();
  q.e11 = ArrayXcd::Constant(lat.size(), Complex(gibbs.temperature, 0.0));
  return q;
}

TransformedTest transform_test(const TestFunction& psi) {
  TransformedTest t;
  t.lattice = psi.lattice;
  t.p0hat = fft::forward(psi.lattice, psi.psi0);
  t.p1hat = fft::forward(psi.lattice, psi.psi1);
  return t;
}

double quadratic_form_eval(const SpectralCovariance& q,
                           const TransformedTest& psi) {
  if (!q.lattice.same_grid(psi.lattice))
    throw std::invalid_argument("quadratic_form_eval: lattice mismatch");
  Complex acc(0.0, 0.0);
  for (std::int64_t f = 0; f < q.lattice.size(); ++f) {
    const Complex p0 = psi.p0hat[f], p1 = psi.p1hat[f];
    acc += std::conj(p0) * (q.e00[f] * p0 + q.e01[f] * p1) +
           std::conj(p1) * (q.e10[f] * p0 + q.e11[f] * p1);
  }
  const double val = acc.real() / q.lattice.box_volume();
  if (std::abs(acc.imag()) > 1e-8 * (1.0 + std::abs(acc.real())))
    throw std::runtime_error("quadratic_form_eval: non-Hermitian spectrum");
  return val;
}

double quadratic_form_eval(const SpectralCovariance& q,
                           const TestFunction& psi) {
  return quadratic_form_eval(q, transform_test(psi));
}

double expected_sobolev_norm(const SpectralCovariance& q, double s,
                             double alpha) {
  const LatticeSpec& lat = q.lattice;
  const ArrayXd xw = (squared_radius(lat) + 1.0).pow(alpha);
  const double c_alpha = lat.cell_volume() * xw.sum();
  const ArrayXd kw = squared_wavenumber(lat) + 1.0;
  double acc = 0.0;
  for (std::int64_t f = 0; f < lat.size(); ++f)
    acc += std::pow(kw[f], s) * q.e11[f].real() +
           std::pow(kw[f], 1.0 + s) * q.e00[f].real();
  return c_alpha * acc / lat.box_volume();
}

GibbsLimitReport gibbs_limit_experiment(const MeasureSpec& base,
                                        const Dispersion& disp,
                                        const std::vector<double>& r_list,
                                        double k_max) {
  const LatticeSpec& lat = disp.lattice;
  GibbsLimitReport rep;
  rep.temperature = base.gibbs_temperature;
  rep.k_max = k_max > 0.0
                  ? k_max
                  : 0.5 * std::numbers::pi / lat.spacing;  // half-Nyquist
  const double T = rep.temperature;
  if (!(T > 0.0))
    throw std::invalid_argument("gibbs_limit_experiment: base has T = 0");
  for (std::size_t i = 1; i < r_list.size(); ++i)
    if (r_list[i] >= r_list[i - 1])
      throw std::invalid_argument("gibbs_limit_experiment: r_list not decreasing");

  const ArrayXd k2 = squared_wavenumber(lat);
  const ArrayXd w2 = disp.omega.square();
  for (double r : r_list) {
    const MeasureSpec scaled = scaled_family(base, r);
    const SpectralCovariance qinf = limit_covariance(scaled.spectral, disp);
    GibbsLimitRow row;
    row.r = r;
    for (std::int64_t f = 0; f < lat.size(); ++f) {
      if (k2[f] > rep.k_max * rep.k_max) continue;
      row.dist00 = std::max(row.dist00,
                            std::abs(qinf.e00[f].real() - T / w2[f]));
      row.dist11 = std::max(row.dist11, std::abs(qinf.e11[f].real() - T));
    }
    row.g2 = 0.5 * (scaled.spectral.e11[0].real() +
                    disp.mass * disp.mass * scaled.spectral.e00[0].real());
    rep.rows.push_back(row);
  }

  rep.distances_monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (rep.rows[i].dist00 > rep.rows[i - 1].dist00 ||
        rep.rows[i].dist11 > rep.rows[i - 1].dist11)
      rep.distances_monotone = false;
  }
  if (!rep.rows.empty())
    rep.g2_rel_err_at_smallest_r = std::abs(rep.rows.back().g2 - T) / T;
  return rep;
}

}  // namespace kg
