#include "kg/spectral_core.hpp"

#include <cmath>
#include <stdexcept>

namespace kg {

Dispersion dispersion(const LatticeSpec& lat, double m) {
  if (!(m > 0.0)) throw std::invalid_argument("dispersion: mass must be > 0");
  Dispersion d;
  d.lattice = lat;
  d.mass = m;
  d.omega = (squared_wavenumber(lat) + m * m).sqrt();
  return d;
}

PropagatorField propagator(const Dispersion& disp, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("propagator: t not finite");
  PropagatorField g;
  g.lattice = disp.lattice;
  g.time = t;
  const ArrayXd wt = disp.omega * t;
  g.cos_wt = wt.cos();
  const ArrayXd s = wt.sin();
  g.sin_wt_ov = s / disp.omega;
  g.w_sin_wt = s * disp.omega;
  return g;
}

namespace {

void apply_propagator(const PropagatorField& g, ArrayXcd& uhat,
                      ArrayXcd& vhat) {
  const ArrayXcd u1 = g.cos_wt * uhat + g.sin_wt_ov * vhat;
  vhat = -g.w_sin_wt * uhat + g.cos_wt * vhat;
  uhat = u1;
}

void apply_adjoint_propagator(const PropagatorField& g, ArrayXcd& p0,
                              ArrayXcd& p1) {
  // transpose of G_t(k)
  const ArrayXcd q0 = g.cos_wt * p0 - g.w_sin_wt * p1;
  p1 = g.sin_wt_ov * p0 + g.cos_wt * p1;
  p0 = q0;
}

}  // namespace

RealFieldPair evolve(const RealFieldPair& y0, double m, double t) {
  if (!y0.finite()) throw std::invalid_argument("evolve: non-finite field");
  const auto g = propagator(dispersion(y0.lattice, m), t);
  ArrayXcd uhat = fft::forward(y0.lattice, y0.u);
  ArrayXcd vhat = fft::forward(y0.lattice, y0.v);
  apply_propagator(g, uhat, vhat);
  RealFieldPair y;
  y.lattice = y0.lattice;
  double res_u = 0.0, res_v = 0.0;
  y.u = fft::inverse_real(y0.lattice, uhat, &res_u);
  y.v = fft::inverse_real(y0.lattice, vhat, &res_v);
  if (res_u > 1e-10 || res_v > 1e-10)
    throw std::runtime_error("evolve: imaginary residue above tolerance");
  return y;
}

ComplexFieldPair evolve(const ComplexFieldPair& y0, double m, double t) {
  if (!((y0.u.isFinite()).all() && (y0.v.isFinite()).all()))
    throw std::invalid_argument("evolve: non-finite field");
  const auto g = propagator(dispersion(y0.lattice, m), t);
  ArrayXcd uhat = fft::forward(y0.lattice, y0.u);
  ArrayXcd vhat = fft::forward(y0.lattice, y0.v);
  apply_propagator(g, uhat, vhat);
  ComplexFieldPair y;
  y.lattice = y0.lattice;
  y.u = fft::inverse(y0.lattice, uhat);
  y.v = fft::inverse(y0.lattice, vhat);
  return y;
}

TestFunction adjoint_evolve(const TestFunction& psi, double m, double t) {
  const auto g = propagator(dispersion(psi.lattice, m), t);
  ArrayXcd p0 = fft::forward(psi.lattice, psi.psi0);
  ArrayXcd p1 = fft::forward(psi.lattice, psi.psi1);
  apply_adjoint_propagator(g, p0, p1);
  TestFunction phi;
  phi.lattice = psi.lattice;
  phi.psi0 = fft::inverse_real(psi.lattice, p0);
  phi.psi1 = fft::inverse_real(psi.lattice, p1);
  phi.support_radius =
      std::min(psi.support_radius + std::abs(t), psi.lattice.box_length / 2);
  return phi;
}

double local_energy(const RealFieldPair& y, double m, double R) {
  const LatticeSpec& lat = y.lattice;
  if (!(R > 0.0) || R > lat.box_length / 2)
    throw std::invalid_argument("local_energy: need 0 < R <= L/2");
  const ArrayXcd uhat = fft::forward(lat, y.u);
  ArrayXd grad2 = ArrayXd::Zero(lat.size());
  for (int a = 0; a < lat.dim; ++a) {
    const ArrayXd ka = wavenumber_array(lat, a);
    const ArrayXcd dhat = Complex(0.0, 1.0) * ka.cast<Complex>() * uhat;
    const ArrayXd da = fft::inverse_real(lat, dhat);
    grad2 += da.square();
  }
  const ArrayXd density = y.v.square() + grad2 + (m * m) * y.u.square();
  const ArrayXd r2 = squared_radius(lat);
  double sum = 0.0;
  for (std::int64_t f = 0; f < lat.size(); ++f)
    if (r2[f] < R * R) sum += density[f];
  return lat.cell_volume() * sum;
}

namespace {
template <class S>
double spectral_energy_impl(const FieldPair<S>& y, double m) {
  const auto d = dispersion(y.lattice, m);
  ArrayXcd uhat, vhat;
  if constexpr (std::is_same_v<S, double>) {
    uhat = fft::forward(y.lattice, y.u);
    vhat = fft::forward(y.lattice, y.v);
  } else {
    uhat = fft::forward(y.lattice, ArrayXcd(y.u));
    vhat = fft::forward(y.lattice, ArrayXcd(y.v));
  }
  return (vhat.abs2() + d.omega.square() * uhat.abs2()).sum();
}
}  // namespace

double spectral_energy(const RealFieldPair& y, double m) {
  return spectral_energy_impl(y, m);
}
double spectral_energy(const ComplexFieldPair& y, double m) {
  return spectral_energy_impl(y, m);
}

double weighted_sobolev_norm(const LatticeSpec& lat, const ArrayXd& w,
                             double s, double alpha) {
  ArrayXcd what = fft::forward(lat, w);
  if (s != 0.0) {
    const ArrayXd mult = (squared_wavenumber(lat) + 1.0).pow(s / 2.0);
    what *= mult.cast<Complex>();
  }
  const ArrayXd ls = fft::inverse_real(lat, what);
  const ArrayXd weight = (squared_radius(lat) + 1.0).pow(alpha);
  return std::sqrt(lat.cell_volume() * (weight.square() * ls.square()).sum());
}

namespace {
ArrayXd gradient_abs2(const LatticeSpec& lat, const ArrayXcd& w) {
  const ArrayXcd what = fft::forward(lat, w);
  ArrayXd g2 = ArrayXd::Zero(lat.size());
  for (int a = 0; a < lat.dim; ++a) {
    const ArrayXd ka = wavenumber_array(lat, a);
    const ArrayXcd dhat = Complex(0.0, 1.0) * ka.cast<Complex>() * what;
    g2 += fft::inverse(lat, dhat).abs2();
  }
  return g2;
}
}  // namespace

double local_pair_seminorm(const ComplexFieldPair& p, double R) {
  const LatticeSpec& lat = p.lattice;
  const ArrayXd density = p.u.abs2() + p.v.abs2() + gradient_abs2(lat, p.v);
  const ArrayXd r2 = squared_radius(lat);
  double sum = 0.0;
  for (std::int64_t f = 0; f < lat.size(); ++f)
    if (r2[f] <= R * R) sum += density[f];
  return std::sqrt(lat.cell_volume() * sum);
}

double h_norm(const ComplexFieldPair& p) {
  const LatticeSpec& lat = p.lattice;
  const double sum =
      (p.u.abs2() + p.v.abs2() + gradient_abs2(lat, p.v)).sum();
  return std::sqrt(lat.cell_volume() * sum);
}

}  // namespace kg
