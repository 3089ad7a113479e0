#include "kg/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace kg {

RealFieldPair zero_field(const LatticeSpec& lat) {
  RealFieldPair y;
  y.lattice = lat;
  y.u = ArrayXd::Zero(lat.size());
  y.v = ArrayXd::Zero(lat.size());
  return y;
}

ComplexFieldPair to_complex(const RealFieldPair& y) {
  ComplexFieldPair z;
  z.lattice = y.lattice;
  z.u = y.u.cast<Complex>();
  z.v = y.v.cast<Complex>();
  return z;
}

ArrayXd bump_profile(const LatticeSpec& lat, double radius, double amp,
                     const std::array<double, 3>& center, double sharpness) {
  if (!(radius > 0.0)) throw std::invalid_argument("bump_profile: radius <= 0");
  ArrayXd out = ArrayXd::Zero(lat.size());
  const double L = lat.box_length;
  for (std::int64_t f = 0; f < lat.size(); ++f) {
    const auto idx = lat.decompose(f);
    double r2 = 0.0;
    for (int a = 0; a < lat.dim; ++a) {
      double d = lat.axis_coords[idx[a]] - center[a];
      // periodic distance
      d -= L * std::round(d / L);
      r2 += d * d;
    }
    const double s2 = r2 / (radius * radius);
    if (s2 < 1.0)
      out[f] = amp * std::exp(sharpness - sharpness / (1.0 - s2));
  }
  return out;
}

TestFunction make_bump_test_function(const LatticeSpec& lat, double radius,
                                     double amp0, double amp1,
                                     double sharpness) {
  TestFunction psi;
  psi.lattice = lat;
  psi.psi0 = bump_profile(lat, radius, amp0, {0, 0, 0}, sharpness);
  psi.psi1 = bump_profile(lat, radius, amp1, {0, 0, 0}, sharpness);
  psi.support_radius = radius;
  return psi;
}

double pairing(const RealFieldPair& y, const TestFunction& psi) {
  if (!y.lattice.same_grid(psi.lattice))
    throw std::invalid_argument("pairing: lattice mismatch");
  return y.lattice.cell_volume() *
         ((y.u * psi.psi0).sum() + (y.v * psi.psi1).sum());
}

double pairing(const RealFieldPair& y, const ComplexFieldPair& phi) {
  if (!y.lattice.same_grid(phi.lattice))
    throw std::invalid_argument("pairing: lattice mismatch");
  return y.lattice.cell_volume() *
         ((y.u * phi.u.real()).sum() + (y.v * phi.v.real()).sum());
}

double pairing(const ComplexFieldPair& y, const ComplexFieldPair& phi) {
  if (!y.lattice.same_grid(phi.lattice))
    throw std::invalid_argument("pairing: lattice mismatch");
  const Complex s = (y.u * phi.u.conjugate()).sum() +
                    (y.v * phi.v.conjugate()).sum();
  return y.lattice.cell_volume() * s.real();
}

namespace {
template <class S>
double mass_fraction_outside_impl(const FieldPair<S>& y, double radius) {
  const ArrayXd r2 = squared_radius(y.lattice);
  const double rr = radius * radius;
  double inside = 0.0, outside = 0.0;
  for (std::int64_t f = 0; f < y.lattice.size(); ++f) {
    const double m = std::norm(Complex(y.u[f])) + std::norm(Complex(y.v[f]));
    (r2[f] > rr ? outside : inside) += m;
  }
  const double total = inside + outside;
  return total > 0.0 ? outside / total : 0.0;
}
}  // namespace

double mass_fraction_outside(const RealFieldPair& y, double radius) {
  return mass_fraction_outside_impl(y, radius);
}
double mass_fraction_outside(const ComplexFieldPair& y, double radius) {
  return mass_fraction_outside_impl(y, radius);
}

}  // namespace kg
