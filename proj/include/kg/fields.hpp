#pragma once

#include <complex>

#include "kg/fft.hpp"
#include "kg/lattice.hpp"

namespace kg {

/// State pair Y = (u, v) = (position component, velocity component) sampled
/// on a lattice. Scalar is double for real fields, Complex for the magnetic
/// (complex) case.
template <class Scalar>
struct FieldPair {
  LatticeSpec lattice;
  Eigen::ArrayX<Scalar> u;
  Eigen::ArrayX<Scalar> v;

  bool finite() const { return u.isFinite().all() && v.isFinite().all(); }
};

using RealFieldPair = FieldPair<double>;
using ComplexFieldPair = FieldPair<Complex>;

RealFieldPair zero_field(const LatticeSpec& lat);

ComplexFieldPair to_complex(const RealFieldPair& y);

/// Compactly supported test pair Psi = (psi0, psi1) with declared support
/// ball radius. Entries vanish outside |x| < support_radius.
struct TestFunction {
  LatticeSpec lattice;
  ArrayXd psi0;
  ArrayXd psi1;
  double support_radius = 0.0;
};

/// Radial C-infinity bump amp * exp(q - q/(1 - (|x - center|/radius)^2))
/// inside the ball, identically zero outside. Larger sharpness q buys a
/// faster Fourier tail (less band-limiting leakage) at the price of a
/// narrower effective width.
ArrayXd bump_profile(const LatticeSpec& lat, double radius, double amp,
                     const std::array<double, 3>& center = {0.0, 0.0, 0.0},
                     double sharpness = 1.0);

TestFunction make_bump_test_function(const LatticeSpec& lat, double radius,
                                     double amp0, double amp1,
                                     double sharpness = 1.0);

/// Real pairing <Y, Psi> = dx^n sum_x (u psi0 + v psi1). For complex
/// arguments this is the real scalar product under the C == R^2
/// identification.
double pairing(const RealFieldPair& y, const TestFunction& psi);
double pairing(const RealFieldPair& y, const ComplexFieldPair& phi);
double pairing(const ComplexFieldPair& y, const ComplexFieldPair& phi);

/// Fraction of the local-energy-style mass sum(|u|^2 + |v|^2) carried by
/// grid points with |x| > radius.
double mass_fraction_outside(const RealFieldPair& y, double radius);
double mass_fraction_outside(const ComplexFieldPair& y, double radius);

}  // namespace kg
