#pragma once

#include "kg/fields.hpp"
#include "kg/lattice.hpp"

namespace kg {

/// Dispersion relation omega(k) = sqrt(|k|^2 + m^2) on the lattice modes.
struct Dispersion {
  LatticeSpec lattice;
  double mass = 1.0;
  ArrayXd omega;  // per flat mode
};

Dispersion dispersion(const LatticeSpec& lat, double m);

/// Per-mode 2x2 propagator G_t(k) = [[cos wt, sin wt / w], [-w sin wt, cos wt]].
/// det G_t(k) = 1 at every mode; G_0 = identity.
struct PropagatorField {
  LatticeSpec lattice;
  double time = 0.0;
  ArrayXd cos_wt;      // cos(w t)
  ArrayXd sin_wt_ov;   // sin(w t)/w
  ArrayXd w_sin_wt;    // w sin(w t)
};

PropagatorField propagator(const Dispersion& disp, double t);

/// Exact constant-coefficient evolution: Y(t) = F^-1 [ G_t(k) F Y_0 ].
/// Real input yields real output (imaginary residue below 1e-10 of the
/// field norm is discarded, larger residue is an error).
RealFieldPair evolve(const RealFieldPair& y0, double m, double t);
ComplexFieldPair evolve(const ComplexFieldPair& y0, double m, double t);

/// Adjoint group: Phi(.,t) = (phidot, phi) where phi solves the equation
/// with initial data (psi1, psi0). Satisfies the duality
/// <evolve(Y,t), Psi> = <Y, adjoint_evolve(Psi,t)>. The returned
/// support_radius is the inflated-cone bound min(r + |t|, L/2).
TestFunction adjoint_evolve(const TestFunction& psi, double m, double t);

/// Lattice quadrature of the local energy over the ball |x| < R with
/// spectral gradient: dx^n sum_{|x|<R} (|v|^2 + |grad u|^2 + m^2 |u|^2).
double local_energy(const RealFieldPair& y, double m, double R);

/// Conserved spectral energy sum_k (|vhat|^2 + w^2 |uhat|^2).
double spectral_energy(const RealFieldPair& y, double m);
double spectral_energy(const ComplexFieldPair& y, double m);

/// Weighted Sobolev norm || <x>^alpha Lambda^s w ||_{L2} of a single real
/// component, with Lambda^s the <k>^s Fourier multiplier.
double weighted_sobolev_norm(const LatticeSpec& lat, const ArrayXd& w,
                             double s, double alpha);

/// Local seminorm ||Psi||_(R) of a pair: L2 over the ball of the first
/// component plus H^1 over the ball of the second (spectral gradient).
double local_pair_seminorm(const ComplexFieldPair& p, double R);

/// Full H = L2 + H1 norm of a pair: || (P0, P1) ||_H with
/// |P0|^2 + |P1|^2 + |grad P1|^2 integrated over the box.
double h_norm(const ComplexFieldPair& p);

}  // namespace kg
