#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "kg/clt_verifier.hpp"
#include "kg/covariance_engine.hpp"
#include "kg/fields.hpp"

namespace kg {

/// Compactly supported smooth magnetic potential on a 2D lattice:
/// A1 = -x2 a(|x|), A2 = x1 a(|x|) with a(rho) = amplitude * exp bump
/// supported in |x| < R0. Divergence-free by construction; curl does not
/// vanish identically for amplitude > 0.
struct MagneticPotential {
  LatticeSpec lattice;
  double support_radius = 0.0;  // R0
  double amplitude = 0.0;
  ArrayXd a1, a2;
  ArrayXd div_a;  // d1 A1 + d2 A2 (spectral; zero for this family)
  ArrayXd a_sq;   // A1^2 + A2^2
};

MagneticPotential build_potential(const LatticeSpec& lat, double r0,
                                  double amplitude);

/// Evolved state with its integrator bookkeeping.
struct MagneticState {
  ComplexFieldPair pair;
  double time = 0.0;
  double dt = 0.0;
  std::int64_t steps = 0;
};

/// Variable-coefficient evolution of the complex pair (u, v): u' = v,
/// v' = (Lap - m^2) u - 2i sum A_j d_j u - (i div A + |A|^2) u.
/// Integrating-factor classical RK4 in Fourier space: the constant
/// coefficient part is applied exactly per mode, the magnetic terms are
/// stepped with dt = dt_factor * dx. amplitude = 0 therefore reproduces
/// the exact spectral propagator to roundoff.
ComplexFieldPair magnetic_evolve(const ComplexFieldPair& y0,
                                 const MagneticPotential& a, double m,
                                 double t, double dt_factor = 0.2);

MagneticState magnetic_evolve_tracked(const ComplexFieldPair& y0,
                                      const MagneticPotential& a, double m,
                                      double t, double dt_factor = 0.2);

/// Marches once, snapshotting at each (strictly increasing) time.
std::vector<ComplexFieldPair> magnetic_evolve_multi(
    const ComplexFieldPair& y0, const MagneticPotential& a, double m,
    const std::vector<double>& times, double dt_factor = 0.2);

/// Adjoint magnetic group: U'(t) Psi = (psidot, psi) where psi solves the
/// same equation with initial data (Psi1, Psi0).
ComplexFieldPair magnetic_adjoint_evolve(const ComplexFieldPair& psi,
                                         const MagneticPotential& a, double m,
                                         double t, double dt_factor = 0.2);
std::vector<ComplexFieldPair> magnetic_adjoint_evolve_multi(
    const ComplexFieldPair& psi, const MagneticPotential& a, double m,
    const std::vector<double>& times, double dt_factor = 0.2);

/// Gauge-covariant energy int |v|^2 + sum_j |(d_j - i A_j) u|^2 + m^2 |u|^2,
/// conserved by the exact flow.
double gauge_energy(const ComplexFieldPair& y, const MagneticPotential& a,
                    double m);

/// Vainberg-type local energy decay rate for n = 2.
inline double vainberg_eps(double t) {
  const double l = std::log(t + 2.0);
  return 1.0 / ((t + 1.0) * l * l);
}
/// Integrated rate ~ 1/log(t+2) governing the Cook tail for n = 2.
inline double vainberg_eps1(double t) { return 1.0 / std::log(t + 2.0); }

struct MagneticDecayRecord {
  std::vector<double> times;
  std::vector<double> local_norm;  // ||U'(t) Psi||_(R0)
  std::vector<double> eps;         // vainberg_eps(t)
  double ratio_max_over_min = 0.0; // of local_norm/eps over the window tail
};

MagneticDecayRecord local_decay_probe(const TestFunction& psi,
                                      const MagneticPotential& a, double m,
                                      const std::vector<double>& t_list,
                                      double r0, double dt_factor = 0.2);

/// Cook-method wave operator W Psi = Psi + int_0^T U0'(-t) D U'(t) Psi dt
/// with D the first-order magnetic perturbation, trapezoid quadrature.
struct CookResult {
  ComplexFieldPair w_psi;
  std::vector<double> times;            // quadrature nodes
  std::vector<double> increment_norms;  // ||U0'(-t) D U'(t) Psi||_H dt
  /// snapshots of U'(T)Psi and U0'(T) W_T Psi residuals at requested times
  std::vector<double> residual_times;
  std::vector<double> residual_norms;  // ||U'(T)Psi - U0'(T) W Psi||_H
};

CookResult cook_wave_operator(const TestFunction& psi,
                              const MagneticPotential& a, double m,
                              double t_max, double dt_quad = 0.0,
                              const std::vector<double>& residual_times = {},
                              double dt_factor = 0.2);

/// Monte Carlo characteristic functional under the magnetic dynamics vs the
/// scattering prediction exp(-Q_inf(W Psi, W Psi)/2).
struct TheoremAReport {
  ComplexMeanStats mu_hat;
  double prediction = 0.0;
  double distance = 0.0;
  double q_inf_wpsi = 0.0;
  bool within_4se = false;
};

TheoremAReport theorem_a_experiment(const MeasureSpec& measure,
                                    const MagneticPotential& a, double m,
                                    const TestFunction& psi, double t,
                                    int count, std::uint64_t seed,
                                    double w_t_max, int workers = 0,
                                    double dt_factor = 0.2);

/// Trace of mu_t(Psi) for the non-mixing ensemble under the magnetic flow;
/// the two-atom measure keeps oscillating.
struct MagneticCounterexampleTrace {
  std::vector<double> times;
  std::vector<double> mu_re;  // cos <(1,0), U'(t) Psi>
  double first_window_amplitude = 0.0;
  double last_window_amplitude = 0.0;
};

MagneticCounterexampleTrace magnetic_counterexample_trace(
    const MagneticPotential& a, double m, const TestFunction& psi,
    const std::vector<double>& t_list, double dt_factor = 0.2);

}  // namespace kg
