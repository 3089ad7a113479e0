#pragma once

namespace kg {

/// Bessel function J1. Power series for |z| <= 12, Hankel asymptotic
/// expansion beyond; the two branches agree to 1e-10 at the switch.
double bessel_j1(double z);

/// Regular (absolutely continuous) part of the 3D retarded fundamental
/// solution inside the cone:
///   -(m/4pi) J1(m sqrt(t^2 - |x|^2)) / sqrt(t^2 - |x|^2)   for |x| < t,
/// and 0 for |x| >= t. The singular sphere layer delta(|x|-t)/(4pi t) is
/// handled separately by callers.
double fundamental_solution_3d(double x_radius, double t, double m);

}  // namespace kg
