#pragma once

#include "kg/fft.hpp"
#include "kg/lattice.hpp"
#include "kg/spectral_core.hpp"

namespace kg {

enum class CovKind { initial, evolved, limit, gibbs };

/// 2x2 matrix-valued spectral density q^{ij}(k), i,j in {0,1}, stored per
/// flat mode. Entries are Hermitian per mode (e10 = conj(e01), diagonals
/// real) and satisfy e(-k) = conj(e(k)) so real-space covariances are real.
struct SpectralCovariance {
  LatticeSpec lattice;
  CovKind kind = CovKind::initial;
  ArrayXcd e00, e01, e10, e11;

  static SpectralCovariance zero(const LatticeSpec& lat,
                                 CovKind kind = CovKind::initial);
};

/// Smallest eigenvalue of the Hermitian part, minimized over modes.
double min_eigenvalue(const SpectralCovariance& q);

/// Clamp eigenvalues in [-tol, 0) to zero; more negative values are an
/// error (a modeling mistake, not roundoff).
void regularize_psd(SpectralCovariance& q, double tol = 1e-10);

/// Total spectral mass sum_k ||q(k)|| (Frobenius), finite-check helper.
double spectral_mass(const SpectralCovariance& q);

/// Mean energy density e0 = q11(0) - (Lap q00)(0) + m^2 q00(0) evaluated
/// through the spectral representation.
double mean_energy_density(const SpectralCovariance& q, double m);

/// Real-space covariance entry q^{ij}(z) on the lattice (inverse DFT of the
/// selected entry). i,j in {0,1}.
ArrayXd covariance_entry_real_space(const SpectralCovariance& q, int i, int j);

}  // namespace kg
