#pragma once

#include <Eigen/Core>
#include <complex>

#include "kg/lattice.hpp"

namespace kg {

using Complex = std::complex<double>;
using Eigen::ArrayXcd;
using Eigen::ArrayXd;

/// Discrete Fourier transforms on a LatticeSpec grid with the fixed
/// convention used throughout this project:
///
///   forward:  what(k) = dx^n * sum_x exp(-i k.x) w(x)
///   inverse:  w(x)    = L^-n * sum_k exp(+i k.x) what(k)
///
/// so forward approximates the continuum integral transform and inverse
/// its Riemann-sum inversion; the pair is exactly mutually inverse on the
/// grid. Transforms keep per-thread plan caches, so concurrent calls from
/// different threads are safe.
namespace fft {

ArrayXcd forward(const LatticeSpec& lat, const ArrayXcd& w);
ArrayXcd inverse(const LatticeSpec& lat, const ArrayXcd& what);

ArrayXcd forward(const LatticeSpec& lat, const ArrayXd& w);

/// Inverse transform of a Hermitian-symmetric spectrum; returns the real
/// part and optionally reports the relative size of the discarded
/// imaginary residue.
ArrayXd inverse_real(const LatticeSpec& lat, const ArrayXcd& what,
                     double* imag_residue = nullptr);

}  // namespace fft
}  // namespace kg
