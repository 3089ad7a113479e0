#include "kg/spectral_covariance.hpp"

#include <cmath>
#include <stdexcept>

namespace kg {

SpectralCovariance SpectralCovariance::zero(const LatticeSpec& lat,
                                            CovKind kind) {
  SpectralCovariance q;
  q.lattice = lat;
  q.kind = kind;
  q.e00 = ArrayXcd::Zero(lat.size());
  q.e01 = ArrayXcd::Zero(lat.size());
  q.e10 = ArrayXcd::Zero(lat.size());
  q.e11 = ArrayXcd::Zero(lat.size());
  return q;
}

double min_eigenvalue(const SpectralCovariance& q) {
  double mn = std::numeric_limits<double>::infinity();
  for (std::int64_t f = 0; f < q.lattice.size(); ++f) {
    const double a = q.e00[f].real();
    const double d = q.e11[f].real();
    const Complex b = 0.5 * (q.e01[f] + std::conj(q.e10[f]));
    const double mid = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    mn = std::min(mn, mid - rad);
  }
  return mn;
}

void regularize_psd(SpectralCovariance& q, double tol) {
  for (std::int64_t f = 0; f < q.lattice.size(); ++f) {
    const double a = q.e00[f].real();
    const double d = q.e11[f].real();
    const Complex b = 0.5 * (q.e01[f] + std::conj(q.e10[f]));
    const double mid = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    const double lo = mid - rad;
    if (lo >= 0.0) continue;
    if (lo < -tol)
      throw std::runtime_error(
          "regularize_psd: eigenvalue below -tolerance, not a roundoff "
          "artifact");
    // shift the diagonal just enough to clear the negative eigenvalue
    q.e00[f] += -lo;
    q.e11[f] += -lo;
  }
}

double spectral_mass(const SpectralCovariance& q) {
  double s = 0.0;
  for (std::int64_t f = 0; f < q.lattice.size(); ++f)
    s += std::sqrt(std::norm(q.e00[f]) + std::norm(q.e01[f]) +
                   std::norm(q.e10[f]) + std::norm(q.e11[f]));
  return s;
}

double mean_energy_density(const SpectralCovariance& q, double m) {
  const ArrayXd k2 = squared_wavenumber(q.lattice);
  const double vol = q.lattice.box_volume();
  double s = 0.0;
  for (std::int64_t f = 0; f < q.lattice.size(); ++f)
    s += q.e11[f].real() + (k2[f] + m * m) * q.e00[f].real();
  return s / vol;
}

ArrayXd covariance_entry_real_space(const SpectralCovariance& q, int i,
                                    int j) {
  const ArrayXcd* entry = nullptr;
  if (i == 0 && j == 0) entry = &q.e00;
  else if (i == 0 && j == 1) entry = &q.e01;
  else if (i == 1 && j == 0) entry = &q.e10;
  else if (i == 1 && j == 1) entry = &q.e11;
  else throw std::invalid_argument("covariance_entry_real_space: bad index");
  double residue = 0.0;
  ArrayXd out = fft::inverse_real(q.lattice, *entry, &residue);
  if (residue > 1e-8)
    throw std::runtime_error(
        "covariance_entry_real_space: spectrum not Hermitian-symmetric");
  return out;
}

}  // namespace kg
