#include "kg/fft.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <vector>

namespace kg::fft {

namespace {

Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

// One 1-D pass along `axis` of the flattened row-major array (last axis
// fastest). Lines along the last axis are contiguous; other axes are
// gathered through a stride.
void axis_pass(const LatticeSpec& lat, ArrayXcd& data, int axis, bool fwd) {
  const int n = lat.points_per_axis;
  const std::int64_t total = lat.size();
  std::int64_t stride = 1;
  for (int a = lat.dim - 1; a > axis; --a) stride *= n;
  const std::int64_t block = stride * n;

  std::vector<Complex> line(n), out(n);
  for (std::int64_t base = 0; base < total; base += block) {
    for (std::int64_t off = 0; off < stride; ++off) {
      Complex* p = data.data() + base + off;
      for (int i = 0; i < n; ++i) line[i] = p[i * stride];
      if (fwd)
        engine().fwd(out, line);
      else
        engine().inv(out, line);
      for (int i = 0; i < n; ++i) p[i * stride] = out[i];
    }
  }
}

}  // namespace

ArrayXcd forward(const LatticeSpec& lat, const ArrayXcd& w) {
  ArrayXcd data = w;
  for (int a = 0; a < lat.dim; ++a) axis_pass(lat, data, a, true);
  data *= lat.cell_volume();
  return data;
}

ArrayXcd inverse(const LatticeSpec& lat, const ArrayXcd& what) {
  ArrayXcd data = what;
  for (int a = 0; a < lat.dim; ++a) axis_pass(lat, data, a, false);
  data *= 1.0 / lat.cell_volume();  // Eigen inv scales by 1/N per axis
  return data;
}

ArrayXcd forward(const LatticeSpec& lat, const ArrayXd& w) {
  return forward(lat, ArrayXcd(w.cast<Complex>()));
}

ArrayXd inverse_real(const LatticeSpec& lat, const ArrayXcd& what,
                     double* imag_residue) {
  const ArrayXcd z = inverse(lat, what);
  if (imag_residue) {
    const double re = z.real().matrix().norm();
    const double im = z.imag().matrix().norm();
    *imag_residue = (re > 0.0) ? im / re : im;
  }
  return z.real();
}

}  // namespace kg::fft
