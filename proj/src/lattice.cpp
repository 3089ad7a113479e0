#include "kg/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kg {

LatticeSpec make_lattice(int dim, int points_per_axis, double box_length) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("make_lattice: dim must be 1, 2 or 3, got " +
                                std::to_string(dim));
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw std::invalid_argument(
        "make_lattice: points_per_axis must be even and >= 8, got " +
        std::to_string(points_per_axis));
  if (!(box_length > 0.0))
    throw std::invalid_argument("make_lattice: box_length must be positive");

  LatticeSpec lat;
  lat.dim = dim;
  lat.points_per_axis = points_per_axis;
  lat.box_length = box_length;
  lat.spacing = box_length / points_per_axis;

  const int n = points_per_axis;
  lat.axis_wavenumbers.resize(n);
  lat.axis_coords.resize(n);
  const double dk = 2.0 * std::numbers::pi / box_length;
  for (int i = 0; i < n; ++i) {
    const int m = (i < n / 2) ? i : i - n;
    lat.axis_wavenumbers[i] = dk * m;
    lat.axis_coords[i] = lat.spacing * m;
  }
  return lat;
}

Eigen::ArrayXd squared_wavenumber(const LatticeSpec& lat) {
  Eigen::ArrayXd out(lat.size());
  for (std::int64_t f = 0; f < lat.size(); ++f) {
    const auto idx = lat.decompose(f);
    double s = 0.0;
    for (int a = 0; a < lat.dim; ++a) {
      const double k = lat.axis_wavenumbers[idx[a]];
      s += k * k;
    }
    out[f] = s;
  }
  return out;
}

Eigen::ArrayXd squared_radius(const LatticeSpec& lat) {
  Eigen::ArrayXd out(lat.size());
  for (std::int64_t f = 0; f < lat.size(); ++f) {
    const auto idx = lat.decompose(f);
    double s = 0.0;
    for (int a = 0; a < lat.dim; ++a) {
      const double x = lat.axis_coords[idx[a]];
      s += x * x;
    }
    out[f] = s;
  }
  return out;
}

Eigen::ArrayXd coordinate_array(const LatticeSpec& lat, int axis) {
  Eigen::ArrayXd out(lat.size());
  for (std::int64_t f = 0; f < lat.size(); ++f)
    out[f] = lat.axis_coords[lat.decompose(f)[axis]];
  return out;
}

Eigen::ArrayXd wavenumber_array(const LatticeSpec& lat, int axis) {
  Eigen::ArrayXd out(lat.size());
  for (std::int64_t f = 0; f < lat.size(); ++f)
    out[f] = lat.axis_wavenumbers[lat.decompose(f)[axis]];
  return out;
}

Eigen::ArrayXi conjugate_index_map(const LatticeSpec& lat) {
  Eigen::ArrayXi out(lat.size());
  const int n = lat.points_per_axis;
  for (std::int64_t f = 0; f < lat.size(); ++f) {
    auto idx = lat.decompose(f);
    for (int a = 0; a < lat.dim; ++a) idx[a] = (n - idx[a]) % n;
    out[f] = static_cast<int>(lat.flatten(idx));
  }
  return out;
}

}  // namespace kg
