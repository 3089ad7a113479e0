#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>

namespace kg {

/// Periodic n-dimensional grid with N points per axis on a box of side L.
/// Wavenumbers per axis are k = 2*pi*m/L for m in {-N/2, ..., N/2-1}, stored
/// in FFT order (0, 1, ..., N/2-1, -N/2, ..., -1). Coordinates live in the
/// centered fundamental domain [-L/2, L/2) with x = 0 at grid index 0.
/// Flat indexing is row-major with the last axis fastest.
struct LatticeSpec {
  int dim = 1;
  int points_per_axis = 8;   // N (even)
  double box_length = 1.0;   // L
  double spacing = 0.125;    // dx = L/N
  Eigen::ArrayXd axis_wavenumbers;  // length N, FFT order
  Eigen::ArrayXd axis_coords;       // length N, centered coordinate of index i

  std::int64_t size() const {
    std::int64_t s = 1;
    for (int a = 0; a < dim; ++a) s *= points_per_axis;
    return s;
  }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing;
    return v;
  }
  double box_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= box_length;
    return v;
  }

  std::array<int, 3> decompose(std::int64_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % points_per_axis);
      flat /= points_per_axis;
    }
    return idx;
  }
  std::int64_t flatten(const std::array<int, 3>& idx) const {
    std::int64_t flat = 0;
    for (int a = 0; a < dim; ++a) flat = flat * points_per_axis + idx[a];
    return flat;
  }

  bool same_grid(const LatticeSpec& o) const {
    return dim == o.dim && points_per_axis == o.points_per_axis &&
           box_length == o.box_length;
  }
};

LatticeSpec make_lattice(int dim, int points_per_axis, double box_length);

/// |k|^2 per flat mode index.
Eigen::ArrayXd squared_wavenumber(const LatticeSpec& lat);

/// |x|^2 per flat grid index, measured in the centered fundamental domain.
Eigen::ArrayXd squared_radius(const LatticeSpec& lat);

/// Coordinate of axis `axis` per flat grid index.
Eigen::ArrayXd coordinate_array(const LatticeSpec& lat, int axis);

/// Wavenumber component of axis `axis` per flat mode index.
Eigen::ArrayXd wavenumber_array(const LatticeSpec& lat, int axis);

/// Flat index of the mode -k for each flat mode index of k.
Eigen::ArrayXi conjugate_index_map(const LatticeSpec& lat);

}  // namespace kg
