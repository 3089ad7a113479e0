#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kg/fft.hpp"
#include "kg/fields.hpp"
#include "kg/lattice.hpp"
#include "kg/spectral_core.hpp"

using namespace kg;
constexpr double pi = std::numbers::pi;

TEST_CASE("make_lattice wavenumber grid and spacing") {
  const auto lat = make_lattice(1, 8, 2 * pi);
  // k = 2 pi m / L with m in {-4,...,3}; FFT order 0,1,2,3,-4,-3,-2,-1
  std::vector<double> expect{0, 1, 2, 3, -4, -3, -2, -1};
  for (int i = 0; i < 8; ++i)
    CHECK(lat.axis_wavenumbers[i] == doctest::Approx(expect[i]).epsilon(1e-14));

  const auto lat2 = make_lattice(2, 8, 2 * pi);
  CHECK(lat2.size() == 64);
  CHECK(lat2.spacing == doctest::Approx(pi / 4));

  CHECK_THROWS_AS(make_lattice(1, 7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_lattice(1, 8, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_lattice(4, 8, 1.0), std::invalid_argument);
}

TEST_CASE("fft roundtrip and Parseval under the fixed convention") {
  for (int dim : {1, 2, 3}) {
    const auto lat = make_lattice(dim, 16, 5.0);
    std::mt19937_64 rng(7 + dim);
    std::normal_distribution<double> n01;
    ArrayXd w(lat.size());
    for (auto& x : w) x = n01(rng);

    const ArrayXcd what = fft::forward(lat, w);
    double res = 0.0;
    const ArrayXd back = fft::inverse_real(lat, what, &res);
    CHECK(res < 1e-13);
    CHECK((back - w).abs().maxCoeff() < 1e-12 * w.abs().maxCoeff());

    // dx^n sum |w|^2 == L^-n sum |what|^2
    const double lhs = lat.cell_volume() * w.square().sum();
    const double rhs = what.abs2().sum() / lat.box_volume();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("fft diagonalizes a single mode") {
  const auto lat = make_lattice(1, 32, 2 * pi);
  const ArrayXd x = coordinate_array(lat, 0);
  const double k = lat.axis_wavenumbers[5];
  const ArrayXd w = (k * x).cos();
  const ArrayXcd what = fft::forward(lat, w);
  // cos(kx) = (e^{ikx} + e^{-ikx})/2: mass L/2 at modes +-k under forward
  // = dx sum e^{-ikx} w
  for (int i = 0; i < 32; ++i) {
    const double expect =
        (i == 5 || i == 32 - 5) ? lat.box_length / 2.0 : 0.0;
    CHECK(std::abs(what[i] - Complex(expect, 0)) < 1e-10);
  }
}

TEST_CASE("dispersion values and symmetry") {
  const auto lat = make_lattice(1, 16, 2 * pi);
  const auto d3 = dispersion(lat, 3.0);
  CHECK(d3.omega[0] == doctest::Approx(3.0));  // omega(0) = m
  // |k| = 4 at mode index 4, m = 3 -> omega = 5
  CHECK(lat.axis_wavenumbers[4] == doctest::Approx(4.0));
  CHECK(d3.omega[4] == doctest::Approx(5.0));

  const auto conj = conjugate_index_map(lat);
  for (std::int64_t f = 0; f < lat.size(); ++f)
    CHECK(d3.omega[f] == doctest::Approx(d3.omega[conj[f]]));

  CHECK_THROWS_AS(dispersion(lat, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dispersion(lat, -1.0), std::invalid_argument);
}

TEST_CASE("propagator identity, quarter period, group law, det") {
  const auto lat = make_lattice(1, 16, 2 * pi);
  const auto d = dispersion(lat, 1.0);

  const auto g0 = propagator(d, 0.0);
  for (std::int64_t f = 0; f < lat.size(); ++f) {
    CHECK(g0.cos_wt[f] == doctest::Approx(1.0));
    CHECK(std::abs(g0.sin_wt_ov[f]) < 1e-15);
    CHECK(std::abs(g0.w_sin_wt[f]) < 1e-15);
  }

  // k = 0, m = 1, t = pi/2: [[0,1],[-1,0]]
  const auto gq = propagator(d, pi / 2);
  CHECK(std::abs(gq.cos_wt[0]) < 1e-15);
  CHECK(gq.sin_wt_ov[0] == doctest::Approx(1.0));
  CHECK(gq.w_sin_wt[0] == doctest::Approx(1.0));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ts(-20.0, 20.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double t = ts(rng), s = ts(rng);
    const auto gt = propagator(d, t);
    const auto gs = propagator(d, s);
    const auto gts = propagator(d, t + s);
    for (std::int64_t f = 0; f < lat.size(); f += 3) {
      // product G_t G_s entrywise
      const double a = gt.cos_wt[f] * gs.cos_wt[f] -
                       gt.sin_wt_ov[f] * gs.w_sin_wt[f];
      const double b = gt.cos_wt[f] * gs.sin_wt_ov[f] +
                       gt.sin_wt_ov[f] * gs.cos_wt[f];
      const double c = -gt.w_sin_wt[f] * gs.cos_wt[f] -
                       gt.cos_wt[f] * gs.w_sin_wt[f];
      CHECK(std::abs(a - gts.cos_wt[f]) < 1e-12);
      CHECK(std::abs(b - gts.sin_wt_ov[f]) < 1e-12);
      CHECK(std::abs(c + gts.w_sin_wt[f]) < 1e-12);
      // det = cos^2 + (sin/w)(w sin) = 1
      const double det =
          gt.cos_wt[f] * gt.cos_wt[f] + gt.sin_wt_ov[f] * gt.w_sin_wt[f];
      CHECK(std::abs(det - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("evolve: zero field, analytic single mode, conservation") {
  const auto lat = make_lattice(1, 64, 2 * pi * 4);
  const double m = 1.3;

  auto z = zero_field(lat);
  const auto zt = evolve(z, m, 3.7);
  CHECK(zt.u.abs().maxCoeff() == 0.0);
  CHECK(zt.v.abs().maxCoeff() == 0.0);

  const ArrayXd x = coordinate_array(lat, 0);
  const double k = lat.axis_wavenumbers[6];
  const double w = std::sqrt(k * k + m * m);
  RealFieldPair y0;
  y0.lattice = lat;
  y0.u = (k * x).cos();
  y0.v = ArrayXd::Zero(lat.size());
  const double t = 2.21;
  const auto yt = evolve(y0, m, t);
  const ArrayXd exp_u = std::cos(w * t) * (k * x).cos();
  const ArrayXd exp_v = -w * std::sin(w * t) * (k * x).cos();
  CHECK((yt.u - exp_u).abs().maxCoeff() < 1e-11);
  CHECK((yt.v - exp_v).abs().maxCoeff() < 1e-11);

  // energy conservation and reversibility on a random field
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n01;
  RealFieldPair r;
  r.lattice = lat;
  r.u.resize(lat.size());
  r.v.resize(lat.size());
  for (auto& a : r.u) a = n01(rng);
  for (auto& a : r.v) a = n01(rng);
  const double e0 = spectral_energy(r, m);
  const auto rt = evolve(r, m, 17.3);
  CHECK(spectral_energy(rt, m) == doctest::Approx(e0).epsilon(1e-12));
  const auto rback = evolve(rt, m, -17.3);
  CHECK((rback.u - r.u).abs().maxCoeff() <
        1e-10 * r.u.abs().maxCoeff());
  CHECK((rback.v - r.v).abs().maxCoeff() <
        1e-10 * r.v.abs().maxCoeff());
}

TEST_CASE("adjoint_evolve: identity at t=0, duality, finite propagation") {
  const auto lat = make_lattice(1, 512, 60.0);
  const double m = 1.0;
  const auto psi = make_bump_test_function(lat, 2.0, 1.0, 0.7, 2.0);

  const auto phi0 = adjoint_evolve(psi, m, 0.0);
  CHECK((phi0.psi0 - psi.psi0).abs().maxCoeff() < 1e-12);
  CHECK((phi0.psi1 - psi.psi1).abs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  RealFieldPair y;
  y.lattice = lat;
  y.u.resize(lat.size());
  y.v.resize(lat.size());
  for (auto& a : y.u) a = n01(rng);
  for (auto& a : y.v) a = n01(rng);

  for (double t : {0.5, 4.0, 19.0, -7.0}) {
    const double lhs = pairing(evolve(y, m, t), psi);
    const auto phi = adjoint_evolve(psi, m, t);
    RealFieldPair phi_pair;
    phi_pair.lattice = lat;
    phi_pair.u = phi.psi0;
    phi_pair.v = phi.psi1;
    const double rhs = y.lattice.cell_volume() *
                       ((y.u * phi.psi0).sum() + (y.v * phi.psi1).sum());
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
  }

  // finite propagation: mass outside B_{t + r + 2 dx} below 1e-8
  const double t = 20.0;
  REQUIRE(t + psi.support_radius < lat.box_length / 2);
  const auto phi = adjoint_evolve(psi, m, t);
  RealFieldPair pp;
  pp.lattice = lat;
  pp.u = phi.psi0;
  pp.v = phi.psi1;
  CHECK(mass_fraction_outside(pp, t + psi.support_radius + 2 * lat.spacing) <
        1e-8);
}

TEST_CASE("local_energy: zero, constant field, monotone in R") {
  const auto lat = make_lattice(2, 32, 10.0);
  const double m = 2.0;
  CHECK(local_energy(zero_field(lat), m, 3.0) == 0.0);

  RealFieldPair c;
  c.lattice = lat;
  c.u = ArrayXd::Constant(lat.size(), 0.8);
  c.v = ArrayXd::Zero(lat.size());
  const double R = 3.0;
  // lattice volume of the ball
  const ArrayXd r2 = squared_radius(lat);
  double vol = 0.0;
  for (std::int64_t f = 0; f < lat.size(); ++f)
    if (r2[f] < R * R) vol += lat.cell_volume();
  CHECK(local_energy(c, m, R) ==
        doctest::Approx(m * m * 0.64 * vol).epsilon(1e-12));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  RealFieldPair y;
  y.lattice = lat;
  y.u.resize(lat.size());
  y.v.resize(lat.size());
  for (auto& a : y.u) a = n01(rng);
  for (auto& a : y.v) a = n01(rng);
  double prev = 0.0;
  for (double R2 : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    const double e = local_energy(y, m, R2);
    CHECK(e >= prev);
    prev = e;
  }
  CHECK_THROWS_AS(local_energy(y, m, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(local_energy(y, m, 6.0), std::invalid_argument);
}

TEST_CASE("weighted_sobolev_norm: zero, L2 case, spike oracle") {
  const auto lat = make_lattice(1, 16, 8.0);
  CHECK(weighted_sobolev_norm(lat, ArrayXd::Zero(lat.size()), -1.0, -1.0) ==
        0.0);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  ArrayXd w(lat.size());
  for (auto& a : w) a = n01(rng);
  const double l2 = std::sqrt(lat.cell_volume() * w.square().sum());
  CHECK(weighted_sobolev_norm(lat, w, 0.0, 0.0) ==
        doctest::Approx(l2).epsilon(1e-12));

  // unit spike at origin, s = -1: brute-force double sum oracle
  ArrayXd spike = ArrayXd::Zero(lat.size());
  spike[0] = 1.0;
  const double s = -1.0, alpha = 0.0;
  // oracle: Lambda^s spike(x) = L^-1 sum_k <k>^s e^{ikx} dx (spike hat = dx)
  const std::int64_t n = lat.size();
  double acc = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double x = lat.axis_coords[i];
    Complex val(0, 0);
    for (std::int64_t j = 0; j < n; ++j) {
      const double k = lat.axis_wavenumbers[j];
      const double mult = std::pow(k * k + 1.0, s / 2.0);
      val += std::polar(mult * lat.spacing / lat.box_length, k * x);
    }
    const double wx = std::pow(x * x + 1.0, alpha);
    acc += std::norm(wx * val);
  }
  const double oracle = std::sqrt(lat.cell_volume() * acc);
  CHECK(weighted_sobolev_norm(lat, spike, s, alpha) ==
        doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("local energy bound: ball energy grows no faster than the cone") {
  // energy in B_R at time t is bounded by the initial energy in B_{R+|t|}
  const auto lat = make_lattice(1, 512, 120.0);
  const double m = 1.0;
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n01;
  RealFieldPair y = zero_field(lat);
  const ArrayXd mask = bump_profile(lat, 20.0, 1.0);
  for (std::int64_t f = 0; f < lat.size(); ++f) {
    y.u[f] = mask[f] * n01(rng);
    y.v[f] = mask[f] * n01(rng);
  }
  for (double t : {5.0, 15.0, 30.0}) {
    const auto yt = evolve(y, m, t);
    const double lhs = local_energy(yt, m, 10.0);
    const double rhs = local_energy(y, m, 10.0 + t);
    CHECK(lhs <= rhs * (1.0 + 1e-9) + 1e-9);
  }
}
