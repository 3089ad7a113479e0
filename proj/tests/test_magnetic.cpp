#include <doctest.h>

#include <cmath>

#include "kg/magnetic.hpp"
#include "kg/rng.hpp"

using namespace kg;

namespace {
LatticeSpec grid128() { return make_lattice(2, 128, 80.0); }
}  // namespace

TEST_CASE("potential: construction, support, curl") {
  const auto lat = grid128();
  const auto a0 = build_potential(lat, 4.0, 0.0);
  CHECK(a0.a1.abs().maxCoeff() == 0.0);
  CHECK(a0.a2.abs().maxCoeff() == 0.0);

  const auto a = build_potential(lat, 4.0, 0.5);
  const ArrayXd r2 = squared_radius(lat);
  for (std::int64_t f = 0; f < lat.size(); ++f)
    if (r2[f] > 16.0) {
      CHECK(std::abs(a.a1[f]) < 1e-12);
      CHECK(std::abs(a.a2[f]) < 1e-12);
    }
  CHECK(a.div_a.abs().maxCoeff() == 0.0);

  // spectral divergence of the sampled family stays at the aliasing floor
  const ArrayXcd a1h = fft::forward(lat, a.a1);
  const ArrayXcd a2h = fft::forward(lat, a.a2);
  const ArrayXd k1 = wavenumber_array(lat, 0);
  const ArrayXd k2 = wavenumber_array(lat, 1);
  const ArrayXd div_spectral = fft::inverse_real(
      lat, ArrayXcd(Complex(0, 1) * (k1.cast<Complex>() * a1h +
                                     k2.cast<Complex>() * a2h)));
  CHECK(div_spectral.abs().maxCoeff() <
        0.1 * std::max(a.a1.abs().maxCoeff(), a.a2.abs().maxCoeff()));
  const ArrayXd curl = fft::inverse_real(
      lat, ArrayXcd(Complex(0, 1) * (k1.cast<Complex>() * a2h -
                                     k2.cast<Complex>() * a1h)));
  CHECK(lat.cell_volume() * curl.abs().sum() > 0.1);

  CHECK_THROWS_AS(build_potential(lat, 30.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_potential(make_lattice(1, 64, 80.0), 4.0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("free-case equivalence to the exact propagator") {
  const auto lat = grid128();
  const double m = 1.0;
  const auto psi = make_bump_test_function(lat, 5.0, 1.0, 0.4, 2.0);
  const auto y0 = to_complex(RealFieldPair{lat, psi.psi0, psi.psi1});
  const auto a0 = build_potential(lat, 4.0, 0.0);

  const auto ym = magnetic_evolve(y0, a0, m, 10.0);
  const auto ye = evolve(y0, m, 10.0);
  const double scale = ye.u.abs().maxCoeff() + ye.v.abs().maxCoeff();
  CHECK((ym.u - ye.u).abs().maxCoeff() < 1e-8 * scale);
  CHECK((ym.v - ye.v).abs().maxCoeff() < 1e-8 * scale);
}

TEST_CASE("tracked evolution carries its bookkeeping") {
  const auto lat = grid128();
  const auto psi = make_bump_test_function(lat, 5.0, 0.5, 0.2, 2.0);
  const auto y0 = to_complex(RealFieldPair{lat, psi.psi0, psi.psi1});
  const auto a = build_potential(lat, 4.0, 0.3);
  const auto st = magnetic_evolve_tracked(y0, a, 1.0, 3.0);
  CHECK(st.time == 3.0);
  CHECK(st.steps == static_cast<std::int64_t>(std::ceil(3.0 / (0.2 * lat.spacing))));
  CHECK(st.dt * st.steps == doctest::Approx(3.0));
  const auto direct = magnetic_evolve(y0, a, 1.0, 3.0);
  CHECK((st.pair.u - direct.u).abs().maxCoeff() == 0.0);
}

TEST_CASE("gauge-covariant energy drift stays within budget") {
  const auto lat = grid128();
  const double m = 1.0;
  const auto psi = make_bump_test_function(lat, 5.0, 1.0, 0.4, 2.0);
  const auto y0 = to_complex(RealFieldPair{lat, psi.psi0, psi.psi1});
  const auto a = build_potential(lat, 4.0, 0.3);

  const double e0 = gauge_energy(y0, a, m);
  const auto yt = magnetic_evolve(y0, a, m, 30.0);
  CHECK(std::abs(gauge_energy(yt, a, m) - e0) < 1e-6 * e0);
}

TEST_CASE("finite propagation speed within 2 dx slack") {
  const auto lat = make_lattice(2, 128, 80.0);
  const double m = 1.0;
  // sharpness 4 keeps the band-limiting leakage below the threshold
  const auto psi = make_bump_test_function(lat, 8.0, 1.0, 0.4, 4.0);
  const auto y0 = to_complex(RealFieldPair{lat, psi.psi0, psi.psi1});
  const auto a = build_potential(lat, 4.0, 0.3);

  const double t = 25.0;
  const auto yt = magnetic_evolve(y0, a, m, t);
  CHECK(mass_fraction_outside(yt, t + 8.0 + 2 * lat.spacing) < 1e-8);
}

TEST_CASE("duality for the magnetic group") {
  const auto lat = grid128();
  const double m = 1.0;
  const auto a = build_potential(lat, 4.0, 0.3);
  const auto psi = make_bump_test_function(lat, 5.0, 0.7, 0.3, 2.0);

  // random smooth complex field (low-pass filtered noise); rough data
  // amplifies the aliasing of the perturbation products
  auto rng = make_engine(17, 0);
  ArrayXd wu(lat.size()), wv(lat.size());
  fill_normal(rng, wu);
  fill_normal(rng, wv);
  const ArrayXd lp = (-squared_wavenumber(lat) / 4.5).exp();
  ComplexFieldPair y;
  y.lattice = lat;
  y.u = fft::inverse(lat, ArrayXcd(lp.cast<Complex>() * fft::forward(lat, wu)));
  y.v = fft::inverse(lat, ArrayXcd(lp.cast<Complex>() * fft::forward(lat, wv)));

  const double t = 12.0;
  const auto yt = magnetic_evolve(y, a, m, t);
  const auto phit = magnetic_adjoint_evolve(
      to_complex(RealFieldPair{lat, psi.psi0, psi.psi1}), a, m, t);
  const double lhs = pairing(yt, to_complex(RealFieldPair{lat, psi.psi0,
                                                          psi.psi1}));
  const double rhs = pairing(y, phit);
  CHECK(std::abs(lhs - rhs) < 1e-4 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("local decay probe: free emptying and magnetic monotone decay") {
  const auto lat = make_lattice(2, 192, 120.0);
  const double m = 1.0;
  const auto psi = make_bump_test_function(lat, 4.0, 1.0, 0.4, 2.0);
  const double r0 = 3.5;
  const std::vector<double> ts{5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};

  const auto free_rec =
      local_decay_probe(psi, build_potential(lat, r0, 0.0), m, ts, r0);
  CHECK(free_rec.local_norm.back() < 0.2 * free_rec.local_norm.front());

  const auto mag_rec =
      local_decay_probe(psi, build_potential(lat, r0, 0.3), m, ts, r0);
  // 3-point moving average decreases across the window
  auto avg3 = [&](std::size_t i) {
    return (mag_rec.local_norm[i] + mag_rec.local_norm[i + 1] +
            mag_rec.local_norm[i + 2]) /
           3.0;
  };
  for (std::size_t i = 0; i + 5 < ts.size(); ++i)
    CHECK(avg3(i + 3) < avg3(i));
  // bounded ratio to the Vainberg rate over the window tail
  CHECK(mag_rec.ratio_max_over_min < 10.0);

  CHECK_THROWS_AS(
      local_decay_probe(psi, build_potential(lat, r0, 0.3), m, {80.0}, r0),
      std::invalid_argument);
}

TEST_CASE("cook wave operator: identity at zero potential, tail decay") {
  const auto lat = grid128();
  const double m = 1.0;
  const auto psi = make_bump_test_function(lat, 5.0, 0.35, 0.2, 2.0);

  const auto a0 = build_potential(lat, 4.0, 0.0);
  const auto cook0 = cook_wave_operator(psi, a0, m, 10.0, 1.0, {});
  CHECK((cook0.w_psi.u.real() - psi.psi0).abs().maxCoeff() < 1e-12);
  CHECK((cook0.w_psi.v.real() - psi.psi1).abs().maxCoeff() < 1e-12);
  CHECK(cook0.w_psi.u.imag().abs().maxCoeff() < 1e-12);
  for (double inc : cook0.increment_norms) CHECK(inc < 1e-14);

  const auto a = build_potential(lat, 4.0, 0.3);
  const auto cook = cook_wave_operator(psi, a, m, 30.0, 0.5, {7.0, 14.0, 28.0});
  // envelope decay of the oscillatory increments: windowed maxima
  double early = 0.0, late = 0.0;
  for (std::size_t i = 0; i < cook.times.size(); ++i) {
    if (cook.times[i] <= 6.0) early = std::max(early, cook.increment_norms[i]);
    if (cook.times[i] >= 24.0) late = std::max(late, cook.increment_norms[i]);
  }
  CHECK(late < 0.5 * early);
  // residuals decrease along T
  REQUIRE(cook.residual_norms.size() == 3);
  CHECK(cook.residual_norms[1] < cook.residual_norms[0]);
  CHECK(cook.residual_norms[2] < cook.residual_norms[1]);

  CHECK_THROWS_AS(cook_wave_operator(psi, a, m, 60.0, 0.5, {}),
                  std::invalid_argument);
}

TEST_CASE("theorem A: magnetic CLT matches the scattering prediction") {
  const auto lat = grid128();
  const double m = 1.0;
  // amplitudes tuned so Q_inf(W Psi, W Psi) is O(1)
  const auto psi = make_bump_test_function(lat, 5.0, 0.0224, 0.0128, 2.0);
  const auto meas = make_gaussian_measure(lat, m, 1.0, 1.0, 4.0);

  const auto a = build_potential(lat, 4.0, 0.3);
  const auto rep = theorem_a_experiment(meas, a, m, psi, 25.0, 800, 999, 30.0, 2);
  CHECK(rep.q_inf_wpsi > 0.5);
  CHECK(rep.q_inf_wpsi < 4.0);
  CHECK(rep.within_4se);

  // amplitude 0 reduces to the free (Theorem B) check with W = I
  const auto a0 = build_potential(lat, 4.0, 0.0);
  const auto rep0 =
      theorem_a_experiment(meas, a0, m, psi, 25.0, 800, 999, 30.0, 2);
  const auto disp = dispersion(lat, m);
  const double free_target = std::exp(
      -0.5 * quadratic_form_eval(limit_covariance(meas.spectral, disp), psi));
  CHECK(rep0.prediction == doctest::Approx(free_target).epsilon(1e-9));
  CHECK(rep0.within_4se);
}

TEST_CASE("counterexample keeps oscillating under the magnetic flow") {
  const auto lat = grid128();
  const double m = 1.0;
  const auto psi = make_bump_test_function(lat, 5.0, 0.5, 0.25, 2.0);
  const auto a = build_potential(lat, 4.0, 0.3);

  std::vector<double> ts;
  for (int i = 1; i <= 40; ++i) ts.push_back(25.0 * i / 40.0);
  const auto tr = magnetic_counterexample_trace(a, m, psi, ts);
  CHECK(tr.first_window_amplitude > 0.05);
  CHECK(tr.last_window_amplitude >= 0.5 * tr.first_window_amplitude);
}
