#include "kg/clt_verifier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kg/parallel.hpp"

namespace kg {

namespace {

void require_count(const SampleBatch& batch, int minimum, const char* op) {
  if (batch.count < minimum)
    throw std::invalid_argument(std::string(op) + ": insufficient samples");
}

// (1/N^n) sum_x a(x) b(x+z) for all lags z at once
ArrayXd lag_products(const LatticeSpec& lat, const ArrayXcd& ahat,
                     const ArrayXcd& bhat) {
  const ArrayXcd s = ahat.conjugate() * bhat / lat.box_volume();
  return fft::inverse(lat, s).real();
}

}  // namespace

std::vector<std::vector<double>> batch_pairings(const SampleBatch& batch,
                                                const TestFunction& psi,
                                                double mass) {
  const LatticeSpec& lat = psi.lattice;
  std::vector<TestFunction> phis;
  phis.reserve(batch.times.size());
  for (double t : batch.times) phis.push_back(adjoint_evolve(psi, mass, t));

  std::vector<std::vector<double>> out(batch.times.size(),
                                       std::vector<double>(batch.count));
  parallel_for(batch.count, batch.workers, [&](std::int64_t i) {
    const RealFieldPair y = sample_measure(batch.measure, batch.seed,
                                           static_cast<std::uint64_t>(i));
    for (std::size_t j = 0; j < phis.size(); ++j) {
      out[j][i] = lat.cell_volume() * ((y.u * phis[j].psi0).sum() +
                                       (y.v * phis[j].psi1).sum());
    }
  });
  return out;
}

CovarianceEstimate empirical_covariance(
    const SampleBatch& batch, double t, double mass,
    const std::vector<std::array<int, 3>>& lags) {
  require_count(batch, 100, "empirical_covariance");
  const LatticeSpec& lat = batch.measure.spectral.lattice;
  const auto g = propagator(dispersion(lat, mass), t);

  std::vector<std::int64_t> lag_flat;
  for (const auto& lag : lags) {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < lat.dim; ++a) {
      const int n = lat.points_per_axis;
      idx[a] = ((lag[a] % n) + n) % n;
    }
    lag_flat.push_back(lat.flatten(idx));
  }

  const std::size_t nl = lags.size();
  std::vector<std::vector<double>> v00(nl, std::vector<double>(batch.count)),
      v01(nl, std::vector<double>(batch.count)),
      v11(nl, std::vector<double>(batch.count));

  parallel_for(batch.count, batch.workers, [&](std::int64_t i) {
    const RealFieldPair y = sample_measure(batch.measure, batch.seed,
                                           static_cast<std::uint64_t>(i));
    ArrayXcd uhat = fft::forward(lat, y.u);
    ArrayXcd vhat = fft::forward(lat, y.v);
    if (t != 0.0) {
      const ArrayXcd u1 = g.cos_wt * uhat + g.sin_wt_ov * vhat;
      vhat = -g.w_sin_wt * uhat + g.cos_wt * vhat;
      uhat = u1;
    }
    const ArrayXd c00 = lag_products(lat, uhat, uhat);
    const ArrayXd c01 = lag_products(lat, uhat, vhat);
    const ArrayXd c11 = lag_products(lat, vhat, vhat);
    for (std::size_t l = 0; l < nl; ++l) {
      v00[l][i] = c00[lag_flat[l]];
      v01[l][i] = c01[lag_flat[l]];
      v11[l][i] = c11[lag_flat[l]];
    }
  });

  CovarianceEstimate est;
  est.lags = lags;
  for (std::size_t l = 0; l < nl; ++l) {
    const auto s00 = moment_stats(v00[l]);
    const auto s01 = moment_stats(v01[l]);
    const auto s11 = moment_stats(v11[l]);
    est.mean00.push_back(s00.mean);
    est.se00.push_back(s00.se_mean);
    est.mean01.push_back(s01.mean);
    est.se01.push_back(s01.se_mean);
    est.mean11.push_back(s11.mean);
    est.se11.push_back(s11.se_mean);
  }
  return est;
}

ComplexMeanStats empirical_char_functional(const SampleBatch& batch,
                                           const TestFunction& psi, double t,
                                           double mass) {
  require_count(batch, 1000, "empirical_char_functional");
  SampleBatch b = batch;
  b.times = {t};
  const auto pairings = batch_pairings(b, psi, mass);
  std::vector<Complex> zs(batch.count);
  for (int i = 0; i < batch.count; ++i)
    zs[i] = std::polar(1.0, pairings[0][i]);
  return complex_mean_stats(zs);
}

MomentStats gaussianity_diagnostics(const SampleBatch& batch,
                                    const TestFunction& psi, double t,
                                    double mass) {
  require_count(batch, 1000, "gaussianity_diagnostics");
  SampleBatch b = batch;
  b.times = {t};
  const auto pairings = batch_pairings(b, psi, mass);
  return moment_stats(pairings[0]);
}

RoomCorridorLayout make_asymptotic_layout(double t, double delta) {
  RoomCorridorLayout lay;
  lay.room_width = std::max(1.0, t / std::log(std::max(t, std::numbers::e)));
  lay.corridor_width = std::pow(std::max(t, 1.0), 1.0 - delta);
  return lay;
}

RoomCorridorReport room_corridor_decompose(const SampleBatch& batch,
                                           const TestFunction& psi, double t,
                                           double mass,
                                           const RoomCorridorLayout& layout) {
  const LatticeSpec& lat = psi.lattice;
  if (t + psi.support_radius >= lat.box_length / 2)
    throw std::invalid_argument(
        "room_corridor_decompose: window violated (t + r >= L/2)");
  if (layout.room_width < 1.0 || layout.corridor_width <= 0.0 ||
      layout.period() >= lat.box_length)
    throw std::invalid_argument("room_corridor_decompose: invalid layout");

  const TestFunction phi = adjoint_evolve(psi, mass, t);
  const double h = layout.period();
  const int jmin = static_cast<int>(std::floor((-lat.box_length / 2) / h));
  const int jmax = static_cast<int>(
      std::floor((lat.box_length / 2 - lat.spacing / 2) / h));
  const int nslab = jmax - jmin + 1;

  // slab ordinal and room/corridor flag per grid point (last axis)
  const ArrayXd xn = coordinate_array(lat, lat.dim - 1);
  std::vector<int> slab_of(lat.size());
  std::vector<char> in_room(lat.size());
  for (std::int64_t f = 0; f < lat.size(); ++f) {
    const int j = static_cast<int>(std::floor(xn[f] / h));
    slab_of[f] = j - jmin;
    in_room[f] = (xn[f] - j * h) < layout.room_width;
  }

  std::vector<std::vector<double>> rooms(nslab,
                                         std::vector<double>(batch.count)),
      corrs(nslab, std::vector<double>(batch.count));
  std::vector<double> recon_residual(batch.count);
  const int n_direct = std::min(batch.count, 8);
  std::vector<double> direct_residual(n_direct, 0.0);

  parallel_for(batch.count, batch.workers, [&](std::int64_t i) {
    const RealFieldPair y = sample_measure(batch.measure, batch.seed,
                                           static_cast<std::uint64_t>(i));
    const ArrayXd prod =
        lat.cell_volume() * (y.u * phi.psi0 + y.v * phi.psi1);
    std::vector<double> r(nslab, 0.0), c(nslab, 0.0);
    for (std::int64_t f = 0; f < lat.size(); ++f)
      (in_room[f] ? r[slab_of[f]] : c[slab_of[f]]) += prod[f];
    double total = 0.0;
    for (int s = 0; s < nslab; ++s) {
      rooms[s][i] = r[s];
      corrs[s][i] = c[s];
      total += r[s] + c[s];
    }
    const double adjoint_route = prod.sum();
    recon_residual[i] = std::abs(total - adjoint_route);
    if (i < n_direct)
      direct_residual[i] =
          std::abs(adjoint_route - pairing(evolve(y, mass, t), psi));
  });

  RoomCorridorReport rep;
  rep.layout = layout;
  rep.time = t;
  const double rbar = psi.support_radius;
  for (int s = 0; s < nslab; ++s) {
    SlabStats st;
    st.j = jmin + s;
    std::vector<double> rsq(batch.count), csq(batch.count);
    for (int i = 0; i < batch.count; ++i) {
      rsq[i] = rooms[s][i] * rooms[s][i];
      csq[i] = corrs[s][i] * corrs[s][i];
    }
    const auto mr = moment_stats(rsq);
    const auto mc = moment_stats(csq);
    st.room_mean_sq = mr.mean;
    st.room_se = mr.se_mean;
    st.corridor_mean_sq = mc.mean;
    st.corridor_se = mc.se_mean;
    st.outside_cone =
        (st.j * h - t > rbar) || ((st.j + 1) * h + t < -rbar);
    rep.slabs.push_back(st);
    rep.max_room_mean_sq = std::max(rep.max_room_mean_sq, st.room_mean_sq);
  }
  for (int i = 0; i < batch.count; ++i)
    rep.max_reconstruction_residual =
        std::max(rep.max_reconstruction_residual, recon_residual[i]);
  for (int i = 0; i < n_direct; ++i)
    rep.max_direct_route_residual =
        std::max(rep.max_direct_route_residual, direct_residual[i]);
  rep.direct_route_checked = n_direct;
  return rep;
}

DecayRecord decay_probe(const TestFunction& psi, double mass,
                        const std::vector<double>& t_list) {
  const LatticeSpec& lat = psi.lattice;
  DecayRecord rec;
  std::vector<double> logt, logsup;
  for (double t : t_list) {
    if (t + psi.support_radius >= lat.box_length / 2)
      throw std::invalid_argument("decay_probe: window violated");
    const TestFunction phi = adjoint_evolve(psi, mass, t);
    const double s0 = phi.psi0.abs().maxCoeff();
    const double s1 = phi.psi1.abs().maxCoeff();
    rec.times.push_back(t);
    rec.sup0.push_back(s0);
    rec.sup1.push_back(s1);
    logt.push_back(std::log(t));
    logsup.push_back(std::log(std::max(s0, s1)));
  }
  rec.slope = fit_line(logt, logsup).slope;
  return rec;
}

CounterexampleReport counterexample_demo(const LatticeSpec& lat, double mass,
                                         const TestFunction& psi,
                                         const std::vector<double>& t_list,
                                         int count, std::uint64_t seed) {
  CounterexampleReport rep;
  rep.period = 2.0 * std::numbers::pi / mass;
  const double a = lat.cell_volume() * psi.psi0.sum();
  const double b = lat.cell_volume() * psi.psi1.sum();

  std::vector<double> signs(count);
  for (int i = 0; i < count; ++i)
    signs[i] = counterexample_ensemble(lat, seed, i).u[0];

  for (double t : t_list) {
    const TestFunction phi = adjoint_evolve(psi, mass, t);
    const double theta = lat.cell_volume() * phi.psi0.sum();
    Complex mu(0.0, 0.0);
    for (int i = 0; i < count; ++i) mu += std::polar(1.0, signs[i] * theta);
    mu /= static_cast<double>(count);
    const double closed =
        std::cos(a * std::cos(mass * t) - mass * b * std::sin(mass * t));
    rep.times.push_back(t);
    rep.mu_hat.push_back(mu);
    rep.closed_form.push_back(closed);
    rep.max_abs_error =
        std::max(rep.max_abs_error, std::abs(mu.real() - closed));
  }

  // oscillation amplitude over the first and last full period in the trace
  auto amplitude_in = [&](double lo, double hi) {
    double mn = 1.0, mx = -1.0;
    bool seen = false;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
      if (rep.times[i] < lo || rep.times[i] > hi) continue;
      mn = std::min(mn, rep.mu_hat[i].real());
      mx = std::max(mx, rep.mu_hat[i].real());
      seen = true;
    }
    return seen ? mx - mn : 0.0;
  };
  if (!rep.times.empty()) {
    const double t0 = rep.times.front(), t1 = rep.times.back();
    rep.first_period_amplitude = amplitude_in(t0, t0 + rep.period);
    rep.last_period_amplitude = amplitude_in(t1 - rep.period, t1);
  }
  return rep;
}

}  // namespace kg
