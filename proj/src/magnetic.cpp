#include "kg/magnetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "kg/parallel.hpp"

namespace kg {

MagneticPotential build_potential(const LatticeSpec& lat, double r0,
                                  double amplitude) {
  if (lat.dim != 2)
    throw std::invalid_argument("build_potential: potential lives on n = 2");
  if (!(r0 > 0.0) || r0 >= lat.box_length / 4)
    throw std::invalid_argument("build_potential: need 0 < R0 < L/4");
  if (amplitude < 0.0)
    throw std::invalid_argument("build_potential: amplitude < 0");

  MagneticPotential a;
  a.lattice = lat;
  a.support_radius = r0;
  a.amplitude = amplitude;
  const std::int64_t n = lat.size();
  a.a1 = ArrayXd::Zero(n);
  a.a2 = ArrayXd::Zero(n);
  for (std::int64_t f = 0; f < n; ++f) {
    const auto idx = lat.decompose(f);
    const double x1 = lat.axis_coords[idx[0]];
    const double x2 = lat.axis_coords[idx[1]];
    const double s2 = (x1 * x1 + x2 * x2) / (r0 * r0);
    if (s2 < 1.0) {
      const double bump = amplitude * std::exp(-1.0 / (1.0 - s2));
      a.a1[f] = -x2 * bump;
      a.a2[f] = x1 * bump;
    }
  }
  a.a_sq = a.a1.square() + a.a2.square();
  // the rotational family is divergence-free; the exact value avoids
  // injecting spectral-derivative aliasing into the stepping term
  a.div_a = ArrayXd::Zero(n);
  return a;
}

namespace {

// spectral state of the pair and the per-mode free propagator pieces
struct SpectralState {
  ArrayXcd uhat, vhat;
};

struct FreeRotation {
  ArrayXd c, s_ov, ws;  // cos(w tau), sin(w tau)/w, w sin(w tau)
};

FreeRotation make_rotation(const Dispersion& disp, double tau) {
  const auto g = propagator(disp, tau);
  return FreeRotation{g.cos_wt, g.sin_wt_ov, g.w_sin_wt};
}

void rotate(const FreeRotation& r, SpectralState& y) {
  const ArrayXcd u1 = r.c * y.uhat + r.s_ov * y.vhat;
  y.vhat = -r.ws * y.uhat + r.c * y.vhat;
  y.uhat = u1;
}

// magnetic perturbation in spectral form: N(u,v) = (0, what) with
// w = -2i (A1 d1 u + A2 d2 u) - (i div A + |A|^2) u
// TODO: 3/2-rule dealiasing of the A*du products would lower the
// gauge-energy drift floor below its current ~2e-7
class Perturbation {
 public:
  Perturbation(const MagneticPotential& a)
      : a_(a),
        k1_(wavenumber_array(a.lattice, 0)),
        k2_(wavenumber_array(a.lattice, 1)) {}

  ArrayXcd eval(const ArrayXcd& uhat) const {
    const LatticeSpec& lat = a_.lattice;
    const ArrayXcd u = fft::inverse(lat, uhat);
    const ArrayXcd d1 =
        fft::inverse(lat, ArrayXcd(Complex(0, 1) * k1_.cast<Complex>() * uhat));
    const ArrayXcd d2 =
        fft::inverse(lat, ArrayXcd(Complex(0, 1) * k2_.cast<Complex>() * uhat));
    const ArrayXcd w =
        Complex(0, -2) * (a_.a1.cast<Complex>() * d1 + a_.a2.cast<Complex>() * d2) -
        (Complex(0, 1) * a_.div_a.cast<Complex>() + a_.a_sq.cast<Complex>()) * u;
    return fft::forward(lat, w);
  }

 private:
  const MagneticPotential& a_;
  ArrayXd k1_, k2_;
};

// one Lawson (integrating factor) classical RK4 step of size dt
void lawson_step(SpectralState& y, const Perturbation& pert,
                 const FreeRotation& half, double dt) {
  // stage derivatives are pairs (0, w); rotating such a pair by tau gives
  // (sin(w tau)/w * w, cos(w tau) * w)
  const ArrayXcd k1 = pert.eval(y.uhat);

  SpectralState ey = y;
  rotate(half, ey);
  const ArrayXcd e_k1_u = half.s_ov * k1;
  const ArrayXcd e_k1_v = half.c * k1;

  SpectralState s2{ey.uhat + 0.5 * dt * e_k1_u, ey.vhat + 0.5 * dt * e_k1_v};
  const ArrayXcd k2 = pert.eval(s2.uhat);

  // stage 3 input E y_n + dt/2 k2; k2 is already a half-step quantity
  SpectralState s3{ey.uhat, ey.vhat + 0.5 * dt * k2};
  const ArrayXcd k3 = pert.eval(s3.uhat);

  SpectralState eey = ey;
  rotate(half, eey);
  const ArrayXcd e_k3_u = half.s_ov * k3;
  const ArrayXcd e_k3_v = half.c * k3;
  SpectralState s4{eey.uhat + dt * e_k3_u, eey.vhat + dt * e_k3_v};
  const ArrayXcd k4 = pert.eval(s4.uhat);

  // y_{n+1} = E^2 y + dt/6 (E^2 k1 + 2 E k2 + 2 E k3 + k4)
  SpectralState out = y;
  rotate(half, out);
  rotate(half, out);
  const ArrayXcd full_s = half.s_ov * half.c * 2.0;   // sin(w dt)/w
  const ArrayXcd full_c = half.c.square() - half.s_ov * half.ws;  // cos(w dt)
  out.uhat += dt / 6.0 *
              (full_s * k1 + 2.0 * (half.s_ov * k2) + 2.0 * (half.s_ov * k3));
  out.vhat += dt / 6.0 *
              (full_c * k1 + 2.0 * (half.c * k2) + 2.0 * (half.c * k3) + k4);
  y = out;
}

SpectralState to_spectral(const ComplexFieldPair& y) {
  return SpectralState{fft::forward(y.lattice, ArrayXcd(y.u)),
                       fft::forward(y.lattice, ArrayXcd(y.v))};
}

ComplexFieldPair from_spectral(const LatticeSpec& lat,
                               const SpectralState& s) {
  ComplexFieldPair y;
  y.lattice = lat;
  y.u = fft::inverse(lat, s.uhat);
  y.v = fft::inverse(lat, s.vhat);
  return y;
}

}  // namespace

std::vector<ComplexFieldPair> magnetic_evolve_multi(
    const ComplexFieldPair& y0, const MagneticPotential& a, double m,
    const std::vector<double>& times, double dt_factor) {
  const LatticeSpec& lat = y0.lattice;
  if (!lat.same_grid(a.lattice))
    throw std::invalid_argument("magnetic_evolve: lattice mismatch");
  if (!(m > 0.0)) throw std::invalid_argument("magnetic_evolve: m <= 0");
  if (!(dt_factor > 0.0) || dt_factor > 0.5)
    throw std::invalid_argument(
        "magnetic_evolve: dt_factor outside the stable range (0, 0.5]");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw std::invalid_argument("magnetic_evolve: times must increase");

  const auto disp = dispersion(lat, m);
  const Perturbation pert(a);
  const double dt_nominal = dt_factor * lat.spacing;

  SpectralState y = to_spectral(y0);
  std::vector<ComplexFieldPair> out;
  double t_now = 0.0;
  for (double target : times) {
    const double span = target - t_now;
    if (span > 0.0) {
      const int steps = std::max(1, static_cast<int>(std::ceil(span / dt_nominal)));
      const double dt = span / steps;
      const auto half = make_rotation(disp, dt / 2.0);
      for (int s = 0; s < steps; ++s) lawson_step(y, pert, half, dt);
      t_now = target;
    }
    out.push_back(from_spectral(lat, y));
  }
  return out;
}

ComplexFieldPair magnetic_evolve(const ComplexFieldPair& y0,
                                 const MagneticPotential& a, double m,
                                 double t, double dt_factor) {
  if (t == 0.0) return y0;
  return magnetic_evolve_multi(y0, a, m, {t}, dt_factor).front();
}

MagneticState magnetic_evolve_tracked(const ComplexFieldPair& y0,
                                      const MagneticPotential& a, double m,
                                      double t, double dt_factor) {
  MagneticState st;
  st.pair = magnetic_evolve(y0, a, m, t, dt_factor);
  st.time = t;
  const double dt_nominal = dt_factor * y0.lattice.spacing;
  st.steps = t > 0.0
                 ? std::max<std::int64_t>(
                       1, static_cast<std::int64_t>(std::ceil(t / dt_nominal)))
                 : 0;
  st.dt = st.steps > 0 ? t / st.steps : 0.0;
  return st;
}

namespace {
ComplexFieldPair swap_pair(const ComplexFieldPair& p) {
  ComplexFieldPair q;
  q.lattice = p.lattice;
  q.u = p.v;
  q.v = p.u;
  return q;
}
}  // namespace

ComplexFieldPair magnetic_adjoint_evolve(const ComplexFieldPair& psi,
                                         const MagneticPotential& a, double m,
                                         double t, double dt_factor) {
  // U'(t) Psi = (psidot, psi), psi solving the primal equation with data
  // (Psi1, Psi0): swap, evolve, swap back
  return swap_pair(magnetic_evolve(swap_pair(psi), a, m, t, dt_factor));
}

std::vector<ComplexFieldPair> magnetic_adjoint_evolve_multi(
    const ComplexFieldPair& psi, const MagneticPotential& a, double m,
    const std::vector<double>& times, double dt_factor) {
  auto states = magnetic_evolve_multi(swap_pair(psi), a, m, times, dt_factor);
  for (auto& s : states) s = swap_pair(s);
  return states;
}

double gauge_energy(const ComplexFieldPair& y, const MagneticPotential& a,
                    double m) {
  const LatticeSpec& lat = y.lattice;
  const ArrayXcd uhat = fft::forward(lat, ArrayXcd(y.u));
  const ArrayXd k1 = wavenumber_array(lat, 0);
  const ArrayXd k2 = wavenumber_array(lat, 1);
  const ArrayXcd d1 =
      fft::inverse(lat, ArrayXcd(Complex(0, 1) * k1.cast<Complex>() * uhat));
  const ArrayXcd d2 =
      fft::inverse(lat, ArrayXcd(Complex(0, 1) * k2.cast<Complex>() * uhat));
  const ArrayXcd g1 = d1 - Complex(0, 1) * a.a1.cast<Complex>() * y.u;
  const ArrayXcd g2 = d2 - Complex(0, 1) * a.a2.cast<Complex>() * y.u;
  return lat.cell_volume() *
         (y.v.abs2() + g1.abs2() + g2.abs2() + m * m * y.u.abs2()).sum();
}

MagneticDecayRecord local_decay_probe(const TestFunction& psi,
                                      const MagneticPotential& a, double m,
                                      const std::vector<double>& t_list,
                                      double r0, double dt_factor) {
  const LatticeSpec& lat = psi.lattice;
  for (double t : t_list)
    if (t + psi.support_radius + a.support_radius >= lat.box_length / 2)
      throw std::invalid_argument("local_decay_probe: window violated");

  const auto states =
      magnetic_adjoint_evolve_multi(to_complex(RealFieldPair{lat, psi.psi0,
                                                             psi.psi1}),
                                    a, m, t_list, dt_factor);
  MagneticDecayRecord rec;
  double rmax = 0.0, rmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    rec.times.push_back(t_list[i]);
    rec.local_norm.push_back(local_pair_seminorm(states[i], r0));
    rec.eps.push_back(vainberg_eps(t_list[i]));
    if (i >= t_list.size() / 2) {
      const double ratio = rec.local_norm[i] / rec.eps[i];
      rmax = std::max(rmax, ratio);
      rmin = std::min(rmin, ratio);
    }
  }
  rec.ratio_max_over_min = rmin > 0.0 ? rmax / rmin : 0.0;
  return rec;
}

CookResult cook_wave_operator(const TestFunction& psi,
                              const MagneticPotential& a, double m,
                              double t_max, double dt_quad,
                              const std::vector<double>& residual_times,
                              double dt_factor) {
  const LatticeSpec& lat = psi.lattice;
  if (t_max + psi.support_radius + a.support_radius >= lat.box_length / 2)
    throw std::invalid_argument("cook_wave_operator: window violated");

  const auto disp = dispersion(lat, m);
  const Perturbation pert(a);
  const double dt_nominal = dt_factor * lat.spacing;
  const int steps_per_node =
      dt_quad > 0.0
          ? std::max(1, static_cast<int>(std::round(dt_quad / dt_nominal)))
          : 1;
  const int nodes = std::max(
      1, static_cast<int>(std::ceil(t_max / (steps_per_node * dt_nominal))));
  const double dt = t_max / (nodes * steps_per_node);
  const double node_dt = dt * steps_per_node;

  // march the primal system with swapped data (adjoint trick); P1 of the
  // adjoint pair U'(t)Psi is the primal u(t)
  SpectralState y =
      to_spectral(to_complex(RealFieldPair{lat, psi.psi1, psi.psi0}));
  const auto half = make_rotation(disp, dt / 2.0);

  CookResult res;
  SpectralState acc{ArrayXcd::Zero(lat.size()), ArrayXcd::Zero(lat.size())};

  const ArrayXd kk = squared_wavenumber(lat);
  auto h_norm_spec = [&](const ArrayXcd& p0, const ArrayXcd& p1) {
    return std::sqrt((p0.abs2() + (1.0 + kk) * p1.abs2()).sum() /
                     lat.box_volume());
  };

  // integrand g(t) = U0'(-t) D U'(t) Psi with D(P) = (L P1, 0):
  // G_{-t}^T = [[cos wt, w sin wt], [-sin wt / w, cos wt]] applied to (Lu, 0)
  auto integrand = [&](double t, const SpectralState& state, ArrayXcd& g0,
                       ArrayXcd& g1) {
    const ArrayXcd lw = pert.eval(state.uhat);
    const ArrayXd wt = disp.omega * t;
    g0 = wt.cos() * lw;
    g1 = -(wt.sin() / disp.omega) * lw;
  };

  std::vector<std::pair<SpectralState, double>> snapshots;
  std::vector<double> sorted_res = residual_times;
  std::sort(sorted_res.begin(), sorted_res.end());
  std::size_t next_residual = 0;

  ArrayXcd g0(lat.size()), g1(lat.size());
  integrand(0.0, y, g0, g1);
  acc.uhat += 0.5 * node_dt * g0;
  acc.vhat += 0.5 * node_dt * g1;
  res.times.push_back(0.0);
  res.increment_norms.push_back(h_norm_spec(g0, g1) * node_dt);

  for (int nd = 1; nd <= nodes; ++nd) {
    for (int s = 0; s < steps_per_node; ++s) lawson_step(y, pert, half, dt);
    const double t_now = nd * node_dt;
    integrand(t_now, y, g0, g1);
    const double wgt = (nd == nodes) ? 0.5 : 1.0;
    acc.uhat += wgt * node_dt * g0;
    acc.vhat += wgt * node_dt * g1;
    res.times.push_back(t_now);
    res.increment_norms.push_back(h_norm_spec(g0, g1) * node_dt);

    while (next_residual < sorted_res.size() &&
           sorted_res[next_residual] <= t_now + 0.5 * node_dt) {
      snapshots.push_back({y, t_now});
      ++next_residual;
    }
  }

  // W Psi = Psi + integral, in the adjoint (P0, P1) component order
  SpectralState w =
      to_spectral(to_complex(RealFieldPair{lat, psi.psi0, psi.psi1}));
  w.uhat += acc.uhat;
  w.vhat += acc.vhat;
  res.w_psi = from_spectral(lat, w);

  // residuals || U'(T)Psi - U0'(T) W Psi ||_H at the snapshot times
  for (const auto& [snap, t] : snapshots) {
    const ArrayXd wt = disp.omega * t;
    const ArrayXd c = wt.cos();
    const ArrayXd s = wt.sin();
    // U0'(T) W: G_T^T = [[c, -w s], [s/w, c]]
    const ArrayXcd f0 = c * w.uhat - (disp.omega * s) * w.vhat;
    const ArrayXcd f1 = (s / disp.omega) * w.uhat + c * w.vhat;
    res.residual_times.push_back(t);
    // adjoint state at t is the swapped primal snapshot (v, u)
    res.residual_norms.push_back(h_norm_spec(snap.vhat - f0, snap.uhat - f1));
  }
  return res;
}

TheoremAReport theorem_a_experiment(const MeasureSpec& measure,
                                    const MagneticPotential& a, double m,
                                    const TestFunction& psi, double t,
                                    int count, std::uint64_t seed,
                                    double w_t_max, int workers,
                                    double dt_factor) {
  const LatticeSpec& lat = psi.lattice;
  if (count < 100)
    throw std::invalid_argument("theorem_a_experiment: insufficient samples");
  if (t + psi.support_radius + a.support_radius >= lat.box_length / 2)
    throw std::invalid_argument("theorem_a_experiment: window violated");

  // one magnetic adjoint evolution serves every sample
  const ComplexFieldPair phi = magnetic_adjoint_evolve(
      to_complex(RealFieldPair{lat, psi.psi0, psi.psi1}), a, m, t, dt_factor);

  std::vector<Complex> zs(count);
  parallel_for(count, workers, [&](std::int64_t i) {
    const RealFieldPair y =
        sample_measure(measure, seed, static_cast<std::uint64_t>(i));
    zs[i] = std::polar(1.0, pairing(y, phi));
  });

  TheoremAReport rep;
  rep.mu_hat = complex_mean_stats(zs);

  const auto cook = cook_wave_operator(psi, a, m, w_t_max, 0.0, {}, dt_factor);
  TestFunction re_w;
  re_w.lattice = lat;
  re_w.psi0 = cook.w_psi.u.real();
  re_w.psi1 = cook.w_psi.v.real();
  re_w.support_radius = psi.support_radius + a.support_radius;
  const auto disp = dispersion(lat, m);
  // the initial measure is real-valued, so only the real part of W Psi
  // enters the limiting variance
  rep.q_inf_wpsi =
      quadratic_form_eval(limit_covariance(measure.spectral, disp), re_w);
  rep.prediction = std::exp(-0.5 * rep.q_inf_wpsi);
  rep.distance = std::abs(rep.mu_hat.mean - rep.prediction);
  rep.within_4se = rep.distance < 4.0 * rep.mu_hat.se;
  return rep;
}

MagneticCounterexampleTrace magnetic_counterexample_trace(
    const MagneticPotential& a, double m, const TestFunction& psi,
    const std::vector<double>& t_list, double dt_factor) {
  const LatticeSpec& lat = psi.lattice;
  MagneticCounterexampleTrace tr;
  const auto states = magnetic_adjoint_evolve_multi(
      to_complex(RealFieldPair{lat, psi.psi0, psi.psi1}), a, m, t_list,
      dt_factor);
  RealFieldPair ones;
  ones.lattice = lat;
  ones.u = ArrayXd::Ones(lat.size());
  ones.v = ArrayXd::Zero(lat.size());
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    tr.times.push_back(t_list[i]);
    tr.mu_re.push_back(std::cos(pairing(ones, states[i])));
  }
  if (!tr.times.empty()) {
    const double span = tr.times.back() - tr.times.front();
    const double window = span / 4.0;
    auto amp_in = [&](double lo, double hi) {
      double mn = 2.0, mx = -2.0;
      for (std::size_t i = 0; i < tr.times.size(); ++i) {
        if (tr.times[i] < lo || tr.times[i] > hi) continue;
        mn = std::min(mn, tr.mu_re[i]);
        mx = std::max(mx, tr.mu_re[i]);
      }
      return mx > mn ? mx - mn : 0.0;
    };
    tr.first_window_amplitude =
        amp_in(tr.times.front(), tr.times.front() + window);
    tr.last_window_amplitude = amp_in(tr.times.back() - window, tr.times.back());
  }
  return tr;
}

}  // namespace kg
