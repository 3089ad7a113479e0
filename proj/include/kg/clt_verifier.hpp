#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kg/covariance_engine.hpp"
#include "kg/random_fields.hpp"
#include "kg/stats.hpp"

namespace kg {

/// Reproducible Monte Carlo batch: sample i is fully determined by
/// (measure, seed, i). Sampling and pairing parallelize over samples;
/// aggregation order is fixed, so results do not depend on scheduling.
struct SampleBatch {
  MeasureSpec measure;
  int count = 0;
  std::uint64_t seed = 0;
  std::vector<double> times;
  int workers = 0;
};

/// Per-sample pairings <Y(t), Psi> = <Y_0, adjoint_evolve(Psi, t)> for every
/// time in the batch; result[time_index][sample_index].
std::vector<std::vector<double>> batch_pairings(const SampleBatch& batch,
                                                const TestFunction& psi,
                                                double mass);

/// Covariance estimates at integer lattice lags, averaged over samples and
/// translations.
struct CovarianceEstimate {
  std::vector<std::array<int, 3>> lags;
  std::vector<double> mean00, se00, mean01, se01, mean11, se11;
};

CovarianceEstimate empirical_covariance(
    const SampleBatch& batch, double t, double mass,
    const std::vector<std::array<int, 3>>& lags);

/// Sample mean of exp(i <Y(t), Psi>) with its standard error.
ComplexMeanStats empirical_char_functional(const SampleBatch& batch,
                                           const TestFunction& psi, double t,
                                           double mass);

/// Moments of the scalar <Y(t), Psi>.
MomentStats gaussianity_diagnostics(const SampleBatch& batch,
                                    const TestFunction& psi, double t,
                                    double mass);

/// Bernstein room-corridor partition along the last axis: rooms [jh, jh+d),
/// corridors [jh+d, (j+1)h), h = d + rho, half-open on grid coordinates so
/// the partition is exact on the lattice.
struct RoomCorridorLayout {
  double room_width = 1.0;     // d >= 1
  double corridor_width = 0.5; // rho > 0
  double period() const { return room_width + corridor_width; }
};

/// Asymptotic widths d_t ~ t/ln t, rho_t ~ t^(1-delta); at desk scales the
/// corridor can exceed the room, which is why layouts are also caller
/// specifiable.
RoomCorridorLayout make_asymptotic_layout(double t, double delta = 0.25);

struct SlabStats {
  int j = 0;
  double room_mean_sq = 0.0, room_se = 0.0;
  double corridor_mean_sq = 0.0, corridor_se = 0.0;
  bool outside_cone = false;  // jh - t > r or (j+1)h + t < -r
};

struct RoomCorridorReport {
  RoomCorridorLayout layout;
  double time = 0.0;
  std::vector<SlabStats> slabs;
  double max_room_mean_sq = 0.0;
  /// max residual | sum_j (r_j + c_j) - <Y_0, Phi_t> | over samples
  double max_reconstruction_residual = 0.0;
  /// max residual against the direct-route pairing <evolve(Y,t), Psi> over
  /// the first few samples
  double max_direct_route_residual = 0.0;
  int direct_route_checked = 0;
};

RoomCorridorReport room_corridor_decompose(const SampleBatch& batch,
                                           const TestFunction& psi, double t,
                                           double mass,
                                           const RoomCorridorLayout& layout);

/// Sup-norm decay of the adjoint-evolved pair with a log-log slope fit.
struct DecayRecord {
  std::vector<double> times;
  std::vector<double> sup0, sup1;
  double slope = 0.0;  // fit of log max(sup0, sup1) vs log t
};

DecayRecord decay_probe(const TestFunction& psi, double mass,
                        const std::vector<double>& t_list);

/// Characteristic functional trace of the non-mixing ensemble, with the
/// constant-mode closed form cos(A cos mt - m B sin mt).
struct CounterexampleReport {
  std::vector<double> times;
  std::vector<Complex> mu_hat;       // empirical, machinery route
  std::vector<double> closed_form;   // cos(A cos mt - m B sin mt)
  double max_abs_error = 0.0;        // |Re mu_hat - closed form|
  double period = 0.0;               // 2 pi / m
  double first_period_amplitude = 0.0;
  double last_period_amplitude = 0.0;
};

CounterexampleReport counterexample_demo(const LatticeSpec& lat, double mass,
                                         const TestFunction& psi,
                                         const std::vector<double>& t_list,
                                         int count, std::uint64_t seed = 1);

}  // namespace kg
