#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace kg {

/// Engine seeded deterministically by (seed, stream index); identical
/// arguments yield bit-identical draw sequences.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq sq{static_cast<std::uint32_t>(seed),
                   static_cast<std::uint32_t>(seed >> 32),
                   static_cast<std::uint32_t>(index),
                   static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(sq);
}

inline void fill_normal(std::mt19937_64& rng, Eigen::ArrayXd& out) {
  std::normal_distribution<double> n01;
  for (auto& x : out) x = n01(rng);
}

}  // namespace kg
