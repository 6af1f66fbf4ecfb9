#pragma once

#include <cstdint>
#include <random>

namespace symclu {

/// Stateless seed derivation (splitmix64 finalizer over base + stream).
/// A master seed fans out to per-repetition and per-spectral-run sub-seeds
/// through this one function, so runs can be paired across modes and grids.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// mt19937_64 plus bit-stable real helpers. The engine output sequence is
/// pinned by the standard; std::uniform_real_distribution and
/// std::normal_distribution are not, so the mappings are done by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform();

  /// Standard normal via Box-Muller.
  double normal();

  /// Uniform integer in {0, ..., n-1}, n >= 1.
  int uniform_int(int n);

 private:
  std::mt19937_64 gen_;
};

}  // namespace symclu
