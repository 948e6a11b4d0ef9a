#pragma once

#include <cstdint>

namespace axrec {

std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent stream seed from a base seed and a stream index.
/// Stable across platforms; used so per-sample generation is order-free.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// xoshiro256++ with hand-rolled normal and Poisson samplers. All draws are
/// deterministic functions of the seed, independent of the C++ standard
/// library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform01();
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n), n >= 1.
    std::uint64_t uniform_int(std::uint64_t n);
    /// Standard normal (Marsaglia polar, cached pair).
    double normal();
    double normal(double mean, double stddev);
    /// Poisson with mean lambda >= 0. Exact (inversion / PTRS) below 1e8,
    /// normal approximation above.
    std::uint64_t poisson(double lambda);

  private:
    std::uint64_t s_[4];
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

} // namespace axrec
