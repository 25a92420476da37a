// Reproducible random streams for the counting simulation.
//
// Stream rule: every scan point gets its own generator, seeded as
//   stream_seed(master, index) = splitmix64(master XOR golden * (index + 1))
// with golden = 0x9E3779B97F4A7C15. Streams are therefore independent of
// evaluation order, which is what allows scans to run in parallel with
// results identical to the serial loop.
//
// The generator is std::mt19937_64 (bit-exact across platforms). Variates
// are drawn by our own samplers rather than std::*_distribution so the
// produced counts are bit-stable everywhere: uniforms take the top 53 bits,
// Poisson uses sequential inversion below mean 60 and the PTRS transformed
// rejection above, normals use Box-Muller.

#pragma once

#include <cstdint>
#include <random>

namespace phasebench {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the per-point stream derived from a master seed.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

class CountingRng {
  public:
    explicit CountingRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

    /// Poisson variate with the given mean (mean <= 0 returns 0).
    std::uint64_t poisson(double mean);

    /// Standard normal variate (Box-Muller).
    double normal();

  private:
    std::uint64_t poisson_inversion(double mean);
    std::uint64_t poisson_ptrs(double mean);

    std::mt19937_64 gen_;
};

}  // namespace phasebench
