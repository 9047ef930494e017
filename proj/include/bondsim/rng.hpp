#pragma once

#include <cstdint>
#include <random>

namespace bondsim {

// Substream families. Each family is keyed by an index so that, e.g.,
// channel 7's timeline does not depend on how many channels exist.
enum class StreamKind : std::uint64_t {
  kChannel = 1,
  kSensing = 2,
  kScheme = 3,
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic random stream derived from (master seed, kind, index).
///
/// Sampling is done by hand on top of mt19937_64 rather than through the
/// <random> distributions, whose output is implementation-defined.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, StreamKind kind, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  // Exponential with the given rate; strictly positive.
  double exponential(double rate);

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bondsim
