#include "bondsim/rng.hpp"

#include <cmath>

#include "bondsim/errors.hpp"

namespace bondsim {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::seed_seq make_seed_seq(std::uint64_t master_seed, StreamKind kind, std::uint64_t index) {
  std::uint64_t state = master_seed;
  const std::uint64_t a = splitmix64(state);
  state ^= static_cast<std::uint64_t>(kind) * 0xD1B54A32D192ED03ULL;
  const std::uint64_t b = splitmix64(state);
  state ^= index * 0x8CB92BA72F3D8DD7ULL;
  const std::uint64_t c = splitmix64(state);
  const std::uint64_t d = splitmix64(state);
  return std::seed_seq{
      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
      static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
}

}  // namespace

RandomStream::RandomStream(std::uint64_t master_seed, StreamKind kind, std::uint64_t index) {
  auto seq = make_seed_seq(master_seed, kind, index);
  engine_.seed(seq);
}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::exponential(double rate) {
  if (!(rate > 0.0)) throw ContractViolation("exponential rate must be positive");
  for (;;) {
    const double u = uniform();
    if (u == 0.0) continue;
    const double x = -std::log(u) / rate;
    if (x > 0.0) return x;
  }
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) throw ContractViolation("below(0)");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n);
  for (;;) {
    const std::uint64_t x = engine_();
    if (x < limit) return x % n;
  }
}

}  // namespace bondsim
