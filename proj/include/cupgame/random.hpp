#pragma once

#include <cstdint>
#include <random>

namespace cupgame {

std::uint64_t splitmix64(std::uint64_t x);

// Seeded generator with platform-independent bounded draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(splitmix64(seed)) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  std::int64_t between(std::int64_t lo, std::int64_t hi);  // inclusive
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Independent seed for the i-th run of a seeded batch.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) {
  return splitmix64(seed ^ splitmix64(i + 0x632BE59BD9B4E019ULL));
}

}  // namespace cupgame
