#include "cupgame/random.hpp"

#include <stdexcept>

namespace cupgame {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty sampling range");
  // rejection on the top multiple of bound
  std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % bound + 1) % bound;
  while (true) {
    std::uint64_t v = next();
    if (v <= limit) return v % bound;
  }
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("empty sampling range");
  return lo + std::int64_t(below(std::uint64_t(hi - lo) + 1));
}

}  // namespace cupgame
