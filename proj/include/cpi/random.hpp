#pragma once

#include <cmath>
#include <cstdint>

namespace cpi {

// Counter-based randomness. Every Poisson stream is addressed by a key built
// from (seed, stream kind, site, displacement); the k-th draw of a stream is a
// pure function of (key, k), so windows and replicas compose reproducibly.

enum class StreamKind : std::uint64_t {
  kDeath = 1,
  kArrow = 2,
  kPercolation = 3,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t stream_key(std::uint64_t seed, StreamKind kind, std::int64_t a,
                                          std::int64_t b = 0) {
  std::uint64_t h = splitmix64(seed ^ 0x2545f4914f6cdd1dULL);
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  h = splitmix64(h ^ static_cast<std::uint64_t>(a));
  h = splitmix64(h ^ static_cast<std::uint64_t>(b));
  return h;
}

class CounterStream {
 public:
  explicit constexpr CounterStream(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t next_u64() { return splitmix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

  // Uniform on (0, 1]; never returns 0 so log() is always finite.
  double next_unit() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  double next_exponential(double rate) { return -std::log(next_unit()) / rate; }

  bool next_bernoulli(double p) { return next_unit() <= p; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cpi
