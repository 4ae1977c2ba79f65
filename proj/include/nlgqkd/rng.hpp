#ifndef NLGQKD_RNG_HPP
#define NLGQKD_RNG_HPP

#include <cstdint>
#include <random>

namespace nlgqkd::rng {

// splitmix64 step; used as a counter-based expander so one 64-bit seed
// yields independent, reproducible streams.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t derive(uint64_t seed, uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x2545f4914f6cdd1dull + 1));
}

class Stream {
 public:
  Stream(uint64_t seed, uint64_t stream) : gen_(derive(seed, stream)) {}

  uint64_t bits() { return gen_(); }
  // uniform double in [0,1); implementation-independent mapping
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  // unbiased uniform integer in [0, n), Lemire's multiply-shift with rejection
  uint64_t below(uint64_t n) {
    const uint64_t t = (-n) % n;
    while (true) {
      __uint128_t m = static_cast<__uint128_t>(gen_()) * n;
      if (static_cast<uint64_t>(m) >= t) return static_cast<uint64_t>(m >> 64);
    }
  }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nlgqkd::rng

#endif
