#pragma once

#include <cstdint>
#include <complex>

namespace qsat {

// Counter-based generator: every draw is splitmix64 applied to an explicit
// (seed, counter) pair, so streams are reproducible across platforms and may
// be split per trial / per edge without sharing state.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  // Derive an independent stream (e.g. one per Monte-Carlo trial).
  CounterRng derive(uint64_t stream) const {
    return CounterRng(splitmix64(seed_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
  }

  uint64_t next_u64() { return splitmix64(seed_ ^ counter_++); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; consumes two draws.
  double next_normal() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  std::complex<double> next_complex_normal() {
    return {next_normal(), next_normal()};
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

}  // namespace qsat
