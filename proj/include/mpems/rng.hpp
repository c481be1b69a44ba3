#pragma once

#include <array>
#include <cstdint>

namespace mpems {

// Philox-4x32-10 counter-based generator (Salmon et al., SC'11).
// Every draw is addressed by (key, counter) alone, so any word of the
// stream can be produced independently of all others. This is what makes
// seeded runs reproducible no matter how work is scheduled across threads.
struct Philox4x32 {
  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> counter,
                                       std::array<uint32_t, 2> key);
};

// Two uniform doubles in [0,1) for the address (seed | a, b, c, stream).
std::array<double, 2> uniform_pair(uint64_t seed, uint32_t a, uint32_t b,
                                   uint32_t c, uint32_t stream);

// Sequential view over one counter stream, for sampling code that just
// wants "the next draw".
class CounterRng {
 public:
  CounterRng(uint64_t seed, uint32_t stream) : seed_(seed), stream_(stream) {}

  double next_double(); // uniform [0,1)

  // Uniform integer in [0,n); n must be > 0.
  uint32_t next_below(uint32_t n);

 private:
  uint64_t seed_;
  uint32_t stream_;
  uint64_t counter_ = 0;
  std::array<double, 2> buffer_{};
  int buffered_ = 0;
};

} // namespace mpems
