#include "mpems/rng.hpp"

namespace mpems {
namespace {

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
  const uint64_t p = static_cast<uint64_t>(a) * b;
  hi = static_cast<uint32_t>(p >> 32);
  lo = static_cast<uint32_t>(p);
}

inline double to_unit_double(uint32_t hi, uint32_t lo) {
  const uint64_t bits = (static_cast<uint64_t>(hi) << 32) | lo;
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace

std::array<uint32_t, 4> Philox4x32::block(std::array<uint32_t, 4> c,
                                          std::array<uint32_t, 2> k) {
  constexpr uint32_t kMul0 = 0xD2511F53u;
  constexpr uint32_t kMul1 = 0xCD9E8D57u;
  constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

std::array<double, 2> uniform_pair(uint64_t seed, uint32_t a, uint32_t b,
                                   uint32_t c, uint32_t stream) {
  const std::array<uint32_t, 2> key = {static_cast<uint32_t>(seed),
                                       static_cast<uint32_t>(seed >> 32)};
  const auto w = Philox4x32::block({a, b, c, stream}, key);
  return {to_unit_double(w[0], w[1]), to_unit_double(w[2], w[3])};
}

double CounterRng::next_double() {
  if (buffered_ == 0) {
    buffer_ = uniform_pair(seed_, static_cast<uint32_t>(counter_),
                           static_cast<uint32_t>(counter_ >> 32), 0, stream_);
    ++counter_;
    buffered_ = 2;
  }
  return buffer_[2 - buffered_--];
}

uint32_t CounterRng::next_below(uint32_t n) {
  const double d = next_double();
  auto v = static_cast<uint32_t>(d * static_cast<double>(n));
  return v < n ? v : n - 1;
}

} // namespace mpems
