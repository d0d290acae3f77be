#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace hbfsm {

inline uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Splittable deterministic RNG. A Stream is identified by a 64-bit key;
// fork(id) derives a child key from (key, id) alone, so the tree of streams
// reachable from a master seed does not depend on how much anyone has drawn.
// Generation within a stream is xoshiro256++ seeded from the key.
class Stream {
 public:
  explicit Stream(uint64_t key) : key_(key) {
    uint64_t t = key;
    for (auto& w : s_) w = splitmix64(t);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  static Stream root(uint64_t master_seed) {
    return Stream(derive(0x8c17e2f9d3ab51c4ull, master_seed));
  }

  Stream fork(uint64_t id) const { return Stream(derive(key_, id)); }

  uint64_t key() const { return key_; }

  uint64_t next_u64() {
    const uint64_t r = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return r;
  }

  // uniform on (0, 1]; never returns 0, safe under log()
  double uniform01() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // uniform on (0, 2pi], the angle distribution used throughout
  double angle() { return 2.0 * M_PI * uniform01(); }

  // one fair bit
  int bit() { return int(next_u64() >> 63); }

  // uniform integer in [0, bound); bound >= 1
  uint64_t below(uint64_t bound) {
    return uint64_t((static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // circularly symmetric complex Gaussian, unit variance (1/2 per component)
  std::complex<double> cnormal() {
    const double r = std::sqrt(-std::log(uniform01()));
    const double ph = 2.0 * M_PI * uniform01();
    return {r * std::cos(ph), r * std::sin(ph)};
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static uint64_t derive(uint64_t key, uint64_t id) {
    uint64_t x = key ^ ((id + 1) * 0x9e3779b97f4a7c15ull);
    uint64_t a = splitmix64(x);
    uint64_t b = splitmix64(x);
    return a ^ rotl(b, 31);
  }

  std::array<uint64_t, 4> s_;
  uint64_t key_;
};

}  // namespace hbfsm
