#pragma once

#include <cstdint>
#include <vector>

namespace pmflab {

// Counter-based generator: every draw is a pure function of (key, counter),
// so independent trials can be evaluated in any order and still reproduce
// bit-for-bit. The mixer is the splitmix64 finalizer.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed + 0x6A09E667F3BCC909ull * (stream + 1))) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const { return mix(key_ ^ mix(counter)); }

  // Uniform in [0, 1).
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a -log() argument.
  double uniform_pos(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

// Convenience wrapper that advances a counter, for call sites that want a
// stream of draws rather than addressing by counter.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0) : rng_(seed, stream) {}

  double next() { return rng_.uniform(counter_++); }
  double next_pos() { return rng_.uniform_pos(counter_++); }

  // Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) {
    return rng_.bits(counter_++) % bound;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace pmflab
