#pragma once

// Counter-based splittable RNG. Output i of a stream is a pure function of
// (key, i), so per-replication streams derived from (seed, n_index,
// rep_index) are identical no matter how work is scheduled across threads.
// Mixing is the splitmix64 finalizer (Steele, Lea, Flood 2014 / Vigna).

#include <cstdint>

namespace tsybnet {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

class SplitRng {
 public:
  explicit SplitRng(std::uint64_t key) : key_(key) {}

  // independent child stream; labels distinguish siblings
  SplitRng split(std::uint64_t label) const {
    return SplitRng(splitmix64_mix(key_ + UINT64_C(0x9E3779B97F4A7C15) +
                                   splitmix64_mix(label ^ UINT64_C(0xA5A5A5A5DEADBEEF))));
  }
  SplitRng split(std::uint64_t a, std::uint64_t b) const { return split(a).split(b); }
  SplitRng split(std::uint64_t a, std::uint64_t b, std::uint64_t c) const {
    return split(a).split(b).split(c);
  }

  std::uint64_t next_u64() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * UINT64_C(0x9E3779B97F4A7C15));
  }

  // uniform in [0, 1) with 53 random bits
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bernoulli(double p) { return next_unit() < p; }

  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace tsybnet
