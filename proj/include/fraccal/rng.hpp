// rng.hpp — counter-based random stream.  Every draw is a pure function of
// (seed, stream name, counter), so runs reproduce bit-for-bit across
// platforms and thread schedules.  Streams are split by name.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fraccal {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view stream)
      : key_(splitmix64(seed ^ fnv1a64(stream))) {}

  std::uint64_t next_u64() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal, Box-Muller (second value cached)
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fraccal
