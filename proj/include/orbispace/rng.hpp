#pragma once

#include <cstdint>

namespace orbi {

// Counter-based generator: every value is a hash of (seed, stream, index), so
// trials can be evaluated independently and in any order.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : state_(mix64(seed ^ mix64(stream))) {}

    std::uint64_t next() { return mix64(state_ += 0x9e3779b97f4a7c15ull); }

    // Uniform in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

    std::int64_t next_range(std::int64_t lo, std::int64_t hi) {  // inclusive
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_;
};

}  // namespace orbi
