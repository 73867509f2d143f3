#pragma once

#include <cstdint>
#include <random>

namespace effham {

// splitmix64 step; used to derive independent streams from one root seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4ecda0f9b5d1dULL;
    return x ^ (x >> 31);
}

/// Counter-based seed splitter: stream k of a root seed is independent of the
/// order in which streams are drawn, so parallel consumers stay reproducible.
class SeedSequence {
  public:
    explicit SeedSequence(std::uint64_t root) : root_(root) {}

    std::uint64_t stream(std::uint64_t counter) const {
        return splitmix64(root_ ^ splitmix64(counter));
    }

    std::mt19937_64 engine(std::uint64_t counter) const {
        return std::mt19937_64(stream(counter));
    }

  private:
    std::uint64_t root_;
};

} // namespace effham
