#pragma once

#include <cstdint>
#include <string_view>

namespace ftdecay::rng {

// Counter-based Philox2x64-10 stream. Streams are cheap value types; a stream is
// fully determined by (seed, substream name, index), so any parallel schedule that
// assigns work by index reproduces the serial results exactly.
class Stream {
  public:
    Stream(uint64_t key, uint64_t counter_hi) : key_(key), hi_(counter_hi) {}

    uint64_t next_u64();

    // Uniform in [0, 1), 53-bit mantissa.
    double uniform();

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; second draw of each pair is cached.
    double gaussian();

    // Uniform integer in [0, n).
    uint64_t below(uint64_t n);

  private:
    uint64_t key_;
    uint64_t hi_;       // fixed per stream; low word counts blocks
    uint64_t lo_ = 0;
    uint64_t buf_[2] = {0, 0};
    int have_ = 0;
    bool cached_ = false;
    double cache_ = 0.0;
};

// Derive a stream from the experiment seed, a substream name, and an index.
Stream make_stream(uint64_t seed, std::string_view name, uint64_t index = 0);

uint64_t splitmix64(uint64_t x);

}  // namespace ftdecay::rng
