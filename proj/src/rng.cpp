#include "ftdecay/rng.hpp"

#include <cmath>

namespace ftdecay::rng {

namespace {

constexpr uint64_t kPhiloxM = 0xD2B74407B1CE6E93ULL;
constexpr uint64_t kPhiloxW = 0x9E3779B97F4A7C15ULL;

inline void mulhilo(uint64_t a, uint64_t b, uint64_t& hi, uint64_t& lo) {
    __uint128_t p = static_cast<__uint128_t>(a) * b;
    hi = static_cast<uint64_t>(p >> 64);
    lo = static_cast<uint64_t>(p);
}

// Philox2x64, 10 rounds.
inline void philox2x64(uint64_t key, uint64_t c0, uint64_t c1, uint64_t& o0, uint64_t& o1) {
    for (int round = 0; round < 10; ++round) {
        uint64_t hi, lo;
        mulhilo(kPhiloxM, c0, hi, lo);
        c0 = hi ^ key ^ c1;
        c1 = lo;
        key += kPhiloxW;
    }
    o0 = c0;
    o1 = c1;
}

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Stream make_stream(uint64_t seed, std::string_view name, uint64_t index) {
    uint64_t key = splitmix64(splitmix64(seed) ^ fnv1a(name));
    uint64_t hi = splitmix64(key ^ splitmix64(index ^ 0xA5A5A5A5A5A5A5A5ULL));
    return Stream(key, hi);
}

uint64_t Stream::next_u64() {
    if (have_ == 0) {
        philox2x64(key_, lo_, hi_, buf_[0], buf_[1]);
        ++lo_;
        have_ = 2;
    }
    return buf_[2 - have_--];
}

double Stream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::gaussian() {
    if (cached_) {
        cached_ = false;
        return cache_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    cache_ = r * std::sin(a);
    cached_ = true;
    return r * std::cos(a);
}

uint64_t Stream::below(uint64_t n) {
    // Rejection sampling on the top bits keeps the distribution exact.
    uint64_t limit = n * (UINT64_MAX / n);
    uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

}  // namespace ftdecay::rng
