#include "rbm/rng.hpp"

#include <cmath>

namespace rbm {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> philox_round(const std::array<std::uint32_t, 4>& c,
                                                 const std::array<std::uint32_t, 2>& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

} // namespace

std::array<std::uint32_t, 4> RngStream::block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    c = philox_round(c, k);
    for (int r = 1; r < 10; ++r) {
        k[0] += kPhiloxW0;
        k[1] += kPhiloxW1;
        c = philox_round(c, k);
    }
    return c;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {}

void RngStream::refill() {
    const std::array<std::uint32_t, 4> counter = {
        static_cast<std::uint32_t>(block_index_),
        static_cast<std::uint32_t>(block_index_ >> 32),
        static_cast<std::uint32_t>(stream_),
        static_cast<std::uint32_t>(stream_ >> 32),
    };
    const std::array<std::uint32_t, 2> key = {
        static_cast<std::uint32_t>(seed_),
        static_cast<std::uint32_t>(seed_ >> 32),
    };
    buffer_ = block(counter, key);
    ++block_index_;
    buffer_pos_ = 0;
}

std::uint64_t RngStream::next_u64() {
    if (buffer_pos_ > 2) refill();
    const std::uint64_t lo = buffer_[buffer_pos_];
    const std::uint64_t hi = buffer_[buffer_pos_ + 1];
    buffer_pos_ += 2;
    return (hi << 32) | lo;
}

double RngStream::uniform() {
    // 53 significant bits, shifted by half an ulp so 0 and 1 are unreachable.
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_normal_ = true;
    return r * std::cos(theta);
}

double RngStream::exponential(double rate) {
    return -std::log(uniform()) / rate;
}

} // namespace rbm
