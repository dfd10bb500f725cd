#pragma once

#include <array>
#include <cstdint>

namespace rbm {

// Philox4x32-10 counter-based generator.  A stream is addressed by
// (seed, stream_id); two streams with different ids are statistically
// independent, which is what the Monte Carlo harness relies on when it
// derives one stream per replication from the master seed.  Draws are a
// pure function of (seed, stream_id, position), so replaying a stream is
// exact regardless of threading or batching.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1); never returns an endpoint.
    double uniform();

    // Standard normal via Box-Muller; draws are cached pairwise.
    double normal();

    // Exponential with the given rate (mean 1/rate).
    double exponential(double rate);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    // Raw 4x32 Philox block for a given counter; exposed for the known-answer test.
    static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& counter,
                                              const std::array<std::uint32_t, 2>& key);

private:
    void refill();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffer_pos_ = 4;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

} // namespace rbm
