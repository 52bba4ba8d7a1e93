#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mcast {

/// Counter-based random stream (Philox 4x32-10).
///
/// A stream is identified by a 64-bit key; draws are produced by encrypting an
/// incrementing counter, so the n-th draw of a stream depends only on
/// (key, n).  fork(i) derives an independent child stream whose key is a
/// mix of the parent key and i.  Simulation code keys streams as
/// master -> placement -> subframe -> ue -> prb, which makes every sample
/// reproducible from the master seed no matter how the loops are scheduled
/// across threads.
class RngStream {
  public:
    RngStream() : RngStream(0) {}
    explicit RngStream(std::uint64_t seed) : key_(seed) {}

    /// Derived stream, independent of this one for practical purposes.
    /// Does not advance the parent stream.
    RngStream fork(std::uint64_t index) const;

    std::uint64_t next_u64();

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform();

    /// Exponential with mean 1.
    double exponential();

    /// Normal via Box-Muller (two uniforms per call).
    double normal(double mean, double stddev);

    /// Unbiased integer in [0, n).  n must be > 0.
    std::uint64_t bounded(std::uint64_t n);

    std::uint64_t key() const { return key_; }

  private:
    std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int buf_pos_ = 4;  // empty
};

namespace detail {
std::uint64_t splitmix64(std::uint64_t x);
}

}  // namespace mcast
