#pragma once

#include <cstdint>
#include <limits>

namespace dfcnoma {

/// Counter-based random stream.
///
/// Output i of the stream keyed by (seed, stream_id) is a pure function of
/// (seed, stream_id, i): a SplitMix64 finalizer applied to a Weyl sequence
/// offset by the key. Streams for different shards never share state, so the
/// values a shard sees do not depend on which thread runs it.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream_id = 0) noexcept
        : key_(mix(seed ^ mix(stream_id + 0x632be59bd9b4e019ULL))), counter_(0)
    {
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix(key_ + (counter_++) * kGolden); }

    /// Uniform double strictly inside (0, 1).
    double uniform_open() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    /// Position the stream at an absolute draw index.
    void seek(std::uint64_t counter) noexcept { counter_ = counter; }
    std::uint64_t position() const noexcept { return counter_; }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept
    {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace dfcnoma
