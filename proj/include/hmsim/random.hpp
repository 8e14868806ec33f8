#pragma once

#include <bit>
#include <cstdint>

namespace hmsim
{
//---------------------------------------------------------------------------//
// Counter-based generator primitives.
//
// A stream is identified by a 64-bit key; its k-th draw is
//   mix64(key + (k + 1) * golden_gamma)
// i.e. SplitMix64 started at the key. Keys for substream i of a seed are
//   mix64(mix64(seed) + (i + 1) * golden_gamma).
// Every draw is a pure function of (seed, substream, k), so results do not
// depend on platform, scheduling, or worker count.
//---------------------------------------------------------------------------//
inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Top 52 bits mapped to [0, 1); exact, identical in scalar and vector code
constexpr double to_unit(std::uint64_t bits)
{
    return std::bit_cast<double>((bits >> 12) | 0x3FF0000000000000ULL) - 1.0;
}

constexpr std::uint64_t seed_hash(std::uint64_t seed)
{
    return mix64(seed);
}

constexpr std::uint64_t substream_key(std::uint64_t hashed_seed, std::uint64_t index)
{
    return mix64(hashed_seed + (index + 1) * golden_gamma);
}

constexpr std::uint64_t stream_draw(std::uint64_t key, std::uint64_t k)
{
    return mix64(key + (k + 1) * golden_gamma);
}

// Independent seed for the k-th sub-experiment of a run
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k)
{
    return mix64(seed ^ mix64(k + 0x632BE59BD9B4E019ULL));
}

//---------------------------------------------------------------------------//
/*!
 * Seedable, splittable pseudo-random stream.
 *
 * Not safe to share between threads; give each task its own substream.
 */
class RandomStream
{
  public:
    RandomStream(std::uint64_t seed, std::uint64_t substream)
        : key_{substream_key(seed_hash(seed), substream)}
    {
    }

    static RandomStream from_key(std::uint64_t key) { return RandomStream{key}; }

    std::uint64_t key() const { return key_; }
    std::uint64_t position() const { return counter_; }

    std::uint64_t next_u64() { return stream_draw(key_, counter_++); }
    double uniform() { return to_unit(next_u64()); }
    // Jump to draw k
    void seek(std::uint64_t k) { counter_ = k; }

    // Independent child stream
    RandomStream split(std::uint64_t index) const
    {
        return RandomStream{substream_key(mix64(key_ ^ 0xD1B54A32D192ED03ULL), index)};
    }

  private:
    explicit RandomStream(std::uint64_t key) : key_{key} {}

    std::uint64_t key_;
    std::uint64_t counter_{0};
};

}  // namespace hmsim
