#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace contam {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Combines a list of integers into one seed; order matters.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

/// FNV-1a of a string, for folding names into seeds.
std::uint64_t seed_from_string(std::string_view text);

/**
 * Counter-based generator: the i-th output is a pure function of (key, i).
 *
 * Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
 * Substreams are keyed by mixing the parent key with an index, so work split
 * across threads draws identical numbers regardless of schedule.
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix64(key_ + (counter_++) * kGamma); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t bound);

    Rng substream(std::uint64_t index) const { return Rng(key_, index + 1); }

    std::uint64_t key() const { return key_; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace contam
