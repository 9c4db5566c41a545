// Copyright 2026 The sdesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SDESIGN_RNG_HPP
#define SDESIGN_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace sdesign {

/// Stream tags used to key independent random streams off one master seed.
enum class Stream : std::uint64_t {
    kRmcc = 1,
    kCoin = 2,
    kOracle = 3,
    kTrial = 4,
    kShot = 5,
    kHaar = 6,
    kPermutation = 7,
    kState = 8,
    kPairs = 9,
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Hashes a master seed together with an ordered list of counters. Distinct
/// counter tuples give statistically independent 64-bit keys; the result does
/// not depend on the order in which keys are requested.
inline constexpr std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) noexcept {
    std::uint64_t h = splitmix64(seed ^ 0x6A09E667F3BCC908ULL);
    for (std::uint64_t c : counters) {
        h = splitmix64(h ^ splitmix64(c + 0x3C6EF372FE94F82BULL));
    }
    return h;
}

inline constexpr std::uint64_t derive_key(std::uint64_t seed, Stream s, std::initializer_list<std::uint64_t> counters) noexcept {
    std::uint64_t h = derive_key(seed, {static_cast<std::uint64_t>(s)});
    for (std::uint64_t c : counters) {
        h = splitmix64(h ^ splitmix64(c + 0x3C6EF372FE94F82BULL));
    }
    return h;
}

/// Single random bit for a keyed event (coin flips of the randomizer).
inline constexpr bool keyed_coin(std::uint64_t seed, Stream s, std::initializer_list<std::uint64_t> counters) noexcept {
    return (derive_key(seed, s, counters) >> 63) != 0;
}

/// Counter-based generator: output i is splitmix64(key + i * golden). Satisfies
/// UniformRandomBitGenerator so it plugs into <random> distributions.
class CounterRng {
   public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept {
        counter_ += 0x9E3779B97F4A7C15ULL;
        return splitmix64(key_ ^ counter_);
    }

    /// Uniform integer in [0, bound) without modulo bias (Lemire).
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) {
            return 0;
        }
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    constexpr bool bit() noexcept { return ((*this)() >> 63) != 0; }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace sdesign

#endif  // SDESIGN_RNG_HPP
