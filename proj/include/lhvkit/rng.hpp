// Copyright 2026 The lhvkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace lhvkit {

/**
 * @brief SplitMix64 generator (Steele, Lea, Flood: "Fast splittable
 * pseudorandom number generators", OOPSLA 2014).
 *
 * State advances by the golden-ratio increment; output is the mix64
 * finalizer of the state. Fully deterministic across platforms, which keeps
 * every seeded fixture reproducible. Streams for distinct purposes are
 * derived with derive_stream(seed, tag, ...) below.
 */
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 significant bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller.
    double next_normal() {
        double u1 = next_double();
        while (u1 <= 0.0)
            u1 = next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    std::uint64_t state_;
};

/// Child seed for a named purpose: FNV-1a over the tag folded into the seed
/// through the SplitMix64 finalizer. Extra integers extend the stream id.
inline std::uint64_t derive_stream(std::uint64_t seed, std::string_view tag) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return SplitMix64::mix(seed ^ h);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::string_view tag, std::uint64_t a) {
    return SplitMix64::mix(derive_stream(seed, tag) ^ a);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::string_view tag, std::uint64_t a,
                                   std::uint64_t b) {
    return SplitMix64::mix(derive_stream(seed, tag, a) ^ (b * 0x9E3779B97F4A7C15ULL));
}

} // namespace lhvkit
