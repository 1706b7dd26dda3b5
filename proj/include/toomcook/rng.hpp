/*
   Copyright 2026 The toomcook Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#pragma once

#include <array>
#include <cstdint>

namespace toomcook {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every
/// (key, counter) pair maps to four independent 32-bit words, so a stream
/// can be addressed directly by trial index.
class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

/// Sequential 32-bit draws from the Philox stream of (seed, stream).
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(stream)), stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    std::uint32_t next_u32() {
        if (used_ == 4) {
            buffer_ = Philox4x32::block({block_lo_, block_hi_, stream_lo_, stream_hi_}, key_);
            if (++block_lo_ == 0)
                ++block_hi_;
            used_ = 0;
        }
        return buffer_[used_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return hi << 32 | next_u32();
    }

    /// Uniform on (-1, 1): (2k + 1 - 2^24) 2^-24 for k uniform in [0, 2^24).
    /// Every value is an fp32 number, symmetric about zero, never 0 or +-1.
    float uniform_fp32() {
        const auto k = static_cast<std::int32_t>(next_u32() >> 8);
        return static_cast<float>(2 * k + 1 - (1 << 24)) * 0x1p-24f;
    }

    /// Uniform integer in [0, bound), by rejection.
    std::uint32_t below(std::uint32_t bound) {
        const std::uint32_t limit = static_cast<std::uint32_t>(-bound) % bound;
        for (;;) {
            const std::uint32_t r = next_u32();
            const std::uint64_t m = std::uint64_t{r} * bound;
            if (static_cast<std::uint32_t>(m) >= limit)
                return static_cast<std::uint32_t>(m >> 32);
        }
    }

  private:
    Philox4x32::Key key_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint32_t block_lo_ = 0, block_hi_ = 0;
    Philox4x32::Counter buffer_{};
    int used_ = 4;
};

} // namespace toomcook
