/*
    Copyright 2026 The EvoChain Authors

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

// Keccak-256 as used by Ethereum (original Keccak padding 0x01, not the
// FIPS-202 SHA3 domain byte 0x06).

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace evochain {

using Digest256 = std::array<std::uint8_t, 32>;

namespace detail {

inline constexpr std::array<std::uint64_t, 24> keccak_round_constants{
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// rho offsets and pi lane order, walked in the standard (x, y) -> (y, 2x + 3y) sequence
inline constexpr std::array<unsigned, 24> keccak_rotations{
    1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44,
};
inline constexpr std::array<unsigned, 24> keccak_pi_lanes{
    10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1,
};

constexpr std::uint64_t rotl64(std::uint64_t v, unsigned n) {
    return n == 0 ? v : (v << n) | (v >> (64 - n));
}

constexpr void keccak_f1600(std::array<std::uint64_t, 25>& a) {
    for (std::uint64_t rc : keccak_round_constants) {
        std::array<std::uint64_t, 5> c{};
        for (int x = 0; x < 5; ++x) c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x) {
            std::uint64_t d = c[(x + 4) % 5] ^ rotl64(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5) a[y + x] ^= d;
        }

        std::uint64_t carry = a[1];
        for (std::size_t i = 0; i < 24; ++i) {
            unsigned lane = keccak_pi_lanes[i];
            std::uint64_t tmp = a[lane];
            a[lane] = rotl64(carry, keccak_rotations[i]);
            carry = tmp;
        }

        for (int y = 0; y < 25; y += 5) {
            std::array<std::uint64_t, 5> row{a[y], a[y + 1], a[y + 2], a[y + 3], a[y + 4]};
            for (int x = 0; x < 5; ++x) a[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
        }

        a[0] ^= rc;
    }
}

}  // namespace detail

class Keccak256 {
  public:
    static constexpr std::size_t rate = 136;

    constexpr Keccak256& update(std::span<const std::uint8_t> in) {
        for (std::uint8_t b : in) absorb(b);
        return *this;
    }

    constexpr Keccak256& update(std::string_view in) {
        for (char ch : in) absorb(static_cast<std::uint8_t>(ch));
        return *this;
    }

    constexpr Digest256 finalize() {
        xor_byte(pos_, 0x01);
        xor_byte(rate - 1, 0x80);
        detail::keccak_f1600(state_);
        Digest256 out{};
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = static_cast<std::uint8_t>(state_[i / 8] >> (8 * (i % 8)));
        return out;
    }

  private:
    constexpr void xor_byte(std::size_t at, std::uint8_t b) {
        state_[at / 8] ^= static_cast<std::uint64_t>(b) << (8 * (at % 8));
    }

    constexpr void absorb(std::uint8_t b) {
        xor_byte(pos_++, b);
        if (pos_ == rate) {
            detail::keccak_f1600(state_);
            pos_ = 0;
        }
    }

    std::array<std::uint64_t, 25> state_{};
    std::size_t pos_ = 0;
};

constexpr Digest256 keccak256(std::span<const std::uint8_t> in) {
    return Keccak256{}.update(in).finalize();
}

constexpr Digest256 keccak256(std::string_view in) {
    return Keccak256{}.update(in).finalize();
}

}  // namespace evochain
