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

#include <evochain/error.hpp>
#include <evochain/keccak.hpp>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evochain {

using Bytes = std::vector<std::uint8_t>;

namespace detail {

constexpr int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

constexpr std::string_view strip_0x(std::string_view s) {
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
    return s;
}

}  // namespace detail

inline std::string to_hex(std::span<const std::uint8_t> bytes, bool prefix = true) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2 + 2);
    if (prefix) out += "0x";
    for (std::uint8_t b : bytes) {
        out += digits[b >> 4];
        out += digits[b & 0x0f];
    }
    return out;
}

// Accepts an optional 0x prefix and either case. Odd-length input is rejected.
inline Bytes from_hex(std::string_view text) {
    std::string_view s = detail::strip_0x(text);
    if (s.size() % 2 != 0) throw ValidationError("odd-length hex string: '" + std::string(text) + "'");
    Bytes out(s.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = detail::hex_value(s[2 * i]);
        int lo = detail::hex_value(s[2 * i + 1]);
        if (hi < 0 || lo < 0) throw ValidationError("non-hex character in '" + std::string(text) + "'");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

// Fixed-width byte string with a canonical lowercase 0x-prefixed text form.
template <std::size_t N, typename Tag>
struct FixedBytes {
    static constexpr std::size_t size = N;
    std::array<std::uint8_t, N> bytes{};

    constexpr FixedBytes() = default;
    constexpr explicit FixedBytes(const std::array<std::uint8_t, N>& b) : bytes(b) {}

    static FixedBytes from_span(std::span<const std::uint8_t> in) {
        if (in.size() != N)
            throw ValidationError("expected " + std::to_string(N) + " bytes, got " + std::to_string(in.size()));
        FixedBytes out;
        std::copy(in.begin(), in.end(), out.bytes.begin());
        return out;
    }

    static FixedBytes parse(std::string_view text) {
        std::string_view s = detail::strip_0x(text);
        if (s.size() != 2 * N)
            throw ValidationError("expected " + std::to_string(2 * N) + " hex digits: '" + std::string(text) + "'");
        return from_span(from_hex(s));
    }

    std::string hex() const { return to_hex(bytes); }

    constexpr bool is_zero() const {
        return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
    }

    constexpr auto operator<=>(const FixedBytes&) const = default;
};

struct Hash32Tag {};
struct AddressTag {};

using Hash32 = FixedBytes<32, Hash32Tag>;
using Address = FixedBytes<20, AddressTag>;

inline Hash32 keccak_hash(std::string_view text) { return Hash32(keccak256(text)); }
inline Hash32 keccak_hash(std::span<const std::uint8_t> data) { return Hash32(keccak256(data)); }

// "0xABcd..." or "abcd..." (40 hex digits) -> canonical Address.
inline Address normalize_address(std::string_view text) {
    std::string_view s = detail::strip_0x(text);
    if (s.size() != 40) throw ValidationError("invalid address '" + std::string(text) + "': expected 40 hex digits");
    for (char c : s)
        if (detail::hex_value(c) < 0)
            throw ValidationError("invalid address '" + std::string(text) + "': non-hex character");
    return Address::parse(s);
}

inline bool is_valid_address(std::string_view text) {
    std::string_view s = detail::strip_0x(text);
    return s.size() == 40 && std::all_of(s.begin(), s.end(), [](char c) { return detail::hex_value(c) >= 0; });
}

// Low 20 bytes of a 32-byte word (ABI encoding of an address).
constexpr Address address_from_word(const Hash32& word) {
    Address out;
    for (std::size_t i = 0; i < 20; ++i) out.bytes[i] = word.bytes[12 + i];
    return out;
}

constexpr Hash32 word_from_address(const Address& a) {
    Hash32 out;
    for (std::size_t i = 0; i < 20; ++i) out.bytes[12 + i] = a.bytes[i];
    return out;
}

// Big-endian 256-bit subtraction of one; wraps at zero.
constexpr Hash32 minus_one(Hash32 v) {
    for (std::size_t i = 32; i-- > 0;) {
        if (v.bytes[i]-- != 0) break;
    }
    return v;
}

}  // namespace evochain

template <std::size_t N, typename Tag>
struct std::hash<evochain::FixedBytes<N, Tag>> {
    std::size_t operator()(const evochain::FixedBytes<N, Tag>& v) const noexcept {
        std::size_t h = 0;
        for (std::uint8_t b : v.bytes) h = h * 131 + b;
        return h;
    }
};
