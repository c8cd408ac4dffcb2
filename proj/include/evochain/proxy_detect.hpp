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

#include <evochain/bytes.hpp>
#include <evochain/ingest.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evochain {

namespace opcode {
inline constexpr std::uint8_t push1 = 0x60;
inline constexpr std::uint8_t push20 = 0x73;
inline constexpr std::uint8_t push32 = 0x7f;
inline constexpr std::uint8_t delegatecall = 0xf4;
}  // namespace opcode

struct OpcodeScan {
    bool has_delegatecall = false;
    std::set<Hash32> pushed_constants;  // full PUSH32 immediates only
    std::optional<Address> eip1167_target;
    std::size_t code_size = 0;
    std::vector<std::size_t> delegatecall_offsets;

    bool operator==(const OpcodeScan&) const = default;
};

// ERC-1167 runtime code: prefix, 20-byte implementation address, suffix.
inline constexpr std::array<std::uint8_t, 10> eip1167_prefix{0x36, 0x3d, 0x3d, 0x37, 0x3d,
                                                             0x3d, 0x3d, 0x36, 0x3d, 0x73};
inline constexpr std::array<std::uint8_t, 15> eip1167_suffix{0x5a, 0xf4, 0x3d, 0x82, 0x80, 0x3e, 0x90, 0x3d,
                                                             0x91, 0x60, 0x2b, 0x57, 0xfd, 0x5b, 0xf3};

inline Bytes eip1167_runtime_code(const Address& target) {
    Bytes code(eip1167_prefix.begin(), eip1167_prefix.end());
    code.insert(code.end(), target.bytes.begin(), target.bytes.end());
    code.insert(code.end(), eip1167_suffix.begin(), eip1167_suffix.end());
    return code;
}

inline std::optional<Address> match_eip1167(std::span<const std::uint8_t> code) {
    constexpr std::size_t total = eip1167_prefix.size() + 20 + eip1167_suffix.size();
    if (code.size() != total) return std::nullopt;
    if (!std::equal(eip1167_prefix.begin(), eip1167_prefix.end(), code.begin())) return std::nullopt;
    auto suffix_at = code.begin() + eip1167_prefix.size() + 20;
    if (!std::equal(eip1167_suffix.begin(), eip1167_suffix.end(), suffix_at)) return std::nullopt;
    return Address::from_span(code.subspan(eip1167_prefix.size(), 20));
}

// Linear sweep. PUSH1..PUSH32 immediates are skipped so their bytes are never
// decoded as instructions; a truncated final push simply ends the scan.
inline OpcodeScan scan_bytecode(std::span<const std::uint8_t> code) {
    OpcodeScan scan;
    scan.code_size = code.size();
    for (std::size_t pc = 0; pc < code.size();) {
        std::uint8_t op = code[pc];
        if (op >= opcode::push1 && op <= opcode::push32) {
            std::size_t width = op - opcode::push1 + 1u;
            if (width == 32 && pc + 1 + 32 <= code.size())
                scan.pushed_constants.insert(Hash32::from_span(code.subspan(pc + 1, 32)));
            pc += 1 + width;
            continue;
        }
        if (op == opcode::delegatecall) {
            scan.has_delegatecall = true;
            scan.delegatecall_offsets.push_back(pc);
        }
        ++pc;
    }
    scan.eip1167_target = match_eip1167(code);
    return scan;
}

struct SlotConstants {
    Hash32 implementation_slot;
    Hash32 admin_slot;
    Hash32 beacon_slot;
};

// keccak256(label) - 1 for the three EIP-1967 labels.
inline constexpr SlotConstants slot_constants() {
    return {
        minus_one(Hash32(keccak256(std::string_view("eip1967.proxy.implementation")))),
        minus_one(Hash32(keccak256(std::string_view("eip1967.proxy.admin")))),
        minus_one(Hash32(keccak256(std::string_view("eip1967.proxy.beacon")))),
    };
}

inline constexpr Hash32 event_topic(std::string_view signature) { return Hash32(keccak256(signature)); }

inline constexpr Hash32 upgraded_topic() { return event_topic("Upgraded(address)"); }

enum class ProxyKind { Eip1967, UupsLike, BeaconLike, MinimalEip1167, DelegatecallGeneric, NotProxy };

inline const char* to_string(ProxyKind k) {
    switch (k) {
        case ProxyKind::Eip1967: return "Eip1967";
        case ProxyKind::UupsLike: return "UupsLike";
        case ProxyKind::BeaconLike: return "BeaconLike";
        case ProxyKind::MinimalEip1167: return "MinimalEip1167";
        case ProxyKind::DelegatecallGeneric: return "DelegatecallGeneric";
        case ProxyKind::NotProxy: return "NotProxy";
    }
    return "NotProxy";
}

inline ProxyKind parse_proxy_kind(std::string_view s) {
    for (ProxyKind k : {ProxyKind::Eip1967, ProxyKind::UupsLike, ProxyKind::BeaconLike, ProxyKind::MinimalEip1167,
                        ProxyKind::DelegatecallGeneric, ProxyKind::NotProxy})
        if (s == to_string(k)) return k;
    throw ValidationError("unknown proxy kind '" + std::string(s) + "'");
}

namespace evidence {
inline constexpr std::string_view minimal_pattern = "minimal-pattern-match";
inline constexpr std::string_view implementation_slot = "slot-constant-in-code";
inline constexpr std::string_view beacon_slot = "beacon-slot-in-code";
inline constexpr std::string_view upgrade_event = "upgrade-event-emitted";
inline constexpr std::string_view admin_slot = "admin-slot-in-code";  // transparent-proxy indicator
inline constexpr std::string_view delegatecall = "delegatecall-opcode";
}  // namespace evidence

struct ProxyClassification {
    ProxyKind kind = ProxyKind::NotProxy;
    std::vector<std::string> evidence;

    bool is_proxy() const { return kind != ProxyKind::NotProxy; }
    bool has_evidence(std::string_view tag) const {
        return std::find(evidence.begin(), evidence.end(), tag) != evidence.end();
    }
};

// First matching rule picks the kind; evidence lists every specific rule that
// matched. The bare delegatecall tag is only recorded when it is the sole basis.
inline ProxyClassification classify_proxy(const OpcodeScan& scan, std::span<const LogRecord> address_logs) {
    static constexpr SlotConstants slots = slot_constants();
    static constexpr Hash32 upgraded = upgraded_topic();

    const bool minimal = scan.eip1167_target.has_value();
    const bool impl_slot = scan.has_delegatecall && scan.pushed_constants.contains(slots.implementation_slot);
    const bool beacon_slot = scan.has_delegatecall && scan.pushed_constants.contains(slots.beacon_slot);
    const bool admin_slot = scan.has_delegatecall && scan.pushed_constants.contains(slots.admin_slot);
    const bool upgrade_event = std::any_of(address_logs.begin(), address_logs.end(), [](const LogRecord& l) {
        return !l.topics.empty() && l.topics.front() == upgraded;
    });

    ProxyClassification out;
    if (minimal) out.evidence.emplace_back(evidence::minimal_pattern);
    if (impl_slot) out.evidence.emplace_back(evidence::implementation_slot);
    if (admin_slot) out.evidence.emplace_back(evidence::admin_slot);
    if (beacon_slot) out.evidence.emplace_back(evidence::beacon_slot);
    if (upgrade_event) out.evidence.emplace_back(evidence::upgrade_event);

    if (minimal) {
        out.kind = ProxyKind::MinimalEip1167;
    } else if (impl_slot) {
        out.kind = ProxyKind::Eip1967;
    } else if (beacon_slot) {
        out.kind = ProxyKind::BeaconLike;
    } else if (upgrade_event) {
        out.kind = scan.has_delegatecall ? ProxyKind::Eip1967 : ProxyKind::UupsLike;
    } else if (scan.has_delegatecall) {
        out.kind = ProxyKind::DelegatecallGeneric;
    }
    if (out.kind == ProxyKind::DelegatecallGeneric && out.evidence.empty())
        out.evidence.emplace_back(evidence::delegatecall);
    if (out.kind == ProxyKind::NotProxy) out.evidence.clear();
    return out;
}

}  // namespace evochain
