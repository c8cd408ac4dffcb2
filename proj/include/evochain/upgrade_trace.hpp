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
#include <evochain/proxy_detect.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evochain {

// Position of an event on chain. Transactions are placed at the end of their
// block (log_index = max), so they sort after every log in the same block.
struct ChainPosition {
    std::uint64_t block_number = 0;
    std::uint64_t log_index = 0;

    static constexpr ChainPosition end_of_block(std::uint64_t block) {
        return {block, std::numeric_limits<std::uint64_t>::max()};
    }

    constexpr auto operator<=>(const ChainPosition&) const = default;
};

// One row of the upgrade-event signature table.
struct EventSignature {
    std::string name;
    std::string signature;      // canonical form, e.g. "Upgraded(address)"
    std::size_t impl_param_index = 0;  // position among indexed (topics) or non-indexed (data words) params
    bool indexed = true;

    Hash32 topic0() const { return event_topic(signature); }
};

class SignatureTable {
  public:
    SignatureTable() = default;
    explicit SignatureTable(std::vector<EventSignature> rows) : rows_(std::move(rows)) {}

    static SignatureTable defaults() {
        return SignatureTable({
            {"Upgraded", "Upgraded(address)", 0, true},
            {"BeaconUpgraded", "BeaconUpgraded(address)", 0, true},
            {"ImplementationUpdated", "ImplementationUpdated(address,address)", 1, false},
        });
    }

    // NDJSON rows {"name", "signature", "impl_param_index", "indexed"}; rows
    // whose name matches an existing entry replace it.
    static SignatureTable load(const std::filesystem::path& path, SignatureTable base = defaults()) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read signature table " + path.string());
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            try {
                json j = json::parse(line);
                EventSignature row{j.at("name").get<std::string>(), j.at("signature").get<std::string>(),
                                   j.value("impl_param_index", std::size_t{0}), j.value("indexed", true)};
                if (row.indexed && row.impl_param_index > 2)
                    throw ValidationError("indexed parameter index must be 0..2");
                base.put(std::move(row));
            } catch (const json::exception& e) {
                throw ValidationError("signature table line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        return base;
    }

    void put(EventSignature row) {
        auto it = std::find_if(rows_.begin(), rows_.end(), [&](const auto& r) { return r.name == row.name; });
        if (it != rows_.end()) *it = std::move(row);
        else rows_.push_back(std::move(row));
    }

    const EventSignature* match(const Hash32& topic0) const {
        for (const auto& r : rows_)
            if (r.topic0() == topic0) return &r;
        return nullptr;
    }

    const std::vector<EventSignature>& rows() const { return rows_; }

  private:
    std::vector<EventSignature> rows_;
};

struct UpgradeEvent {
    Address proxy;
    Address new_implementation;
    std::uint64_t block_number = 0;
    std::uint64_t log_index = 0;
    Hash32 tx_hash;
    std::string event_name;

    ChainPosition position() const { return {block_number, log_index}; }
    bool bricking() const { return new_implementation.is_zero(); }
    bool operator==(const UpgradeEvent&) const = default;
};

struct DecodeResult {
    std::vector<UpgradeEvent> events;
    std::size_t malformed = 0;
};

inline DecodeResult decode_upgrade_events(std::span<const LogRecord> logs,
                                          const SignatureTable& table = SignatureTable::defaults()) {
    DecodeResult out;
    for (const auto& log : logs) {
        if (log.topics.empty()) continue;
        const EventSignature* sig = table.match(log.topics.front());
        if (!sig) continue;

        std::optional<Address> impl;
        if (sig->indexed) {
            if (log.topics.size() > sig->impl_param_index + 1)
                impl = address_from_word(log.topics[sig->impl_param_index + 1]);
        } else {
            std::size_t at = sig->impl_param_index * 32;
            if (log.data.size() >= at + 32)
                impl = address_from_word(Hash32::from_span(std::span(log.data).subspan(at, 32)));
        }
        if (!impl) {
            ++out.malformed;
            continue;
        }
        out.events.push_back({log.address, *impl, log.block_number, log.log_index, log.tx_hash, sig->name});
    }
    std::sort(out.events.begin(), out.events.end(),
              [](const UpgradeEvent& a, const UpgradeEvent& b) { return a.position() < b.position(); });
    return out;
}

struct VersionEntry {
    std::uint32_t version_number = 0;
    Address implementation;
    ChainPosition active_from;
    std::optional<ChainPosition> active_until;
    std::uint64_t tx_count = 0;
    std::optional<std::uint64_t> creation_timestamp;
    std::optional<std::uint64_t> last_tx_timestamp;
    std::uint32_t noop_upgrades = 0;  // re-sets of the same implementation while active
    bool bricked = false;             // zero-address implementation

    bool operator==(const VersionEntry&) const = default;
};

struct VersionChain {
    Address proxy;
    std::vector<VersionEntry> entries;
    std::uint64_t unattributed_tx_count = 0;  // transactions before the first version opened

    bool operator==(const VersionChain&) const = default;
};

// Segments the event stream into versions. A change of implementation closes
// the current version; a repeat of the current implementation is a no-op.
// `initial_implementation` seeds version 1 at the creation point for proxies
// whose implementation is fixed in code (EIP-1167 clones).
inline VersionChain build_version_chain(const Address& proxy, std::span<const UpgradeEvent> events,
                                        const std::optional<ContractCreation>& creation = std::nullopt,
                                        const std::optional<Address>& initial_implementation = std::nullopt) {
    VersionChain chain{proxy, {}, 0};
    for (const auto& e : events)
        if (e.proxy != proxy)
            throw ContractViolation("upgrade event for " + e.proxy.hex() + " passed to chain of " + proxy.hex());

    const std::optional<ChainPosition> creation_point =
        creation ? std::optional(ChainPosition{creation->block_number, 0}) : std::nullopt;

    auto open = [&](const Address& impl, ChainPosition from) {
        if (!chain.entries.empty()) chain.entries.back().active_until = from;
        VersionEntry v;
        v.version_number = static_cast<std::uint32_t>(chain.entries.size() + 1);
        v.implementation = impl;
        v.active_from = from;
        v.bricked = impl.is_zero();
        chain.entries.push_back(v);
    };

    if (initial_implementation && creation_point) open(*initial_implementation, *creation_point);

    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        if (!chain.entries.empty() && chain.entries.back().implementation == e.new_implementation) {
            ++chain.entries.back().noop_upgrades;
            continue;
        }
        ChainPosition from = e.position();
        if (chain.entries.empty() && creation_point && creation->tx_hash == e.tx_hash &&
            creation_point->block_number == e.block_number)
            from = *creation_point;
        open(e.new_implementation, from);
    }
    return chain;
}

// Buckets transactions into the version active at the end of their block.
inline VersionChain attach_activity(VersionChain chain, std::span<const TxSummary> txs) {
    for (const auto& tx : txs) {
        if (tx.to != chain.proxy)
            throw ContractViolation("transaction " + tx.tx_hash.hex() + " is not addressed to " + chain.proxy.hex());
        ChainPosition at = ChainPosition::end_of_block(tx.block_number);
        auto it = std::upper_bound(chain.entries.begin(), chain.entries.end(), at,
                                   [](const ChainPosition& p, const VersionEntry& v) { return p < v.active_from; });
        if (it == chain.entries.begin()) {
            ++chain.unattributed_tx_count;
            continue;
        }
        VersionEntry& v = *std::prev(it);
        ++v.tx_count;
        if (!v.last_tx_timestamp || *v.last_tx_timestamp < tx.block_timestamp) v.last_tx_timestamp = tx.block_timestamp;
    }
    return chain;
}

inline json to_json(const VersionChain& chain) {
    auto pos = [](const ChainPosition& p) { return json::array({p.block_number, p.log_index}); };
    json entries = json::array();
    for (const auto& v : chain.entries) {
        entries.push_back({
            {"version_number", v.version_number},
            {"implementation", v.implementation.hex()},
            {"active_from", pos(v.active_from)},
            {"active_until", v.active_until ? pos(*v.active_until) : json(nullptr)},
            {"tx_count", v.tx_count},
            {"creation_timestamp", v.creation_timestamp ? json(*v.creation_timestamp) : json(nullptr)},
            {"last_tx_timestamp", v.last_tx_timestamp ? json(*v.last_tx_timestamp) : json(nullptr)},
            {"noop_upgrades", v.noop_upgrades},
            {"bricked", v.bricked},
        });
    }
    return {{"proxy", chain.proxy.hex()}, {"entries", entries}, {"unattributed_tx_count", chain.unattributed_tx_count}};
}

}  // namespace evochain
