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

#include "oracle/reference_keccak.hpp"
#include "oracle/segmentation.hpp"
#include "test_support.hpp"

#include <evochain/upgrade_trace.hpp>

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace evochain;
using testing_support::addr;
using testing_support::TempDir;
using testing_support::write_text;

namespace {

Hash32 padded(const Address& a) {
    Hash32 h;
    std::copy(a.bytes.begin(), a.bytes.end(), h.bytes.begin() + 12);
    return h;
}

LogRecord upgraded_log(const Address& proxy, const Address& impl, std::uint64_t block, std::uint64_t index = 0) {
    LogRecord l;
    l.address = proxy;
    l.topics = {Hash32(oracle::keccak256("Upgraded(address)")), padded(impl)};
    l.block_number = block;
    l.log_index = index;
    l.tx_hash = keccak_hash("tx" + std::to_string(block) + ":" + std::to_string(index));
    return l;
}

UpgradeEvent event(const Address& proxy, const Address& impl, std::uint64_t block, std::uint64_t index = 0) {
    return {proxy, impl, block, index, keccak_hash("ev" + std::to_string(block) + ":" + std::to_string(index)), "Upgraded"};
}

TxSummary tx_to(const Address& to, std::uint64_t block, std::uint64_t ts = 0) {
    return {to, block, ts ? ts : block * 12, keccak_hash("t" + std::to_string(block) + ":" + std::to_string(ts))};
}

std::uint64_t total_tx(const VersionChain& c) {
    return std::accumulate(c.entries.begin(), c.entries.end(), std::uint64_t{0},
                           [](std::uint64_t s, const VersionEntry& v) { return s + v.tx_count; });
}

}  // namespace

TEST(DecodeUpgradeEvents, EmptyLogs) {
    auto r = decode_upgrade_events({});
    EXPECT_TRUE(r.events.empty());
    EXPECT_EQ(r.malformed, 0u);
}

TEST(DecodeUpgradeEvents, ReadsIndexedImplementation) {
    Address p = addr("proxy"), b = addr("B");
    std::vector<LogRecord> logs{upgraded_log(p, b, 10, 3)};
    auto r = decode_upgrade_events(logs);
    ASSERT_EQ(r.events.size(), 1u);
    EXPECT_EQ(r.events[0].new_implementation, b);
    EXPECT_EQ(r.events[0].proxy, p);
    EXPECT_EQ(r.events[0].event_name, "Upgraded");
    EXPECT_EQ(r.events[0].position(), (ChainPosition{10, 3}));
}

TEST(DecodeUpgradeEvents, SortsByPosition) {
    Address p = addr("proxy");
    std::vector<LogRecord> logs{upgraded_log(p, addr("A"), 7), upgraded_log(p, addr("B"), 5, 2), upgraded_log(p, addr("C"), 5, 1)};
    auto r = decode_upgrade_events(logs);
    ASSERT_EQ(r.events.size(), 3u);
    EXPECT_EQ(r.events[0].new_implementation, addr("C"));
    EXPECT_EQ(r.events[1].new_implementation, addr("B"));
    EXPECT_EQ(r.events[2].new_implementation, addr("A"));
}

TEST(DecodeUpgradeEvents, MissingTopic1IsMalformed) {
    LogRecord l = upgraded_log(addr("p"), addr("A"), 3);
    l.topics.pop_back();
    std::vector<LogRecord> logs{l, upgraded_log(addr("p"), addr("B"), 4)};
    auto r = decode_upgrade_events(logs);
    EXPECT_EQ(r.events.size(), 1u);
    EXPECT_EQ(r.malformed, 1u);
}

TEST(DecodeUpgradeEvents, IgnoresUnrelatedTopics) {
    LogRecord l = upgraded_log(addr("p"), addr("A"), 3);
    l.topics[0] = Hash32(oracle::keccak256("Transfer(address,address,uint256)"));
    std::vector<LogRecord> logs{l};
    auto r = decode_upgrade_events(logs);
    EXPECT_TRUE(r.events.empty());
    EXPECT_EQ(r.malformed, 0u);
}

TEST(DecodeUpgradeEvents, ReadsNonIndexedParameterFromData) {
    Address p = addr("p"), old_impl = addr("old"), new_impl = addr("new");
    LogRecord l;
    l.address = p;
    l.topics = {Hash32(oracle::keccak256("ImplementationUpdated(address,address)"))};
    auto w0 = padded(old_impl), w1 = padded(new_impl);
    l.data.insert(l.data.end(), w0.bytes.begin(), w0.bytes.end());
    l.data.insert(l.data.end(), w1.bytes.begin(), w1.bytes.end());
    std::vector<LogRecord> logs{l};
    auto r = decode_upgrade_events(logs);
    ASSERT_EQ(r.events.size(), 1u);
    EXPECT_EQ(r.events[0].new_implementation, new_impl);
    EXPECT_EQ(r.events[0].event_name, "ImplementationUpdated");

    l.data.resize(40);
    logs = {l};
    EXPECT_EQ(decode_upgrade_events(logs).malformed, 1u);
}

TEST(DecodeUpgradeEvents, SignatureTableFileExtendsDefaults) {
    TempDir dir;
    auto path = dir.path() / "signatures.ndjson";
    write_text(path, "{\"name\":\"ProxyUpdated\",\"signature\":\"ProxyUpdated(address)\",\"impl_param_index\":0,\"indexed\":false}\n");
    SignatureTable table = SignatureTable::load(path);

    LogRecord l;
    l.address = addr("p");
    l.topics = {Hash32(oracle::keccak256("ProxyUpdated(address)"))};
    auto w = padded(addr("X"));
    l.data.assign(w.bytes.begin(), w.bytes.end());
    std::vector<LogRecord> logs{l, upgraded_log(addr("p"), addr("Y"), 1)};
    auto r = decode_upgrade_events(logs, table);
    ASSERT_EQ(r.events.size(), 2u);
    EXPECT_EQ(r.events[0].new_implementation, addr("X"));
    EXPECT_EQ(r.events[0].event_name, "ProxyUpdated");
}

TEST(DecodeUpgradeEvents, BadSignatureTableIsRejected) {
    TempDir dir;
    auto path = dir.path() / "signatures.ndjson";
    write_text(path, "{\"name\":\"X\"}\n");
    EXPECT_THROW(SignatureTable::load(path), Error);
}

TEST(BuildVersionChain, NoEvents) {
    EXPECT_TRUE(build_version_chain(addr("p"), {}).entries.empty());
}

TEST(BuildVersionChain, RecurringImplementationGetsDistinctVersions) {
    Address p = addr("p");
    std::vector<UpgradeEvent> ev{event(p, addr("A"), 10), event(p, addr("B"), 20), event(p, addr("A"), 30)};
    auto c = build_version_chain(p, ev);
    ASSERT_EQ(c.entries.size(), 3u);
    EXPECT_EQ(c.entries[0].implementation, addr("A"));
    EXPECT_EQ(c.entries[1].implementation, addr("B"));
    EXPECT_EQ(c.entries[2].implementation, addr("A"));
    for (std::uint32_t i = 0; i < 3; ++i) EXPECT_EQ(c.entries[i].version_number, i + 1);
    EXPECT_EQ(c.entries[0].active_until, (ChainPosition{20, 0}));
    EXPECT_EQ(c.entries[1].active_until, (ChainPosition{30, 0}));
    EXPECT_FALSE(c.entries[2].active_until);
}

TEST(BuildVersionChain, RepeatIsNoop) {
    Address p = addr("p");
    std::vector<UpgradeEvent> ev{event(p, addr("A"), 10), event(p, addr("A"), 11), event(p, addr("B"), 12)};
    auto c = build_version_chain(p, ev);
    ASSERT_EQ(c.entries.size(), 2u);
    EXPECT_EQ(c.entries[0].noop_upgrades, 1u);
    EXPECT_EQ(c.entries[1].noop_upgrades, 0u);
}

TEST(BuildVersionChain, ForeignEventIsContractViolation) {
    std::vector<UpgradeEvent> ev{event(addr("other"), addr("A"), 1)};
    EXPECT_THROW(build_version_chain(addr("p"), ev), ContractViolation);
}

TEST(BuildVersionChain, VersionOneStartsAtCreationWhenEmittedByConstructor) {
    Address p = addr("p");
    ContractCreation created;
    created.address = p;
    created.block_number = 40;
    created.tx_hash = keccak_hash("deploy");
    UpgradeEvent first = event(p, addr("A"), 40, 2);
    first.tx_hash = created.tx_hash;
    std::vector<UpgradeEvent> ev{first, event(p, addr("B"), 50)};
    auto c = build_version_chain(p, ev, created);
    ASSERT_EQ(c.entries.size(), 2u);
    EXPECT_EQ(c.entries[0].active_from, (ChainPosition{40, 0}));

    // different transaction: the event opens version 1 where it happened
    ev[0].tx_hash = keccak_hash("later");
    c = build_version_chain(p, ev, created);
    EXPECT_EQ(c.entries[0].active_from, (ChainPosition{40, 2}));
}

TEST(BuildVersionChain, ZeroImplementationIsKeptAndFlagged) {
    Address p = addr("p");
    std::vector<UpgradeEvent> ev{event(p, addr("A"), 1), event(p, Address{}, 2)};
    auto c = build_version_chain(p, ev);
    ASSERT_EQ(c.entries.size(), 2u);
    EXPECT_FALSE(c.entries[0].bricked);
    EXPECT_TRUE(c.entries[1].bricked);
}

TEST(BuildVersionChain, FixedImplementationSeedsVersionOne) {
    Address p = addr("clone");
    ContractCreation created;
    created.address = p;
    created.block_number = 9;
    auto c = build_version_chain(p, {}, created, addr("target"));
    ASSERT_EQ(c.entries.size(), 1u);
    EXPECT_EQ(c.entries[0].implementation, addr("target"));
    EXPECT_EQ(c.entries[0].active_from, (ChainPosition{9, 0}));
}

TEST(BuildVersionChain, MatchesRunLengthOracle) {
    std::mt19937_64 rng(7);
    Address p = addr("p");
    std::vector<Address> alphabet;
    for (int i = 0; i < 5; ++i) alphabet.push_back(addr("impl" + std::to_string(i)));

    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = rng() % 51;
        std::vector<UpgradeEvent> ev;
        std::vector<std::string> seq;
        std::uint64_t block = 1;
        for (std::size_t i = 0; i < n; ++i) {
            block += rng() % 3;
            const Address& a = alphabet[rng() % alphabet.size()];
            ev.push_back(event(p, a, block, i));
            seq.push_back(a.hex());
        }
        auto expected = oracle::run_length_segments(seq);
        auto chain = build_version_chain(p, ev);
        ASSERT_EQ(chain.entries.size(), expected.size());
        for (std::size_t k = 0; k < expected.size(); ++k) {
            const auto& v = chain.entries[k];
            ASSERT_EQ(v.version_number, k + 1);
            ASSERT_EQ(v.implementation.hex(), expected[k].implementation);
            ASSERT_EQ(v.active_from, ev[expected[k].first_event].position());
            ASSERT_EQ(v.noop_upgrades, expected[k].run_length - 1);
            if (k > 0) {
                ASSERT_LT(chain.entries[k - 1].active_from, v.active_from);
                ASSERT_NE(chain.entries[k - 1].implementation, v.implementation);
            }
        }
        ASSERT_EQ(to_json(chain).dump(), to_json(build_version_chain(p, ev)).dump());
    }
}

TEST(AttachActivity, SingleVersionTakesEverything) {
    Address p = addr("p");
    std::vector<UpgradeEvent> ev{event(p, addr("A"), 1)};
    std::vector<TxSummary> txs;
    for (int i = 0; i < 5; ++i) txs.push_back(tx_to(p, 10 + i));
    auto c = attach_activity(build_version_chain(p, ev), txs);
    EXPECT_EQ(c.entries[0].tx_count, 5u);
    EXPECT_EQ(c.entries[0].last_tx_timestamp, 14u * 12);
}

TEST(AttachActivity, SplitsAtVersionBoundary) {
    Address p = addr("p");
    std::vector<UpgradeEvent> ev{event(p, addr("A"), 1), event(p, addr("B"), 100)};
    std::vector<TxSummary> txs{tx_to(p, 99), tx_to(p, 101)};
    auto c = attach_activity(build_version_chain(p, ev), txs);
    EXPECT_EQ(c.entries[0].tx_count, 1u);
    EXPECT_EQ(c.entries[1].tx_count, 1u);
}

TEST(AttachActivity, BoundaryBlockGoesToNewVersion) {
    Address p = addr("p");
    std::vector<UpgradeEvent> ev{event(p, addr("A"), 1), event(p, addr("B"), 100, 7)};
    std::vector<TxSummary> txs{tx_to(p, 100)};
    auto c = attach_activity(build_version_chain(p, ev), txs);
    EXPECT_EQ(c.entries[0].tx_count, 0u);
    EXPECT_EQ(c.entries[1].tx_count, 1u);
}

TEST(AttachActivity, EarlyTransactionsAreUnattributed) {
    Address p = addr("p");
    std::vector<UpgradeEvent> ev{event(p, addr("A"), 50)};
    std::vector<TxSummary> txs{tx_to(p, 10), tx_to(p, 60)};
    auto c = attach_activity(build_version_chain(p, ev), txs);
    EXPECT_EQ(c.entries[0].tx_count, 1u);
    EXPECT_EQ(c.unattributed_tx_count, 1u);
}

TEST(AttachActivity, WrongRecipientIsContractViolation) {
    Address p = addr("p");
    std::vector<UpgradeEvent> ev{event(p, addr("A"), 1)};
    std::vector<TxSummary> txs{tx_to(addr("elsewhere"), 5)};
    EXPECT_THROW(attach_activity(build_version_chain(p, ev), txs), ContractViolation);
    txs[0].to.reset();
    EXPECT_THROW(attach_activity(build_version_chain(p, ev), txs), ContractViolation);
}

TEST(AttachActivity, ConservesTransactionCount) {
    std::mt19937_64 rng(11);
    Address p = addr("p");
    std::vector<UpgradeEvent> ev{event(p, addr("A"), 0), event(p, addr("B"), 250), event(p, addr("C"), 500, 3),
                                 event(p, addr("D"), 750)};
    auto chain = build_version_chain(p, ev);
    ASSERT_EQ(chain.entries.size(), 4u);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<TxSummary> txs;
        std::size_t n = trial == 0 ? 1000 : rng() % 60;
        std::vector<std::uint64_t> brute(4, 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t block = rng() % 1000;
            txs.push_back(tx_to(p, block, block + 1));
            brute[block >= 750 ? 3 : block >= 500 ? 2 : block >= 250 ? 1 : 0]++;
        }
        auto c = attach_activity(chain, txs);
        ASSERT_EQ(total_tx(c) + c.unattributed_tx_count, n);
        ASSERT_EQ(c.unattributed_tx_count, 0u);
        for (std::size_t k = 0; k < 4; ++k) ASSERT_EQ(c.entries[k].tx_count, brute[k]);
    }
}
