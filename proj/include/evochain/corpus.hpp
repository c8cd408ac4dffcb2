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

// Seeded synthetic chain corpora with a ground-truth manifest: which created
// contracts are proxies, of what kind, and which implementations each one
// moved through. Implementations come in families whose consecutive members
// differ by one mutation (added function, fixed finding, cheaper deployment,
// or a body-only edit) so every change category occurs.

#include <evochain/bytes.hpp>
#include <evochain/ingest.hpp>
#include <evochain/proxy_detect.hpp>
#include <evochain/upgrade_trace.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace evochain {

struct CorpusOptions {
    std::uint64_t seed = 42;
    std::size_t contracts = 100;
    std::size_t proxies = 40;
    std::size_t versions = 85;
};

struct ManifestEntry {
    Address address;
    std::string role;  // proxy | implementation | plain
    ProxyKind kind = ProxyKind::NotProxy;
    std::vector<Address> lineage;  // implementation per version, in order
};

struct SourceFixture {
    Address address;
    std::string contract_name;
    std::string source_text;
};

struct Corpus {
    std::uint64_t seed = 0;
    std::vector<ContractCreation> creations;
    std::vector<LogRecord> logs;
    std::vector<TxSummary> transactions;
    std::vector<VulnFinding> findings;
    std::vector<SourceFixture> sources;
    std::vector<ManifestEntry> manifest;

    std::size_t expected_proxies() const {
        return std::count_if(manifest.begin(), manifest.end(), [](const auto& m) { return m.role == "proxy"; });
    }
    std::size_t expected_versions() const {
        std::size_t n = 0;
        for (const auto& m : manifest) n += m.lineage.size();
        return n;
    }
};

namespace corpus_detail {

inline constexpr std::uint64_t genesis_timestamp = 1'600'000'000;
inline constexpr std::uint64_t block_time = 12;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
    bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
    std::uint8_t byte() { return static_cast<std::uint8_t>(engine_()); }

  private:
    std::mt19937_64 engine_;
};

struct FunctionTemplate {
    const char* name;
    const char* params;
};

inline constexpr FunctionTemplate function_vocabulary[] = {
    {"transfer", "address to, uint256 amount"},
    {"approve", "address spender, uint amount"},
    {"transferFrom", "address from, address to, uint256 amount"},
    {"mint", "address to, uint256 amount"},
    {"burn", "uint256 amount"},
    {"pause", ""},
    {"unpause", ""},
    {"setOwner", "address payable newOwner"},
    {"withdraw", "uint256 amount"},
    {"deposit", ""},
    {"setFee", "uint16 feeBps"},
    {"claim", "bytes32[] calldata proof"},
    {"setURI", "string memory uri"},
    {"rescue", "address token, uint256 amount"},
};

inline constexpr const char* vulnerability_categories[] = {
    "reentrancy", "arithmetic", "access_control", "unchecked_low_level_calls", "time_manipulation",
};

struct ImplSpec {
    std::vector<std::size_t> functions;      // indices into function_vocabulary
    std::map<std::size_t, int> body_variant;  // per function
    std::set<std::string> findings;
    std::uint64_t gas = 0;
    bool verified = true;
};

inline std::string render_source(const std::string& name, const ImplSpec& spec) {
    std::string s = "// SPDX-License-Identifier: MIT\npragma solidity ^0.8.19;\n\n";
    s += "/// @title " + name + "\ncontract " + name + " {\n";
    s += "    mapping(address => uint256) internal balances;\n    uint256 public totalSupply;\n    address public owner;\n\n";
    for (std::size_t f : spec.functions) {
        const auto& t = function_vocabulary[f];
        int v = spec.body_variant.at(f);
        s += "    function " + std::string(t.name) + "(" + t.params + ") public {\n";
        s += "        require(msg.sender != address(0), \"zero sender\"); // guard\n";
        s += "        uint256 fee = totalSupply / " + std::to_string(100 + v) + ";\n";
        s += "        balances[owner] += fee;\n";
        s += "    }\n\n";
    }
    s += "}\n";
    return s;
}

inline constexpr std::uint8_t safe_opcodes[] = {
    0x00, 0x01, 0x02, 0x03, 0x04, 0x10, 0x11, 0x14, 0x15, 0x16, 0x17, 0x19, 0x1b, 0x1c, 0x20, 0x30, 0x33,
    0x34, 0x35, 0x36, 0x37, 0x3d, 0x3e, 0x50, 0x51, 0x52, 0x54, 0x55, 0x56, 0x57, 0x5a, 0x5b, 0x80, 0x81,
    0x82, 0x90, 0x91, 0xa1, 0xf1, 0xf3, 0xfa, 0xfd, 0xfe,
};

// Random instructions with no DELEGATECALL; short pushes carry random data
// (which may contain 0xf4 bytes, harmlessly).
inline void filler(Rng& rng, Bytes& code, std::size_t instructions) {
    for (std::size_t i = 0; i < instructions; ++i) {
        if (rng.chance(0.2)) {
            std::size_t width = rng.between(1, 4);
            code.push_back(static_cast<std::uint8_t>(opcode::push1 + width - 1));
            for (std::size_t k = 0; k < width; ++k) code.push_back(rng.chance(0.3) ? opcode::delegatecall : rng.byte());
        } else {
            code.push_back(safe_opcodes[rng.below(std::size(safe_opcodes))]);
        }
    }
}

inline void push32(Bytes& code, const Hash32& value) {
    code.push_back(opcode::push32);
    code.insert(code.end(), value.bytes.begin(), value.bytes.end());
}

inline void delegatecall(Bytes& code) {
    code.push_back(0x5a);  // GAS
    code.push_back(opcode::delegatecall);
    code.push_back(0x3d);
}

struct Builder {
    Corpus corpus;
    Rng rng;
    std::uint64_t tx_counter = 0;
    std::map<std::uint64_t, std::uint64_t> next_log_index;

    explicit Builder(std::uint64_t seed) : rng(seed) { corpus.seed = seed; }

    Address address(const std::string& label) {
        return address_from_word(keccak_hash("evochain-corpus:" + std::to_string(corpus.seed) + ":" + label));
    }

    Hash32 tx_hash() { return keccak_hash("tx:" + std::to_string(corpus.seed) + ":" + std::to_string(tx_counter++)); }

    static std::uint64_t timestamp(std::uint64_t block) { return genesis_timestamp + block * block_time; }

    ContractCreation& create(const Address& a, Bytes code, std::uint64_t block, std::optional<std::uint64_t> gas) {
        ContractCreation c;
        c.address = a;
        c.creator = address("deployer");
        c.runtime_bytecode = std::move(code);
        c.block_number = block;
        c.block_timestamp = timestamp(block);
        c.tx_hash = tx_hash();
        c.gas_used = gas;
        corpus.creations.push_back(c);
        corpus.transactions.push_back({std::nullopt, block, c.block_timestamp, c.tx_hash});
        return corpus.creations.back();
    }

    void log(const Address& emitter, std::vector<Hash32> topics, Bytes data, std::uint64_t block, const Hash32& tx) {
        LogRecord l;
        l.address = emitter;
        l.topics = std::move(topics);
        l.data = std::move(data);
        l.block_number = block;
        l.log_index = next_log_index[block]++;
        l.tx_hash = tx;
        corpus.logs.push_back(std::move(l));
    }

    void upgrade_event(ProxyKind kind, const Address& proxy, const Address& old_impl, const Address& new_impl,
                       std::uint64_t block, const Hash32& tx) {
        switch (kind) {
            case ProxyKind::Eip1967:
            case ProxyKind::UupsLike:
                log(proxy, {upgraded_topic(), word_from_address(new_impl)}, {}, block, tx);
                break;
            case ProxyKind::BeaconLike:
                log(proxy, {event_topic("BeaconUpgraded(address)"), word_from_address(new_impl)}, {}, block, tx);
                break;
            case ProxyKind::DelegatecallGeneric: {
                Bytes data;
                auto w0 = word_from_address(old_impl), w1 = word_from_address(new_impl);
                data.insert(data.end(), w0.bytes.begin(), w0.bytes.end());
                data.insert(data.end(), w1.bytes.begin(), w1.bytes.end());
                log(proxy, {event_topic("ImplementationUpdated(address,address)")}, data, block, tx);
                break;
            }
            default: break;
        }
    }

    void tx_to(const Address& to, std::uint64_t block) {
        corpus.transactions.push_back({to, block, timestamp(block), tx_hash()});
    }

    Bytes proxy_code(ProxyKind kind, const std::optional<Address>& clone_target) {
        static constexpr SlotConstants slots = slot_constants();
        Bytes code;
        switch (kind) {
            case ProxyKind::MinimalEip1167: return eip1167_runtime_code(*clone_target);
            case ProxyKind::Eip1967:
                filler(rng, code, rng.between(5, 40));
                if (rng.chance(0.35)) push32(code, slots.admin_slot);
                push32(code, slots.implementation_slot);
                code.push_back(0x54);
                filler(rng, code, rng.between(5, 40));
                delegatecall(code);
                break;
            case ProxyKind::BeaconLike:
                filler(rng, code, rng.between(5, 40));
                push32(code, slots.beacon_slot);
                code.push_back(0x54);
                filler(rng, code, rng.between(5, 40));
                delegatecall(code);
                break;
            case ProxyKind::UupsLike:
                // slot constant without a delegatecall: only the event marks it
                filler(rng, code, rng.between(5, 40));
                if (rng.chance(0.5)) push32(code, slots.implementation_slot);
                filler(rng, code, rng.between(5, 40));
                break;
            case ProxyKind::DelegatecallGeneric:
                filler(rng, code, rng.between(5, 40));
                delegatecall(code);
                filler(rng, code, rng.between(5, 40));
                break;
            case ProxyKind::NotProxy: break;
        }
        filler(rng, code, rng.between(0, 10));
        return code;
    }
};

}  // namespace corpus_detail

inline Corpus generate_corpus(const CorpusOptions& options) {
    using namespace corpus_detail;
    if (options.proxies > options.contracts) throw ValidationError("more proxies than contracts");
    const std::size_t non_proxies = options.contracts - options.proxies;
    const std::size_t plain_count = std::min<std::size_t>(non_proxies, std::max<std::size_t>(1, non_proxies / 6));
    const std::size_t pool_size = non_proxies - plain_count;
    if (options.proxies > 0 && pool_size < 2) throw ValidationError("too few contracts for an implementation pool");
    if (options.versions < options.proxies) throw ValidationError("need at least one version per proxy");

    Builder b(options.seed);
    Rng& rng = b.rng;

    // Proxy kinds in fixed proportions, order shuffled by seed.
    std::vector<ProxyKind> kinds;
    auto share = [&](std::size_t percent) { return options.proxies * percent / 100; };
    kinds.insert(kinds.end(), share(20), ProxyKind::MinimalEip1167);
    kinds.insert(kinds.end(), share(20), ProxyKind::UupsLike);
    kinds.insert(kinds.end(), share(15), ProxyKind::DelegatecallGeneric);
    kinds.insert(kinds.end(), share(15), ProxyKind::BeaconLike);
    while (kinds.size() < options.proxies) kinds.push_back(ProxyKind::Eip1967);
    for (std::size_t i = kinds.size(); i > 1; --i) std::swap(kinds[i - 1], kinds[rng.below(i)]);

    // Version counts: clones have exactly one; the rest share the remainder.
    std::vector<std::size_t> counts(options.proxies, 1);
    std::vector<std::size_t> upgradeable;
    for (std::size_t i = 0; i < options.proxies; ++i)
        if (kinds[i] != ProxyKind::MinimalEip1167) upgradeable.push_back(i);
    std::size_t remaining = options.versions - options.proxies;
    if (remaining > 0 && upgradeable.empty()) throw ValidationError("no upgradeable proxies to carry extra versions");
    while (remaining > 0) {
        std::size_t i = upgradeable[rng.below(upgradeable.size())];
        if (counts[i] >= 8 && rng.chance(0.9)) continue;
        ++counts[i];
        --remaining;
    }

    // Implementation families, created first (blocks 100..).
    constexpr std::size_t family_size = 5;
    std::vector<std::vector<std::size_t>> families;  // indices into impl arrays
    std::vector<Address> impls;
    std::vector<ImplSpec> specs;
    std::uint64_t block = 100;
    for (std::size_t i = 0; i < pool_size; ++i) {
        std::size_t member = i % family_size;
        if (member == 0) families.emplace_back();
        ImplSpec spec;
        if (member == 0) {
            std::vector<std::size_t> all(std::size(function_vocabulary));
            for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
            for (std::size_t k = all.size(); k > 1; --k) std::swap(all[k - 1], all[rng.below(k)]);
            spec.functions.assign(all.begin(), all.begin() + static_cast<long>(rng.between(3, 6)));
            for (std::size_t f : spec.functions) spec.body_variant[f] = 0;
            for (const char* c : vulnerability_categories)
                if (rng.chance(0.3)) spec.findings.insert(c);
            spec.gas = rng.between(800'000, 3'000'000);
        } else {
            spec = specs[families.back().back()];
            switch (rng.below(4)) {
                case 0: {  // feature: add an unused function
                    std::vector<std::size_t> unused;
                    for (std::size_t k = 0; k < std::size(function_vocabulary); ++k)
                        if (std::find(spec.functions.begin(), spec.functions.end(), k) == spec.functions.end())
                            unused.push_back(k);
                    if (!unused.empty()) {
                        std::size_t f = unused[rng.below(unused.size())];
                        spec.functions.push_back(f);
                        spec.body_variant[f] = 0;
                    }
                    spec.gas = spec.gas + spec.gas / 20;
                    break;
                }
                case 1:  // vulnerability fix
                    if (!spec.findings.empty()) spec.findings.erase(std::next(spec.findings.begin(), rng.below(spec.findings.size())));
                    ++spec.body_variant[spec.functions.front()];
                    break;
                case 2:  // gas optimization, 10-20% cheaper
                    spec.gas = spec.gas - spec.gas * rng.between(10, 20) / 100;
                    ++spec.body_variant[spec.functions.back()];
                    break;
                default:  // body-only edit
                    ++spec.body_variant[spec.functions[rng.below(spec.functions.size())]];
                    spec.gas = spec.gas + spec.gas / 100;
                    break;
            }
        }
        spec.verified = !rng.chance(0.08);
        Address a = b.address("impl:" + std::to_string(i));
        Bytes code;
        filler(rng, code, rng.between(20, 80));
        if (rng.chance(0.3)) push32(code, keccak_hash("const:" + std::to_string(i)));
        b.create(a, std::move(code), block, spec.gas);
        block += rng.between(1, 3);
        families.back().push_back(impls.size());
        impls.push_back(a);
        specs.push_back(spec);
        b.corpus.manifest.push_back({a, "implementation", ProxyKind::NotProxy, {}});
    }
    for (std::size_t i = 0; i < impls.size(); ++i) {
        std::size_t family = i / family_size, member = i % family_size;
        std::string name = "Impl" + std::to_string(family) + "V" + std::to_string(member);
        if (specs[i].verified) b.corpus.sources.push_back({impls[i], name, render_source(name, specs[i])});
        for (const auto& c : specs[i].findings) b.corpus.findings.push_back({impls[i], "synthetic", c, Severity::medium, name + ".sol:1"});
    }

    // Plain contracts, including tricky-but-innocent bytecode.
    static constexpr SlotConstants slots = slot_constants();
    for (std::size_t i = 0; i < plain_count; ++i) {
        Address a = b.address("plain:" + std::to_string(i));
        Bytes code;
        filler(rng, code, rng.between(10, 60));
        if (i % 3 == 0) push32(code, slots.implementation_slot);
        if (i % 3 == 1) code.insert(code.end(), {opcode::push1, opcode::delegatecall});
        if (i % 3 == 2) code.insert(code.end(), {0x7f, 0xf4, 0xf4});  // truncated PUSH32
        b.create(a, std::move(code), block, rng.between(100'000, 400'000));
        block += 1;
        if (rng.chance(0.5)) b.tx_to(a, block + rng.between(0, 500));
        b.corpus.manifest.push_back({a, "plain", ProxyKind::NotProxy, {}});
    }

    // Proxies and their upgrade histories.
    const Hash32 transfer_topic = event_topic("Transfer(address,address,uint256)");
    bool malformed_done = false;
    for (std::size_t i = 0; i < options.proxies; ++i) {
        ProxyKind kind = kinds[i];
        Address proxy = b.address("proxy:" + std::to_string(i));
        const auto& family = families[rng.below(families.size())];

        std::vector<Address> lineage;
        std::size_t member = rng.below(family.size());
        for (std::size_t v = 0; v < counts[i]; ++v) {
            if (v > 0) {
                std::size_t next = member + 1 < family.size() && rng.chance(0.7) ? member + 1 : rng.below(family.size());
                if (next == member) next = (member + 1) % family.size();
                member = next;
            }
            lineage.push_back(impls[family[member]]);
        }

        std::uint64_t created = 1000 + 40 * i;
        const std::optional<Address> target = kind == ProxyKind::MinimalEip1167 ? std::optional(lineage.front()) : std::nullopt;
        ContractCreation c = b.create(proxy, b.proxy_code(kind, target), created, rng.between(200'000, 900'000));

        if (kind != ProxyKind::MinimalEip1167) {
            // constructor-emitted first event for slot-based proxies
            bool in_constructor = kind == ProxyKind::Eip1967 || kind == ProxyKind::BeaconLike;
            std::uint64_t at = created;
            Address previous{};
            for (std::size_t v = 0; v < lineage.size(); ++v) {
                Hash32 tx = (v == 0 && in_constructor) ? c.tx_hash : b.tx_hash();
                if (v > 0 || !in_constructor) at += rng.between(1, 4);
                b.upgrade_event(kind, proxy, previous, lineage[v], at, tx);
                if (rng.chance(0.2)) b.upgrade_event(kind, proxy, lineage[v], lineage[v], at + 1, b.tx_hash());  // no-op
                previous = lineage[v];
                at += 1;
            }
            if (kind == ProxyKind::Eip1967 && !malformed_done) {
                b.log(proxy, {upgraded_topic()}, {}, at + 1, b.tx_hash());  // no implementation argument
                malformed_done = true;
            }
        }
        for (std::size_t t = rng.between(0, 30); t-- > 0;) b.tx_to(proxy, created + rng.between(0, 40));
        if (rng.chance(0.4))
            b.log(proxy, {transfer_topic, word_from_address(proxy), word_from_address(lineage.front())}, Bytes(32, 1),
                  created + 2, b.tx_hash());
        b.corpus.manifest.push_back({proxy, "proxy", kind, lineage});
    }
    return std::move(b.corpus);
}

// Two proxies, five versions: an EIP-1967 proxy moving A -> B -> A and a
// UUPS-style proxy moving C -> D.
inline Corpus small_fixture() {
    using namespace corpus_detail;
    Builder b(7);
    static constexpr SlotConstants slots = slot_constants();

    const Address A = b.address("A"), B = b.address("B"), C = b.address("C"), D = b.address("D");
    const Address p1 = b.address("proxy-1"), p2 = b.address("proxy-2");

    ImplSpec base;
    base.functions = {0, 1};
    base.body_variant = {{0, 0}, {1, 0}};
    ImplSpec with_pause = base;
    with_pause.functions.push_back(5);
    with_pause.body_variant[5] = 0;
    ImplSpec tweaked = base;
    tweaked.body_variant[0] = 3;

    b.create(A, {0x60, 0x01, 0x00}, 10, 1'000'000);
    b.create(B, {0x60, 0x02, 0x00}, 11, 1'050'000);
    b.create(C, {0x60, 0x03, 0x00}, 12, 1'000'000);
    b.create(D, {0x60, 0x04, 0x00}, 13, 900'000);
    b.corpus.sources = {{A, "TokenA", render_source("TokenA", base)},
                        {B, "TokenB", render_source("TokenB", with_pause)},
                        {C, "VaultC", render_source("VaultC", base)},
                        {D, "VaultD", render_source("VaultD", tweaked)}};
    b.corpus.findings = {{A, "slither", "reentrancy", Severity::high, "TokenA.sol:12"},
                         {C, "mythril", "reentrancy", Severity::high, "VaultC.sol:9"},
                         {C, "mythril", "arithmetic", Severity::low, "VaultC.sol:14"},
                         {D, "mythril", "arithmetic", Severity::low, "VaultD.sol:14"}};

    Bytes code1;
    push32(code1, slots.implementation_slot);
    code1.push_back(0x54);
    delegatecall(code1);
    ContractCreation c1 = b.create(p1, code1, 100, 400'000);
    b.upgrade_event(ProxyKind::Eip1967, p1, {}, A, 100, c1.tx_hash);
    b.upgrade_event(ProxyKind::Eip1967, p1, A, B, 200, b.tx_hash());
    b.upgrade_event(ProxyKind::Eip1967, p1, B, A, 300, b.tx_hash());
    for (std::uint64_t blk : {150, 199, 250, 301, 302}) b.tx_to(p1, blk);

    ContractCreation c2 = b.create(p2, {0x60, 0x00, 0x35, 0x00}, 120, 300'000);
    (void)c2;
    b.upgrade_event(ProxyKind::UupsLike, p2, {}, C, 121, b.tx_hash());
    b.upgrade_event(ProxyKind::UupsLike, p2, C, D, 400, b.tx_hash());
    for (std::uint64_t blk : {130, 401}) b.tx_to(p2, blk);

    for (const auto& a : {A, B, C, D}) b.corpus.manifest.push_back({a, "implementation", ProxyKind::NotProxy, {}});
    b.corpus.manifest.push_back({p1, "proxy", ProxyKind::Eip1967, {A, B, A}});
    b.corpus.manifest.push_back({p2, "proxy", ProxyKind::UupsLike, {C, D}});
    return std::move(b.corpus);
}

inline json manifest_json(const Corpus& c) {
    json contracts = json::array();
    std::map<std::string, std::size_t> by_type;
    for (const auto& m : c.manifest) {
        json lineage = json::array();
        for (const auto& a : m.lineage) lineage.push_back(a.hex());
        contracts.push_back({{"address", m.address.hex()},
                             {"role", m.role},
                             {"kind", to_string(m.kind)},
                             {"versions", m.lineage.size()},
                             {"lineage", lineage}});
        if (m.role == "proxy") ++by_type[to_string(m.kind)];
    }
    return {{"seed", c.seed},
            {"contracts", contracts},
            {"expected", {{"contracts", c.creations.size()},
                          {"proxies", c.expected_proxies()},
                          {"versions", c.expected_versions()},
                          {"by_type", by_type}}}};
}

// <dir>/{logs,creations,transactions,vuln_findings}.ndjson, <dir>/sources/<address>.json, <dir>/manifest.json
inline void write_corpus(const Corpus& c, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "sources");
    auto write_lines = [&](const std::string& name, const auto& records) {
        std::ofstream out(dir / name, std::ios::trunc);
        for (const auto& r : records) out << to_json(r).dump() << "\n";
        if (!out) throw IoError("cannot write " + (dir / name).string());
    };
    write_lines("logs.ndjson", c.logs);
    write_lines("creations.ndjson", c.creations);
    write_lines("transactions.ndjson", c.transactions);
    write_lines("vuln_findings.ndjson", c.findings);
    for (const auto& s : c.sources) {
        std::ofstream out(dir / "sources" / (s.address.hex() + ".json"), std::ios::trunc);
        out << json{{"address", s.address.hex()},
                    {"verified", true},
                    {"source_text", s.source_text},
                    {"compiler_version", "v0.8.19+commit.7dd6d404"},
                    {"contract_name", s.contract_name},
                    {"file_count", 1}}
                   .dump(2)
            << "\n";
    }
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    out << manifest_json(c).dump(2) << "\n";
}

inline Dataset to_dataset(const Corpus& c) {
    Dataset ds;
    for (const auto& r : c.logs) ds.add(r);
    for (const auto& r : c.creations) ds.add(r);
    for (const auto& r : c.transactions) ds.add(r);
    for (const auto& r : c.findings) ds.add(r);
    return ds;
}

}  // namespace evochain
