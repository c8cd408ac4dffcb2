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

// Acceptance harness. One line per criterion; exit status is the number of
// failed criteria.

#include "fixture_support.hpp"
#include "oracle/reference_disassembler.hpp"
#include "oracle/reference_keccak.hpp"
#include "oracle/segmentation.hpp"

#include <evochain/api_service.hpp>
#include <evochain/change_classify.hpp>
#include <evochain/corpus.hpp>
#include <evochain/pipeline.hpp>
#include <evochain/proxy_detect.hpp>
#include <evochain/upgrade_trace.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>

namespace {

using namespace evochain;
using namespace testing_support;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Empty string means pass.
using Check = std::function<std::string()>;

int failures = 0;

void criterion(const std::string& name, double budget_seconds, const Check& check) {
    auto start = Clock::now();
    std::string problem;
    try {
        problem = check();
    } catch (const std::exception& e) {
        problem = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (problem.empty() && budget_seconds > 0 && secs >= budget_seconds)
        problem = "took " + std::to_string(secs) + " s, budget " + std::to_string(budget_seconds) + " s";
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
    if (problem.empty()) {
        std::cout << "[PASS] " << name << " (" << timing << ")\n";
    } else {
        ++failures;
        std::cout << "[FAIL] " << name << " (" << timing << "): " << problem << "\n";
    }
    std::cout.flush();
}

std::string check_constants() {
    SlotConstants s = slot_constants();
    const std::pair<std::string, std::string> pairs[] = {
        {s.implementation_slot.hex(), oracle::hex(oracle::minus_one(oracle::keccak256("eip1967.proxy.implementation")))},
        {s.admin_slot.hex(), oracle::hex(oracle::minus_one(oracle::keccak256("eip1967.proxy.admin")))},
        {s.beacon_slot.hex(), oracle::hex(oracle::minus_one(oracle::keccak256("eip1967.proxy.beacon")))},
        {upgraded_topic().hex(), oracle::hex(oracle::keccak256("Upgraded(address)"))},
    };
    for (const auto& [got, want] : pairs)
        if (got != want) return got + " != " + want;
    return {};
}

std::string check_detection() {
    Corpus c = generate_corpus({});
    if (c.creations.size() != 100) return "corpus has " + std::to_string(c.creations.size()) + " contracts";
    std::map<Address, std::vector<LogRecord>> logs;
    for (const auto& l : c.logs) logs[l.address].push_back(l);
    std::map<Address, ProxyKind> truth;
    for (const auto& m : c.manifest) truth[m.address] = m.role == "proxy" ? m.kind : ProxyKind::NotProxy;
    std::size_t agree = 0;
    std::string first_miss;
    for (const auto& cr : c.creations) {
        ProxyKind got = classify_proxy(scan_bytecode(cr.runtime_bytecode), logs[cr.address]).kind;
        if (got == truth.at(cr.address)) {
            ++agree;
        } else if (first_miss.empty()) {
            first_miss = cr.address.hex() + " classified " + to_string(got) + ", expected " + to_string(truth.at(cr.address));
        }
    }
    if (agree != c.creations.size())
        return std::to_string(agree) + "/" + std::to_string(c.creations.size()) + " agree; " + first_miss;
    return {};
}

std::string check_disassembly() {
    std::mt19937_64 rng(20260101);
    for (int i = 0; i < 10000; ++i) {
        std::vector<std::uint8_t> code(rng() % 256);
        for (auto& b : code) {
            auto r = rng() % 8;
            b = r < 2 ? static_cast<std::uint8_t>(0x60 + rng() % 32) : r < 4 ? 0xf4 : static_cast<std::uint8_t>(rng());
        }
        if (scan_bytecode(code).delegatecall_offsets != oracle::delegatecall_offsets(code))
            return "disagreement on input " + to_hex(code);
    }
    return {};
}

std::string check_lineage() {
    std::mt19937_64 rng(99);
    Address p = addr("acceptance-proxy");
    std::vector<Address> alphabet;
    for (int i = 0; i < 5; ++i) alphabet.push_back(addr("acceptance-impl" + std::to_string(i)));

    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<UpgradeEvent> ev;
        std::vector<std::string> seq;
        std::uint64_t block = 1;
        for (std::size_t i = 0, n = rng() % 51; i < n; ++i) {
            block += rng() % 3;
            const Address& a = alphabet[rng() % 5];
            ev.push_back({p, a, block, i, keccak_hash("ev" + std::to_string(trial) + ":" + std::to_string(i)), "Upgraded"});
            seq.push_back(a.hex());
        }
        auto expected = oracle::run_length_segments(seq);
        auto chain = build_version_chain(p, ev);
        if (chain.entries.size() != expected.size()) return "trial " + std::to_string(trial) + ": version count";
        for (std::size_t k = 0; k < expected.size(); ++k) {
            const auto& v = chain.entries[k];
            if (v.version_number != k + 1 || v.implementation.hex() != expected[k].implementation ||
                v.active_from != ev[expected[k].first_event].position())
                return "trial " + std::to_string(trial) + ": version " + std::to_string(k + 1) + " differs";
        }
    }

    // conservation: every transaction lands in exactly one version or is unattributed
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<UpgradeEvent> ev;
        std::uint64_t block = rng() % 50;
        for (std::size_t i = 0, n = 1 + rng() % 8; i < n; ++i) {
            block += 1 + rng() % 100;
            ev.push_back({p, alphabet[rng() % 5], block, 0, keccak_hash("c" + std::to_string(i)), "Upgraded"});
        }
        auto chain = build_version_chain(p, ev);
        std::vector<TxSummary> txs;
        std::size_t n = rng() % 80;
        std::uint64_t early = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t b = rng() % (block + 50);
            txs.push_back({p, b, b * 12, keccak_hash("tx" + std::to_string(trial) + ":" + std::to_string(i))});
            if (b < ev.front().block_number) ++early;
        }
        auto attached = attach_activity(chain, txs);
        std::uint64_t total = attached.unattributed_tx_count;
        for (const auto& v : attached.entries) total += v.tx_count;
        if (total != n || attached.unattributed_tx_count != early)
            return "conservation trial " + std::to_string(trial) + ": " + std::to_string(total) + " of " +
                   std::to_string(n);
    }
    return {};
}

std::string check_classification() {
    auto describe = [](const ChangeReport& r) {
        std::string out;
        for (auto c : r.categories) out += std::string(to_string(c)) + " ";
        for (const auto& e : r.evidence) out += e + " ";
        return out;
    };
    auto cats = [](const ChangeReport& r) {
        std::vector<std::string> out;
        for (auto c : r.categories) out.push_back(to_string(c));
        return out;
    };
    VulnFinding reentrancy;
    reentrancy.address = addr("acceptance-v1");
    reentrancy.detector = "slither";
    reentrancy.category = "reentrancy";
    reentrancy.severity = Severity::high;
    reentrancy.source_location = "Vault.sol:12";
    std::vector<VulnFinding> old_findings{reentrancy};

    auto fix = classify_change({}, old_findings, {}, std::nullopt, std::nullopt);
    if (cats(fix) != std::vector<std::string>{"VulnerabilityFix"} || fix.evidence != std::vector<std::string>{"fixed:reentrancy"})
        return "vulnerability-fix fixture gave " + describe(fix);

    const std::string v1 = "contract Vault {\n    function deposit() public payable {\n        total += msg.value;\n    }\n}\n";
    const std::string v2 = "contract Vault {\n    function deposit() public payable {\n        total += msg.value;\n    }\n"
                           "    function pause() public {\n        paused = true;\n    }\n}\n";
    SourceDiff d = diff_sources(v1, v2);
    auto feature = classify_change(d, {}, {}, std::nullopt, std::nullopt);
    if (d.added_functions != std::set<std::string>{"pause()"} ||
        cats(feature) != std::vector<std::string>{"FeatureModification"})
        return "feature fixture gave " + describe(feature);

    auto gas = classify_change({}, {}, {}, 1000000, 900000, 0.05);
    if (cats(gas) != std::vector<std::string>{"GasOptimization"}) return "gas fixture gave " + describe(gas);
    return {};
}

std::string check_round_trip() {
    std::mt19937_64 rng(5150);
    const char* types[] = {"Eip1967", "UupsLike", "BeaconLike", "MinimalEip1167", "DelegatecallGeneric"};
    GraphStore s;
    std::size_t nodes = 0;
    for (int p = 0; nodes < 200; ++p) {
        Address pa = addr("acceptance-store" + std::to_string(p));
        ProxyNode pn;
        pn.address = pa;
        pn.proxy_type = types[rng() % 5];
        pn.created_at = rng() % 100000;
        s.upsert_proxy(pn);
        ++nodes;
        for (std::uint32_t v = 1, n = rng() % 6; v <= n && nodes < 200; ++v, ++nodes) {
            VersionNode vn;
            vn.key = {pa, v};
            vn.contract_address = addr("acceptance-impl" + std::to_string(rng() % 40));
            if (rng() % 2) vn.creation_timestamp = rng() % 1000000;
            if (rng() % 2) vn.last_tx_timestamp = rng() % 1000000;
            vn.total_transactions = rng() % 500;
            if (rng() % 3 == 0) vn.vulnerabilities = {"reentrancy"};
            s.upsert_version(vn, pa);
            if (v > 1) {
                ObservedChangeEdge e;
                e.from = {pa, v - 1};
                e.to = {pa, v};
                e.categories = {rng() % 2 ? "FeatureModification" : "Other"};
                s.upsert_change(e);
            }
        }
    }
    TempDir dir;
    s.snapshot(dir / "store.snap");
    GraphStore loaded = GraphStore::load(dir / "store.snap");
    if (!(loaded.stats() == s.stats())) return "stats differ after load";
    if (loaded.serialize() != s.serialize()) return "serialization differs after load";
    ProxyPage all = s.find({}, {max_page_limit, 0});
    if (all.total + s.stats().version_count != 200) return "store does not hold 200 nodes";
    for (const auto& p : all.items) {
        if (lineage_json(s.get_lineage(p.address)).dump() != lineage_json(loaded.get_lineage(p.address)).dump())
            return "lineage differs for " + p.address.hex();
        ProxyFilter by_type;
        by_type.proxy_type = p.proxy_type;
        ProxyPage a = s.find(by_type, {max_page_limit, 0}), b = loaded.find(by_type, {max_page_limit, 0});
        if (a.total != b.total || a.items != b.items)
            return "find differs for type " + p.proxy_type;
    }

    const std::string text = s.serialize();
    for (std::size_t i = 0; i < text.size(); ++i) {
        std::string bad = text;
        bad[i] = static_cast<char>(bad[i] ^ (1 << (i % 8)));
        try {
            GraphStore::deserialize(bad);
            return "corruption at byte " + std::to_string(i) + " went undetected";
        } catch (const CorruptionError&) {
        }
    }
    return {};
}

struct Shell {
    int status;
    std::string out;
};

Shell cli(const std::string& args) {
    Shell r{-1, {}};
    FILE* p = ::popen((std::string(EVOCHAIN_CLI) + " " + args + " 2>&1").c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = ::pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string check_determinism() {
    TempDir dir;
    const std::string corpus = (dir / "corpus").string();
    Shell gen = cli("gen-corpus --out " + corpus);
    if (gen.status != 0) return "gen-corpus failed: " + gen.out;
    std::string digests[2];
    for (int run = 0; run < 2; ++run) {
        const std::string ds = (dir / ("dataset" + std::to_string(run))).string();
        const std::string snap = (dir / ("graph" + std::to_string(run) + ".ndjson")).string();
        Shell in = cli("ingest --logs " + corpus + "/logs.ndjson --creations " + corpus + "/creations.ndjson --transactions " +
                       corpus + "/transactions.ndjson --vulns " + corpus + "/vuln_findings.ndjson --out " + ds);
        if (in.status != 0) return "ingest failed: " + in.out;
        Shell b = cli("build --json --jobs " + std::to_string(run == 0 ? 1 : 8) + " --dataset " + ds + " --snapshot " +
                      snap + " --sources " + corpus + "/sources");
        if (b.status != 0) return "build failed: " + b.out;
        digests[run] = nlohmann::json::parse(b.out)["snapshot_digest"];
        if (digests[run] != GraphStore::load(snap).digest().hex()) return "reported digest does not match the snapshot";
    }
    if (digests[0] != digests[1]) return digests[0] + " != " + digests[1];
    if (read_text(dir / "graph0.ndjson") != read_text(dir / "graph1.ndjson")) return "snapshot bytes differ";
    return {};
}

std::string check_api() {
    FixtureGraph g;
    ApiService api(g.store, g.explorer, std::string("*"));
    std::map<std::string, std::unique_ptr<SchemaValidator>> schemas;
    auto validate = [&](const std::string& name, const nlohmann::json& body) {
        auto& v = schemas[name];
        if (!v) v = std::make_unique<SchemaValidator>(name);
        return v->validate(body);
    };
    auto get = [&](const std::string& path, std::map<std::string, std::string> query = {}) {
        return api.handle({"GET", path, std::move(query)});
    };

    const Hash32 before = g.store->digest();
    const std::string p1 = g.proxy(0).address.hex(), p2 = g.proxy(1).address.hex();
    const std::pair<std::string, std::string> routes[] = {
        {"/api/v1/proxies", "proxies.schema.json"},
        {"/api/v1/contracts/" + p1 + "/lineage", "lineage.schema.json"},
        {"/api/v1/contracts/" + p2 + "/lineage", "lineage.schema.json"},
        {"/api/v1/contracts/" + g.proxy(0).lineage[0].hex() + "/source", "source.schema.json"},
        {"/api/v1/graph/" + p1, "graph.schema.json"},
        {"/api/v1/stats", "stats.schema.json"},
        {"/api/v1/contracts/" + addr("nobody").hex() + "/lineage", "error.schema.json"},
        {"/api/v1/graph/0x12", "error.schema.json"},
    };
    for (const auto& [path, schema] : routes) {
        ApiResponse r = get(path);
        if (auto why = validate(schema, r.body); !why.empty()) return path + ": " + why;
    }
    ApiResponse deep = get("/api/v1/graph/" + p1, {{"depth", "3"}});
    if (auto why = validate("graph.schema.json", deep.body); !why.empty()) return "graph depth 3: " + why;

    for (const auto& p : {p1, p2}) {
        ApiResponse r = get("/api/v1/contracts/" + p + "/lineage");
        if (r.body.dump() != lineage_json(g.store->get_lineage(normalize_address(p))).dump())
            return "lineage ordering differs from the store for " + p;
    }

    std::mt19937_64 rng(31337);
    const char* methods[] = {"GET", "GET", "POST", "PUT", "DELETE", "OPTIONS"};
    const char* keys[] = {"limit", "offset", "type", "q", "depth", "min_versions", "vulnerability", "x"};
    const char* values[] = {"0", "2", "501", "-1", "Eip1967", "0x", "reentrancy", "%00", "999999999999999999999"};
    const std::string targets[] = {p1, p2, "0xnothex", "", addr("ghost").hex()};
    for (int i = 0; i < 2000; ++i) {
        const std::string& t = targets[rng() % 5];
        const std::string paths[] = {"/api/v1/proxies", "/api/v1/contracts/" + t + "/lineage",
                                     "/api/v1/contracts/" + t + "/source", "/api/v1/graph/" + t, "/api/v1/stats",
                                     "/api/v1/" + t};
        ApiRequest req{methods[rng() % 6], paths[rng() % 6], {}};
        for (int k = rng() % 4; k > 0; --k) req.query[keys[rng() % 8]] = values[rng() % 9];
        ApiResponse r = api.handle(req);
        if (r.status >= 400)
            if (auto why = validate("error.schema.json", r.body); !why.empty()) return req.path + ": " + why;
    }
    if (g.store->digest() != before) return "store digest changed under request fuzzing";
    return {};
}

}  // namespace

int main() {
    criterion("slot and topic constants match the keccak oracle", 1.0, check_constants);
    criterion("detection agrees with the 100-contract corpus manifest", 5.0, check_detection);
    criterion("delegatecall offsets agree with the reference disassembler on 10000 inputs", 0, check_disassembly);
    criterion("version chains match run-length segmentation; transaction counts conserved", 0, check_lineage);
    criterion("classify_change fixtures: vulnerability fix, feature, gas -10%", 0, check_classification);
    criterion("200-node store round-trips and detects every corrupted byte", 0, check_round_trip);
    criterion("two ingest+build runs give identical snapshot digests", 30.0, check_determinism);
    criterion("API responses conform to schemas, keep store ordering, never mutate the store", 0, check_api);
    std::cout << (failures ? std::to_string(failures) + " criterion(s) failed" : std::string("all criteria passed")) << "\n";
    return failures;
}
