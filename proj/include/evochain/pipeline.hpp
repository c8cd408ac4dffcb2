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

// End-to-end build: detect proxies among created contracts, trace each
// proxy's versions, classify every consecutive version pair and populate a
// GraphStore. Work is spread over a bounded worker pool; results are
// collected by index so the output never depends on scheduling.

#include <evochain/change_classify.hpp>
#include <evochain/explorer_client.hpp>
#include <evochain/graph_store.hpp>
#include <evochain/ingest.hpp>
#include <evochain/proxy_detect.hpp>
#include <evochain/upgrade_trace.hpp>

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

namespace evochain {

template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

struct BuildOptions {
    SignatureTable signatures = SignatureTable::defaults();
    double gas_threshold = default_gas_threshold;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
};

struct BuildReport {
    std::size_t contracts_scanned = 0;
    std::size_t proxies = 0;
    std::size_t versions = 0;
    std::size_t change_edges = 0;
    std::size_t malformed_events = 0;
    std::map<Address, ProxyClassification> classifications;
};

inline json to_json(const BuildReport& r) {
    std::map<std::string, std::size_t> kinds;
    for (const auto& [a, c] : r.classifications) ++kinds[to_string(c.kind)];
    return {{"contracts_scanned", r.contracts_scanned}, {"proxies", r.proxies},
            {"versions", r.versions},                   {"change_edges", r.change_edges},
            {"malformed_events", r.malformed_events},   {"classifications", kinds}};
}

namespace pipeline_detail {

struct TracedProxy {
    Address address;
    ProxyClassification classification;
    std::uint64_t created_at = 0;
    std::optional<Address> fixed_target;  // implementation embedded in clone bytecode
    VersionChain chain;
    std::vector<VersionNode> versions;
    std::vector<ChangeReport> changes;
    std::size_t malformed = 0;
};

}  // namespace pipeline_detail

// `sources` may be null, in which case every version is treated as unverified.
inline BuildReport build_graph(const Dataset& ds, GraphStore& store, const BuildOptions& options,
                               ExplorerClient* sources) {
    using pipeline_detail::TracedProxy;

    std::map<Address, std::vector<LogRecord>> logs_by_emitter;
    for (const auto& [k, log] : ds.logs()) logs_by_emitter[log.address].push_back(log);
    std::map<Address, std::vector<TxSummary>> txs_by_target;
    for (const auto& [k, tx] : ds.transactions())
        if (tx.to) txs_by_target[*tx.to].push_back(tx);
    std::map<Address, std::vector<VulnFinding>> findings_by_address;
    for (const auto& [k, f] : ds.findings()) findings_by_address[f.address].push_back(f);

    static const std::vector<LogRecord> no_logs;
    static const std::vector<TxSummary> no_txs;
    static const std::vector<VulnFinding> no_findings;
    auto logs_of = [&](const Address& a) -> const std::vector<LogRecord>& {
        auto it = logs_by_emitter.find(a);
        return it == logs_by_emitter.end() ? no_logs : it->second;
    };
    auto findings_of = [&](const Address& a) -> const std::vector<VulnFinding>& {
        auto it = findings_by_address.find(a);
        return it == findings_by_address.end() ? no_findings : it->second;
    };
    auto creation_of = [&](const Address& a) -> const ContractCreation* {
        auto it = ds.creations().find(a);
        return it == ds.creations().end() ? nullptr : &it->second;
    };

    // 1. detection
    std::vector<const ContractCreation*> creations;
    for (const auto& [a, c] : ds.creations()) creations.push_back(&c);
    std::vector<ProxyClassification> classes(creations.size());
    std::vector<std::optional<Address>> fixed_targets(creations.size());
    parallel_for(creations.size(), options.jobs, [&](std::size_t i) {
        OpcodeScan scan = scan_bytecode(creations[i]->runtime_bytecode);
        classes[i] = classify_proxy(scan, logs_of(creations[i]->address));
        fixed_targets[i] = scan.eip1167_target;
    });

    BuildReport report;
    report.contracts_scanned = creations.size();
    std::vector<TracedProxy> proxies;
    for (std::size_t i = 0; i < creations.size(); ++i) {
        report.classifications[creations[i]->address] = classes[i];
        if (!classes[i].is_proxy()) continue;
        TracedProxy p;
        p.address = creations[i]->address;
        p.classification = classes[i];
        p.created_at = creations[i]->block_timestamp;
        if (classes[i].kind == ProxyKind::MinimalEip1167) p.fixed_target = fixed_targets[i];
        proxies.push_back(std::move(p));
    }

    // 2. tracing and 3. classification, per proxy
    parallel_for(proxies.size(), options.jobs, [&](std::size_t i) {
        TracedProxy& p = proxies[i];
        DecodeResult decoded = decode_upgrade_events(logs_of(p.address), options.signatures);
        p.malformed = decoded.malformed;
        const ContractCreation* creation = creation_of(p.address);
        p.chain = build_version_chain(p.address, decoded.events,
                                      creation ? std::optional(*creation) : std::nullopt, p.fixed_target);
        auto txs = txs_by_target.find(p.address);
        p.chain = attach_activity(std::move(p.chain), txs == txs_by_target.end() ? no_txs : txs->second);

        std::vector<SourceBundle> bundles;
        for (const auto& entry : p.chain.entries) {
            VersionNode v;
            v.key = {p.address, entry.version_number};
            v.contract_address = entry.implementation;
            if (const ContractCreation* impl = creation_of(entry.implementation)) v.creation_timestamp = impl->block_timestamp;
            else if (sources) v.creation_timestamp = sources->fetch_metadata(entry.implementation).first_tx_timestamp;
            v.last_tx_timestamp = entry.last_tx_timestamp;
            v.total_transactions = entry.tx_count;
            std::set<std::string> cats;
            for (const auto& f : findings_of(entry.implementation)) cats.insert(f.category);
            v.vulnerabilities.assign(cats.begin(), cats.end());
            p.versions.push_back(std::move(v));
            bundles.push_back(sources ? sources->fetch_verified_source(entry.implementation) : SourceBundle{});
        }

        for (std::size_t k = 1; k < p.chain.entries.size(); ++k) {
            const Address& before = p.chain.entries[k - 1].implementation;
            const Address& after = p.chain.entries[k].implementation;
            SourceDiff diff = diff_sources(bundles[k - 1].source_text, bundles[k].source_text);
            auto gas = [&](const Address& a) -> std::optional<std::uint64_t> {
                const ContractCreation* c = creation_of(a);
                return c ? c->gas_used : std::nullopt;
            };
            ChangeReport r = classify_change(diff, findings_of(before), findings_of(after), gas(before), gas(after),
                                             options.gas_threshold);
            r.from_version = p.chain.entries[k - 1].version_number;
            r.to_version = p.chain.entries[k].version_number;
            p.changes.push_back(std::move(r));
        }
    });

    // 4. single-writer population in address order
    for (const auto& p : proxies) {
        store.upsert_proxy({p.address, to_string(p.classification.kind), p.created_at, 0});
        for (const auto& v : p.versions) store.upsert_version(v, p.address);
        for (const auto& c : p.changes) store.upsert_change(make_change_edge(p.address, c));
        report.proxies += 1;
        report.versions += p.versions.size();
        report.change_edges += p.changes.size();
        report.malformed_events += p.malformed;
    }
    return report;
}

}  // namespace evochain
