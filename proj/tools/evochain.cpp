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

// evochain command-line driver: ingest -> build -> serve, plus lineage and
// stats queries over a snapshot and a synthetic corpus generator.
//
// Exit codes: 0 success, 1 fatal error, 2 not found.

#include <evochain/api_server.hpp>
#include <evochain/corpus.hpp>
#include <evochain/http_transport.hpp>
#include <evochain/pipeline.hpp>

#include <CLI11.hpp>

#include <csignal>
#include <ctime>
#include <iostream>
#include <pthread.h>
#include <thread>

namespace {

using namespace evochain;

constexpr int exit_ok = 0;
constexpr int exit_fatal = 1;
constexpr int exit_not_found = 2;

std::string format_time(const std::optional<std::uint64_t>& t) {
    if (!t) return "-";
    std::time_t s = static_cast<std::time_t>(*t);
    std::tm tm{};
    gmtime_r(&s, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

// ingest ---------------------------------------------------------------------

struct IngestArgs {
    std::optional<std::string> logs, creations, transactions, vulns;
    std::string out;
    bool json = false;
};

int run_ingest(const IngestArgs& a) {
    const std::pair<const std::optional<std::string>*, RecordKind> inputs[] = {
        {&a.logs, RecordKind::logs},
        {&a.creations, RecordKind::creations},
        {&a.transactions, RecordKind::transactions},
        {&a.vulns, RecordKind::vuln_findings},
    };
    Dataset ds;
    json summary = json::object();
    std::string rejections;
    for (const auto& [path, kind] : inputs) {
        if (!*path) continue;
        IngestStats s = ds.ingest_file(**path, kind);
        summary[to_string(kind)] = {{"file", **path},
                                    {"records_read", s.records_read},
                                    {"records_accepted", s.records_accepted},
                                    {"records_rejected", s.records_rejected}};
        for (const auto& r : s.rejections)
            rejections += json{{"file", **path}, {"kind", to_string(kind)}, {"line", r.line}, {"reason", r.reason}}.dump() + "\n";
    }
    save_dataset(ds, a.out);
    {
        std::ofstream out(std::filesystem::path(a.out) / "rejections.ndjson", std::ios::trunc);
        out << rejections;
    }
    const std::string digest = ds.digest().hex();
    if (a.json) {
        std::cout << json{{"dataset", a.out}, {"digest", digest}, {"inputs", summary}}.dump(2) << "\n";
    } else {
        for (const auto& [kind, s] : summary.items())
            std::cout << kind << ": read " << s["records_read"] << ", accepted " << s["records_accepted"]
                      << ", rejected " << s["records_rejected"] << "\n";
        std::cout << "dataset " << a.out << " digest " << digest << "\n";
    }
    return exit_ok;
}

// build ----------------------------------------------------------------------

struct BuildArgs {
    std::string dataset, snapshot;
    std::optional<std::string> signatures, sources, cache_dir, explorer_url;
    double gas_threshold = default_gas_threshold;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    bool json = false;
};

int run_build(const BuildArgs& a) {
    Dataset ds;
    load_dataset(ds, a.dataset);

    BuildOptions options;
    options.gas_threshold = a.gas_threshold;
    options.jobs = a.jobs;
    if (a.signatures) options.signatures = SignatureTable::load(*a.signatures);

    std::shared_ptr<ExplorerClient> explorer;
    if (a.sources || a.explorer_url) {
        ClientConfig cfg;
        if (a.sources) cfg.offline_fixture_dir = *a.sources;
        if (a.cache_dir) cfg.cache_dir = *a.cache_dir;
        if (a.explorer_url) cfg.base_url = *a.explorer_url;
        cfg.load_api_key_from_env();
        explorer = make_explorer_client(cfg);
    }

    GraphStore store;
    BuildReport report = build_graph(ds, store, options, explorer.get());
    store.snapshot(a.snapshot);

    const std::string digest = store.digest().hex();
    if (a.json) {
        json j = to_json(report);
        j["snapshot"] = a.snapshot;
        j["snapshot_digest"] = digest;
        j["stats"] = to_json(store.stats());
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "contracts scanned: " << report.contracts_scanned << "\n"
                  << "proxies: " << report.proxies << "\n"
                  << "versions: " << report.versions << "\n"
                  << "change edges: " << report.change_edges << "\n";
        if (report.malformed_events) std::cout << "malformed upgrade events: " << report.malformed_events << "\n";
        std::cout << "snapshot " << a.snapshot << " digest " << digest << "\n";
    }
    return exit_ok;
}

// serve ----------------------------------------------------------------------

struct ServeArgs {
    std::optional<std::string> snapshot, config, listen;
};

int run_serve(const ServeArgs& a) {
    ApiConfig cfg = a.config ? ApiConfig::load(*a.config) : ApiConfig{};
    if (a.snapshot) cfg.snapshot = *a.snapshot;
    if (a.listen) {
        ApiConfig l = ApiConfig::from_json(json{{"listen", *a.listen}});
        cfg.host = l.host;
        cfg.port = l.port;
    }
    if (!cfg.snapshot) throw ValidationError("no snapshot given (--snapshot or \"snapshot\" in the config)");

    auto store = std::make_shared<const GraphStore>(GraphStore::load(*cfg.snapshot));
    cfg.explorer.load_api_key_from_env();
    auto explorer = make_explorer_client(cfg.explorer);
    auto service = std::make_shared<const ApiService>(store, explorer, cfg.cors_origin);

    // Handle SIGINT/SIGTERM synchronously on this thread.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    ApiServer server(service);
    int port = server.bind(cfg.host, cfg.port);
    std::thread worker([&] { server.listen(); });
    server.wait_until_ready();
    std::cout << "serving " << cfg.snapshot->string() << " on http://" << cfg.host << ":" << port << "/api/v1" << std::endl;

    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
    worker.join();
    return exit_ok;
}

// lineage / stats ------------------------------------------------------------

struct LineageArgs {
    std::string snapshot, address;
    bool json = false;
    bool table = false;
};

int run_lineage(const LineageArgs& a) {
    GraphStore store = GraphStore::load(a.snapshot);
    Address address = normalize_address(a.address);
    Lineage l = store.get_lineage(address);
    if (!l.found) {
        std::cerr << "evochain: no proxy " << address.hex() << " in " << a.snapshot << "\n";
        return exit_not_found;
    }
    if (a.json) {
        std::cout << lineage_json(l).dump(2) << "\n";
        return exit_ok;
    }
    std::cout << "proxy " << l.proxy->address.hex() << " (" << l.proxy->proxy_type << "), " << l.items.size()
              << " version(s)\n";
    std::printf("%-7s  %-42s  %-20s  %-20s  %8s  %s\n", "version", "implementation", "created", "last_tx", "tx_count",
                "changes");
    for (const auto& item : l.items) {
        const auto& v = item.version;
        std::printf("%-7u  %-42s  %-20s  %-20s  %8llu  %s\n", v.version_number(), v.contract_address.hex().c_str(),
                    format_time(v.creation_timestamp).c_str(), format_time(v.last_tx_timestamp).c_str(),
                    static_cast<unsigned long long>(v.total_transactions),
                    item.change ? join(item.change->categories, ",").c_str() : "-");
    }
    std::fflush(stdout);
    return exit_ok;
}

int run_stats(const std::string& snapshot, bool as_json) {
    GraphStore store = GraphStore::load(snapshot);
    StoreStats s = store.stats();
    if (as_json) {
        std::cout << to_json(s).dump(2) << "\n";
        return exit_ok;
    }
    std::cout << "proxies: " << s.proxy_count << "\n"
              << "versions: " << s.version_count << "\n"
              << "implements edges: " << s.implements_edges << "\n"
              << "observed_change edges: " << s.observed_change_edges << "\n";
    for (const auto& [type, n] : s.by_type) std::cout << "  " << type << ": " << n << "\n";
    return exit_ok;
}

// gen-corpus -----------------------------------------------------------------

struct CorpusArgs {
    CorpusOptions options;
    std::string out;
    bool small = false;
    bool json = false;
};

int run_gen_corpus(const CorpusArgs& a) {
    Corpus c = a.small ? small_fixture() : generate_corpus(a.options);
    write_corpus(c, a.out);
    json expected = manifest_json(c)["expected"];
    if (a.json) {
        std::cout << json{{"out", a.out}, {"seed", c.seed}, {"expected", expected}}.dump(2) << "\n";
    } else {
        std::cout << "wrote " << a.out << ": " << expected["contracts"] << " contracts, " << expected["proxies"]
                  << " proxies, " << expected["versions"] << " versions\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EvoChain: upgradeable proxy evolution graph"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "evochain 0.1.0");

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Normalize NDJSON exports into a dataset directory");
    ingest_cmd->add_option("--logs", ingest.logs, "event log export")->check(CLI::ExistingFile);
    ingest_cmd->add_option("--creations", ingest.creations, "contract creation export")->check(CLI::ExistingFile);
    ingest_cmd->add_option("--transactions", ingest.transactions, "transaction export")->check(CLI::ExistingFile);
    ingest_cmd->add_option("--vulns", ingest.vulns, "vulnerability findings")->check(CLI::ExistingFile);
    ingest_cmd->add_option("--out", ingest.out, "dataset directory")->required();
    ingest_cmd->add_flag("--json", ingest.json, "machine-readable output");

    BuildArgs build;
    auto* build_cmd = app.add_subcommand("build", "Detect proxies, trace versions, classify changes, write a snapshot");
    build_cmd->add_option("--dataset", build.dataset, "dataset directory from `ingest`")->required()->check(CLI::ExistingDirectory);
    build_cmd->add_option("--snapshot", build.snapshot, "output snapshot file")->required();
    build_cmd->add_option("--signatures", build.signatures, "extra upgrade-event signatures (NDJSON)")->check(CLI::ExistingFile);
    build_cmd->add_option("--gas-threshold", build.gas_threshold, "minimum relative gas reduction")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    build_cmd->add_option("--jobs,-j", build.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    build_cmd->add_option("--sources", build.sources, "offline verified-source fixture directory")->check(CLI::ExistingDirectory);
    build_cmd->add_option("--explorer-url", build.explorer_url, "explorer API base URL for live source retrieval");
    build_cmd->add_option("--cache-dir", build.cache_dir, "explorer response cache");
    build_cmd->add_flag("--json", build.json, "machine-readable output");

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API over a snapshot");
    serve_cmd->add_option("--snapshot", serve.snapshot, "snapshot file (overrides config)");
    serve_cmd->add_option("--config", serve.config, "API config file")->check(CLI::ExistingFile);
    serve_cmd->add_option("--listen", serve.listen, "host:port (overrides config)");

    LineageArgs lineage;
    auto* lineage_cmd = app.add_subcommand("lineage", "Print a proxy's version history");
    lineage_cmd->add_option("--snapshot", lineage.snapshot, "snapshot file")->required();
    lineage_cmd->add_option("--address", lineage.address, "proxy address")->required();
    auto* json_flag = lineage_cmd->add_flag("--json", lineage.json, "JSON output");
    lineage_cmd->add_flag("--table", lineage.table, "table output (default)")->excludes(json_flag);

    std::string stats_snapshot;
    bool stats_json = false;
    auto* stats_cmd = app.add_subcommand("stats", "Print graph statistics");
    stats_cmd->add_option("--snapshot", stats_snapshot, "snapshot file")->required();
    stats_cmd->add_flag("--json", stats_json, "JSON output");

    CorpusArgs corpus;
    auto* corpus_cmd = app.add_subcommand("gen-corpus", "Write a seeded synthetic corpus with a ground-truth manifest");
    corpus_cmd->add_option("--seed", corpus.options.seed, "RNG seed")->capture_default_str();
    corpus_cmd->add_option("--contracts", corpus.options.contracts, "total contracts")->capture_default_str();
    corpus_cmd->add_option("--proxies", corpus.options.proxies, "proxy contracts")->capture_default_str();
    corpus_cmd->add_option("--versions", corpus.options.versions, "total proxy versions")->capture_default_str();
    corpus_cmd->add_flag("--small", corpus.small, "two-proxy fixture instead of a random corpus");
    corpus_cmd->add_option("--out", corpus.out, "output directory")->required();
    corpus_cmd->add_flag("--json", corpus.json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_fatal;
    }

    try {
        if (*ingest_cmd) return run_ingest(ingest);
        if (*build_cmd) return run_build(build);
        if (*serve_cmd) return run_serve(serve);
        if (*lineage_cmd) return run_lineage(lineage);
        if (*stats_cmd) return run_stats(stats_snapshot, stats_json);
        if (*corpus_cmd) return run_gen_corpus(corpus);
    } catch (const std::exception& e) {
        std::cerr << "evochain: error: " << e.what() << "\n";
        return exit_fatal;
    }
    return exit_fatal;
}
