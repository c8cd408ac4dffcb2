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

// Embedded property graph of proxies and their implementation versions.
//
//   (ProxyNode) -[IMPLEMENTS]-> (VersionNode)            one-to-many
//   (VersionNode v_k) -[OBSERVED_CHANGE]-> (VersionNode v_k+1)
//
// IMPLEMENTS edges are implied by the version key (proxy, version_number), so
// every version has exactly one incoming IMPLEMENTS edge by construction.
//
// Snapshot format (NDJSON, one object per line):
//   {"format":"evochain-snapshot","version":1}
//   {"section":"proxies","count":N}      then N proxy rows sorted by address
//   {"section":"versions","count":M}     then M version rows sorted by key
//   {"section":"changes","count":K}      then K change rows sorted by target key
//   {"checksum":"0x<keccak256 of every preceding byte>"}

#include <evochain/bytes.hpp>
#include <evochain/change_classify.hpp>
#include <evochain/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace evochain {

struct ProxyNode {
    Address address;
    std::string proxy_type;
    std::uint64_t created_at = 0;
    std::uint64_t total_versions = 0;  // maintained by the store

    bool operator==(const ProxyNode&) const = default;
};

struct VersionKey {
    Address proxy;
    std::uint32_t version_number = 0;

    auto operator<=>(const VersionKey&) const = default;
};

struct VersionNode {
    VersionKey key;
    Address contract_address;
    std::optional<std::uint64_t> creation_timestamp;
    std::optional<std::uint64_t> last_tx_timestamp;
    std::uint64_t total_transactions = 0;
    std::vector<std::string> vulnerabilities;

    std::uint32_t version_number() const { return key.version_number; }
    bool operator==(const VersionNode&) const = default;
};

struct ObservedChangeEdge {
    VersionKey from;
    VersionKey to;
    std::vector<std::string> categories;
    std::vector<std::string> evidence;

    bool operator==(const ObservedChangeEdge&) const = default;
};

inline ObservedChangeEdge make_change_edge(const Address& proxy, const ChangeReport& report) {
    ObservedChangeEdge e{{proxy, report.from_version}, {proxy, report.to_version}, {}, report.evidence};
    for (auto c : report.categories) e.categories.emplace_back(to_string(c));
    return e;
}

struct LineageItem {
    VersionNode version;
    std::optional<ObservedChangeEdge> change;  // edge into this version

    bool operator==(const LineageItem&) const = default;
};

struct Lineage {
    bool found = false;
    std::optional<ProxyNode> proxy;
    std::vector<LineageItem> items;
};

struct ProxyFilter {
    std::optional<std::string> proxy_type;
    std::optional<std::uint64_t> min_versions;
    std::optional<std::string> vulnerability;
    std::optional<std::string> address_prefix;
};

struct PageRequest {
    std::size_t limit = 50;
    std::size_t offset = 0;
};

inline constexpr std::size_t max_page_limit = 500;

struct ProxyPage {
    std::vector<ProxyNode> items;
    std::size_t total = 0;
};

struct StoreStats {
    std::size_t proxy_count = 0;
    std::size_t version_count = 0;
    std::size_t implements_edges = 0;
    std::size_t observed_change_edges = 0;
    std::map<std::string, std::size_t> by_type;

    bool operator==(const StoreStats&) const = default;
};

struct AuditIssue {
    std::string kind;
    std::string detail;
};

inline json to_json(const ProxyNode& p) {
    return {{"address", p.address.hex()},
            {"proxy_type", p.proxy_type},
            {"created_at", p.created_at},
            {"total_versions", p.total_versions}};
}

inline json to_json(const VersionNode& v) {
    return {{"proxy", v.key.proxy.hex()},
            {"version_number", v.key.version_number},
            {"contract_address", v.contract_address.hex()},
            {"creation_timestamp", v.creation_timestamp ? json(*v.creation_timestamp) : json(nullptr)},
            {"last_tx_timestamp", v.last_tx_timestamp ? json(*v.last_tx_timestamp) : json(nullptr)},
            {"total_transactions", v.total_transactions},
            {"vulnerabilities", v.vulnerabilities}};
}

inline json to_json(const ObservedChangeEdge& e) {
    return {{"proxy", e.from.proxy.hex()},
            {"from_version", e.from.version_number},
            {"to_version", e.to.version_number},
            {"categories", e.categories},
            {"evidence", e.evidence}};
}

inline json to_json(const StoreStats& s) {
    return {{"proxy_count", s.proxy_count},
            {"version_count", s.version_count},
            {"edge_counts", {{"implements", s.implements_edges}, {"observed_change", s.observed_change_edges}}},
            {"by_type", s.by_type}};
}

namespace graph_detail {

inline std::optional<std::uint64_t> opt_u64(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<std::uint64_t>();
}

inline ProxyNode proxy_from_json(const json& j) {
    return {Address::parse(j.at("address").get<std::string>()), j.at("proxy_type").get<std::string>(),
            j.at("created_at").get<std::uint64_t>(), j.at("total_versions").get<std::uint64_t>()};
}

inline VersionNode version_from_json(const json& j) {
    VersionNode v;
    v.key = {Address::parse(j.at("proxy").get<std::string>()), j.at("version_number").get<std::uint32_t>()};
    v.contract_address = Address::parse(j.at("contract_address").get<std::string>());
    v.creation_timestamp = opt_u64(j, "creation_timestamp");
    v.last_tx_timestamp = opt_u64(j, "last_tx_timestamp");
    v.total_transactions = j.at("total_transactions").get<std::uint64_t>();
    v.vulnerabilities = j.at("vulnerabilities").get<std::vector<std::string>>();
    return v;
}

inline ObservedChangeEdge change_from_json(const json& j) {
    Address proxy = Address::parse(j.at("proxy").get<std::string>());
    return {{proxy, j.at("from_version").get<std::uint32_t>()},
            {proxy, j.at("to_version").get<std::uint32_t>()},
            j.at("categories").get<std::vector<std::string>>(),
            j.at("evidence").get<std::vector<std::string>>()};
}

}  // namespace graph_detail

// Single writer, many readers: every public call takes the store lock, so a
// reader never sees a lineage half-way through an update.
class GraphStore {
  public:
    GraphStore() = default;
    GraphStore(const GraphStore& other) {
        std::shared_lock lock(other.mutex_);
        proxies_ = other.proxies_;
        versions_ = other.versions_;
        changes_ = other.changes_;
    }
    GraphStore& operator=(const GraphStore&) = delete;

    Address upsert_proxy(ProxyNode node) {
        std::unique_lock lock(mutex_);
        const Address key = node.address;
        node.total_versions = count_versions(key);
        proxies_[key] = std::move(node);
        return key;
    }

    VersionKey upsert_version(VersionNode node, const Address& implements_from) {
        std::unique_lock lock(mutex_);
        if (node.key.version_number == 0) throw SchemaError("version_number must be >= 1");
        if (node.key.proxy != implements_from)
            throw SchemaError("version key proxy " + node.key.proxy.hex() + " differs from IMPLEMENTS source " +
                              implements_from.hex());
        auto p = proxies_.find(implements_from);
        if (p == proxies_.end()) throw IntegrityError("IMPLEMENTS source proxy " + implements_from.hex() + " not found");
        VersionKey key = node.key;
        versions_[key] = std::move(node);
        p->second.total_versions = count_versions(implements_from);
        return key;
    }

    VersionKey upsert_change(ObservedChangeEdge edge) {
        std::unique_lock lock(mutex_);
        if (edge.from.proxy != edge.to.proxy || edge.to.version_number != edge.from.version_number + 1)
            throw SchemaError("OBSERVED_CHANGE must join consecutive versions of one proxy");
        if (!versions_.contains(edge.from)) throw IntegrityError("OBSERVED_CHANGE source version not found");
        if (!versions_.contains(edge.to)) throw IntegrityError("OBSERVED_CHANGE target version not found");
        if (edge.categories.empty()) throw SchemaError("OBSERVED_CHANGE needs at least one category");
        VersionKey key = edge.to;
        changes_[key] = std::move(edge);
        return key;
    }

    std::optional<ProxyNode> get_proxy(const Address& a) const {
        std::shared_lock lock(mutex_);
        auto it = proxies_.find(a);
        if (it == proxies_.end()) return std::nullopt;
        return it->second;
    }

    Lineage get_lineage(const Address& proxy) const {
        std::shared_lock lock(mutex_);
        Lineage out;
        auto p = proxies_.find(proxy);
        if (p == proxies_.end()) return out;
        out.found = true;
        out.proxy = p->second;
        for (auto it = versions_.lower_bound({proxy, 0}); it != versions_.end() && it->first.proxy == proxy; ++it) {
            LineageItem item{it->second, std::nullopt};
            if (auto c = changes_.find(it->first); c != changes_.end()) item.change = c->second;
            out.items.push_back(std::move(item));
        }
        return out;
    }

    ProxyPage find(const ProxyFilter& filter, const PageRequest& page) const {
        if (page.limit < 1 || page.limit > max_page_limit)
            throw ValidationError("limit must be in [1, " + std::to_string(max_page_limit) + "]");
        std::string prefix;
        if (filter.address_prefix) prefix = normalize_prefix(*filter.address_prefix);

        std::shared_lock lock(mutex_);
        ProxyPage out;
        for (const auto& [addr, node] : proxies_) {
            if (filter.proxy_type && node.proxy_type != *filter.proxy_type) continue;
            if (filter.min_versions && node.total_versions < *filter.min_versions) continue;
            if (!prefix.empty() && addr.hex().rfind(prefix, 0) != 0) continue;
            if (filter.vulnerability && !has_vulnerability(addr, *filter.vulnerability)) continue;
            if (out.total >= page.offset && out.items.size() < page.limit) out.items.push_back(node);
            ++out.total;
        }
        return out;
    }

    StoreStats stats() const {
        std::shared_lock lock(mutex_);
        StoreStats s;
        s.proxy_count = proxies_.size();
        s.version_count = versions_.size();
        s.implements_edges = versions_.size();
        s.observed_change_edges = changes_.size();
        for (const auto& [a, p] : proxies_) ++s.by_type[p.proxy_type];
        return s;
    }

    // Full-store integrity check; empty result means consistent.
    std::vector<AuditIssue> audit() const {
        std::shared_lock lock(mutex_);
        std::vector<AuditIssue> issues;
        for (const auto& [key, v] : versions_) {
            if (!proxies_.contains(key.proxy))
                issues.push_back({"dangling_implements", key.proxy.hex() + "#" + std::to_string(key.version_number)});
            if (key.version_number == 0) issues.push_back({"invalid_version_number", key.proxy.hex()});
        }
        for (const auto& [key, e] : changes_) {
            if (!versions_.contains(e.from) || !versions_.contains(e.to))
                issues.push_back({"dangling_observed_change", key.proxy.hex() + "#" + std::to_string(key.version_number)});
            if (e.from.proxy != e.to.proxy || e.to.version_number != e.from.version_number + 1 || e.to != key)
                issues.push_back({"non_consecutive_change", key.proxy.hex() + "#" + std::to_string(key.version_number)});
        }
        for (const auto& [a, p] : proxies_)
            if (p.total_versions != count_versions(a))
                issues.push_back({"total_versions_mismatch", a.hex()});
        return issues;
    }

    std::string serialize() const {
        std::shared_lock lock(mutex_);
        std::string out = json{{"format", "evochain-snapshot"}, {"version", 1}}.dump() + "\n";
        out += json{{"section", "proxies"}, {"count", proxies_.size()}}.dump() + "\n";
        for (const auto& [k, v] : proxies_) out += to_json(v).dump() + "\n";
        out += json{{"section", "versions"}, {"count", versions_.size()}}.dump() + "\n";
        for (const auto& [k, v] : versions_) out += to_json(v).dump() + "\n";
        out += json{{"section", "changes"}, {"count", changes_.size()}}.dump() + "\n";
        for (const auto& [k, v] : changes_) out += to_json(v).dump() + "\n";
        out += json{{"checksum", keccak_hash(out).hex()}}.dump() + "\n";
        return out;
    }

    Hash32 digest() const { return keccak_hash(serialize()); }

    void snapshot(const std::filesystem::path& path) const {
        std::string text = serialize();
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << text;
            if (!out) throw IoError("cannot write snapshot " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

    static GraphStore deserialize(std::string_view text) {
        // The checksum line is the last line; it covers every byte before it.
        if (text.empty() || text.back() != '\n') throw CorruptionError("snapshot truncated");
        std::size_t last_nl = text.rfind('\n', text.size() - 2);
        if (last_nl == std::string_view::npos) throw CorruptionError("snapshot has no checksum line");
        std::string_view body = text.substr(0, last_nl + 1);
        std::string_view checksum_line = text.substr(last_nl + 1, text.size() - last_nl - 2);

        GraphStore store;
        try {
            json c = json::parse(checksum_line);
            if (!c.is_object() || c.size() != 1 || c.at("checksum").get<std::string>() != keccak_hash(body).hex())
                throw CorruptionError("snapshot checksum mismatch");

            std::istringstream in{std::string(body)};
            std::string line;
            auto next = [&]() -> json {
                if (!std::getline(in, line)) throw CorruptionError("snapshot truncated");
                return json::parse(line);
            };
            json header = next();
            if (header != json{{"format", "evochain-snapshot"}, {"version", 1}})
                throw CorruptionError("unsupported snapshot header");
            auto section = [&](const char* name) {
                json h = next();
                if (h.at("section").get<std::string>() != name) throw CorruptionError(std::string("expected section ") + name);
                return h.at("count").get<std::size_t>();
            };
            for (std::size_t n = section("proxies"); n-- > 0;) {
                auto p = graph_detail::proxy_from_json(next());
                if (!store.proxies_.emplace(p.address, p).second) throw CorruptionError("duplicate proxy");
            }
            for (std::size_t n = section("versions"); n-- > 0;) {
                auto v = graph_detail::version_from_json(next());
                if (!store.versions_.emplace(v.key, v).second) throw CorruptionError("duplicate version");
            }
            for (std::size_t n = section("changes"); n-- > 0;) {
                auto e = graph_detail::change_from_json(next());
                if (!store.changes_.emplace(e.to, e).second) throw CorruptionError("duplicate change edge");
            }
            if (std::getline(in, line)) throw CorruptionError("trailing data before checksum");
        } catch (const json::exception& e) {
            throw CorruptionError(std::string("snapshot parse error: ") + e.what());
        } catch (const ValidationError& e) {
            throw CorruptionError(std::string("snapshot field error: ") + e.what());
        }
        if (auto issues = store.audit(); !issues.empty())
            throw CorruptionError("snapshot fails audit: " + issues.front().kind + " " + issues.front().detail);
        return store;
    }

    static GraphStore load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot read snapshot " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        return deserialize(ss.str());
    }

  private:
    std::uint64_t count_versions(const Address& proxy) const {
        std::uint64_t n = 0;
        for (auto it = versions_.lower_bound({proxy, 0}); it != versions_.end() && it->first.proxy == proxy; ++it) ++n;
        return n;
    }

    bool has_vulnerability(const Address& proxy, const std::string& category) const {
        for (auto it = versions_.lower_bound({proxy, 0}); it != versions_.end() && it->first.proxy == proxy; ++it) {
            const auto& vs = it->second.vulnerabilities;
            if (std::find(vs.begin(), vs.end(), category) != vs.end()) return true;
        }
        return false;
    }

    static std::string normalize_prefix(std::string_view raw) {
        std::string s(detail::strip_0x(raw));
        if (s.size() > 40) throw ValidationError("address prefix longer than an address: '" + std::string(raw) + "'");
        for (char& c : s) {
            if (detail::hex_value(c) < 0) throw ValidationError("address prefix is not hex: '" + std::string(raw) + "'");
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
        return "0x" + s;
    }

    mutable std::shared_mutex mutex_;
    std::map<Address, ProxyNode> proxies_;
    std::map<VersionKey, VersionNode> versions_;
    std::map<VersionKey, ObservedChangeEdge> changes_;  // keyed by target version
};

}  // namespace evochain
