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

// Read-only JSON API over a GraphStore. `ApiService::handle` is transport
// independent; api_server.hpp binds it to an HTTP listener.

#include <evochain/explorer_client.hpp>
#include <evochain/graph_store.hpp>

#include <json.hpp>

#include <charconv>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace evochain {

struct ApiRequest {
    std::string method = "GET";
    std::string path;
    std::map<std::string, std::string> query;
};

struct ApiResponse {
    int status = 200;
    json body;
    std::map<std::string, std::string> headers;
};

struct ApiConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::optional<std::string> cors_origin;
    std::optional<std::filesystem::path> snapshot;
    ClientConfig explorer;

    // {"listen": "host:port", "cors_origin": "...", "snapshot": "...",
    //  "explorer": {"base_url", "max_requests_per_second", "cache_dir", "offline_fixture_dir"}}
    // Relative paths resolve against the config file's directory.
    static ApiConfig load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read config " + path.string());
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw ValidationError("config is not a JSON object");
        return from_json(j, path.parent_path());
    }

    static ApiConfig from_json(const json& j, const std::filesystem::path& base_dir = {}) {
        ApiConfig c;
        auto resolve = [&](const std::string& p) {
            std::filesystem::path fp(p);
            return fp.is_relative() && !base_dir.empty() ? base_dir / fp : fp;
        };
        try {
            if (j.contains("listen")) {
                auto listen = j["listen"].get<std::string>();
                auto colon = listen.rfind(':');
                if (colon == std::string::npos) throw ValidationError("listen must be host:port");
                c.host = listen.substr(0, colon);
                c.port = std::stoi(listen.substr(colon + 1));
            }
            if (j.contains("cors_origin") && !j["cors_origin"].is_null()) c.cors_origin = j["cors_origin"].get<std::string>();
            if (j.contains("snapshot") && !j["snapshot"].is_null()) c.snapshot = resolve(j["snapshot"].get<std::string>());
            if (j.contains("explorer")) {
                const json& e = j["explorer"];
                if (e.contains("api_key"))
                    throw ValidationError(std::string("explorer api key must come from ") + ClientConfig::api_key_env);
                c.explorer.base_url = e.value("base_url", c.explorer.base_url);
                c.explorer.max_requests_per_second = e.value("max_requests_per_second", c.explorer.max_requests_per_second);
                if (e.contains("cache_dir") && !e["cache_dir"].is_null())
                    c.explorer.cache_dir = resolve(e["cache_dir"].get<std::string>());
                if (e.contains("offline_fixture_dir") && !e["offline_fixture_dir"].is_null())
                    c.explorer.offline_fixture_dir = resolve(e["offline_fixture_dir"].get<std::string>());
            }
        } catch (const json::exception& e) {
            throw ValidationError(std::string("invalid config: ") + e.what());
        } catch (const std::logic_error& e) {
            throw ValidationError(std::string("invalid config: ") + e.what());
        }
        return c;
    }
};

inline json lineage_json(const Lineage& l) {
    json versions = json::array();
    for (const auto& item : l.items) {
        json v = to_json(item.version);
        v["change"] = item.change ? json{{"categories", item.change->categories}, {"evidence", item.change->evidence}}
                                  : json(nullptr);
        versions.push_back(std::move(v));
    }
    return {{"proxy", to_json(*l.proxy)}, {"versions", versions}};
}

class ApiService {
  public:
    static constexpr std::string_view prefix = "/api/v1";

    ApiService(std::shared_ptr<const GraphStore> store, std::shared_ptr<ExplorerClient> explorer,
               std::optional<std::string> cors_origin = std::nullopt)
        : store_(std::move(store)), explorer_(std::move(explorer)), cors_origin_(std::move(cors_origin)) {}

    ApiResponse handle(const ApiRequest& req) const {
        ApiResponse res = route(req);
        res.headers["Content-Type"] = "application/json";
        if (cors_origin_) {
            res.headers["Access-Control-Allow-Origin"] = *cors_origin_;
            res.headers["Vary"] = "Origin";
        }
        return res;
    }

    static ApiResponse error(int status, std::string_view code, std::string message) {
        return {status, {{"status", status}, {"code", code}, {"message", std::move(message)}}, {}};
    }

  private:
    struct BadRequest {
        std::string message;
    };

    ApiResponse route(const ApiRequest& req) const {
        if (req.method == "OPTIONS")
            return {204, nullptr, {{"Access-Control-Allow-Methods", "GET, OPTIONS"}, {"Access-Control-Allow-Headers", "Content-Type"}}};
        if (req.method != "GET") return error(405, "bad_request", "method " + req.method + " not allowed");
        std::string_view path = req.path;
        if (path.size() > 1 && path.back() == '/') path.remove_suffix(1);
        if (path.substr(0, prefix.size()) != prefix) return error(404, "not_found", "no route for " + req.path);
        path.remove_prefix(prefix.size());

        auto segments = split_path(path);
        try {
            if (segments.size() == 1 && segments[0] == "proxies") return proxies(req);
            if (segments.size() == 1 && segments[0] == "stats") return {200, to_json(store_->stats()), {}};
            if (segments.size() == 3 && segments[0] == "contracts" && segments[2] == "lineage")
                return lineage(segments[1]);
            if (segments.size() == 3 && segments[0] == "contracts" && segments[2] == "source")
                return source(segments[1]);
            if (segments.size() == 2 && segments[0] == "graph") return graph(segments[1], req);
        } catch (const BadRequest& e) {
            return error(400, "bad_request", e.message);
        } catch (const ValidationError& e) {
            return error(400, "bad_request", e.what());
        }
        return error(404, "not_found", "no route for " + req.path);
    }

    static std::vector<std::string> split_path(std::string_view p) {
        std::vector<std::string> out;
        while (!p.empty()) {
            if (p.front() == '/') {
                p.remove_prefix(1);
                continue;
            }
            auto slash = p.find('/');
            out.emplace_back(p.substr(0, slash));
            if (slash == std::string_view::npos) break;
            p.remove_prefix(slash);
        }
        return out;
    }

    static std::optional<std::uint64_t> int_param(const ApiRequest& req, const std::string& name) {
        auto it = req.query.find(name);
        if (it == req.query.end() || it->second.empty()) return std::nullopt;
        std::uint64_t v = 0;
        const auto& s = it->second;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw BadRequest{"query parameter '" + name + "' must be a non-negative integer"};
        return v;
    }

    static std::optional<std::string> text_param(const ApiRequest& req, const std::string& name) {
        auto it = req.query.find(name);
        if (it == req.query.end() || it->second.empty()) return std::nullopt;
        return it->second;
    }

    static Address path_address(const std::string& text) {
        if (!is_valid_address(text)) throw BadRequest{"malformed address '" + text + "'"};
        return normalize_address(text);
    }

    ApiResponse proxies(const ApiRequest& req) const {
        PageRequest page;
        page.limit = int_param(req, "limit").value_or(50);
        page.offset = int_param(req, "offset").value_or(0);
        if (page.limit < 1 || page.limit > max_page_limit)
            throw BadRequest{"limit must be in [1, " + std::to_string(max_page_limit) + "]"};
        ProxyFilter f;
        f.proxy_type = text_param(req, "type");
        f.min_versions = int_param(req, "min_versions");
        f.vulnerability = text_param(req, "vulnerability");
        f.address_prefix = text_param(req, "q");
        ProxyPage result = store_->find(f, page);
        json items = json::array();
        for (const auto& p : result.items) items.push_back(to_json(p));
        return {200, {{"items", items}, {"total", result.total}, {"limit", page.limit}, {"offset", page.offset}}, {}};
    }

    ApiResponse lineage(const std::string& addr) const {
        Address a = path_address(addr);
        Lineage l = store_->get_lineage(a);
        if (!l.found) return error(404, "not_found", "no proxy " + a.hex());
        return {200, lineage_json(l), {}};
    }

    ApiResponse source(const std::string& addr) const {
        Address a = path_address(addr);
        if (!explorer_) return error(502, "upstream_unavailable", "no explorer configured");
        try {
            return {200, to_json(explorer_->fetch_verified_source(a)), {}};
        } catch (const TransientError& e) {
            return error(502, "upstream_unavailable", e.what());
        } catch (const ProtocolError& e) {
            return error(502, "upstream_unavailable", e.what());
        }
    }

    // Breadth-first from the proxy. A node is included when it lies within
    // `depth` hops; an edge when it is reached within `depth` hops, i.e.
    // min(dist(u), dist(v)) + 1 <= depth.
    ApiResponse graph(const std::string& addr, const ApiRequest& req) const {
        Address a = path_address(addr);
        std::uint64_t depth = int_param(req, "depth").value_or(2);
        if (depth < 1 || depth > 3) throw BadRequest{"depth must be in [1, 3]"};
        Lineage l = store_->get_lineage(a);
        if (!l.found) return error(404, "not_found", "no proxy " + a.hex());

        struct Edge {
            std::string id, source, target, kind;
            std::vector<std::string> categories, evidence;
        };
        const std::string proxy_id = "proxy:" + a.hex();
        auto version_id = [&](std::uint32_t n) { return "version:" + a.hex() + ":" + std::to_string(n); };

        std::map<std::string, json> nodes;
        nodes[proxy_id] = {{"id", proxy_id},
                           {"type", "proxy"},
                           {"address", a.hex()},
                           {"label", l.proxy->proxy_type},
                           {"attributes", to_json(*l.proxy)}};
        std::vector<Edge> edges;
        for (const auto& item : l.items) {
            const auto& v = item.version;
            std::string id = version_id(v.version_number());
            json attrs = to_json(v);
            nodes[id] = {{"id", id},
                         {"type", "version"},
                         {"address", v.contract_address.hex()},
                         {"label", "v" + std::to_string(v.version_number())},
                         {"attributes", attrs}};
            edges.push_back({"implements:" + id, proxy_id, id, "implements", {}, {}});
            if (item.change)
                edges.push_back({"observed_change:" + id, version_id(item.change->from.version_number), id,
                                 "observed_change", item.change->categories, item.change->evidence});
        }

        std::map<std::string, std::vector<std::string>> adj;
        for (const auto& e : edges) {
            adj[e.source].push_back(e.target);
            adj[e.target].push_back(e.source);
        }
        std::map<std::string, std::uint64_t> dist{{proxy_id, 0}};
        std::deque<std::string> queue{proxy_id};
        while (!queue.empty()) {
            std::string u = queue.front();
            queue.pop_front();
            for (const auto& v : adj[u])
                if (!dist.contains(v)) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
        }

        json out_nodes = json::array();
        // proxy first, then versions in lineage order
        out_nodes.push_back(nodes[proxy_id]);
        for (const auto& item : l.items) {
            std::string id = version_id(item.version.version_number());
            if (dist.contains(id) && dist[id] <= depth) out_nodes.push_back(nodes[id]);
        }
        json out_edges = json::array();
        for (const auto& e : edges) {
            if (!dist.contains(e.source) || !dist.contains(e.target)) continue;
            if (std::min(dist[e.source], dist[e.target]) + 1 > depth) continue;
            out_edges.push_back({{"id", e.id},
                                 {"source", e.source},
                                 {"target", e.target},
                                 {"kind", e.kind},
                                 {"categories", e.categories},
                                 {"evidence", e.evidence}});
        }
        return {200, {{"root", proxy_id}, {"depth", depth}, {"nodes", out_nodes}, {"edges", out_edges}}, {}};
    }

    std::shared_ptr<const GraphStore> store_;
    std::shared_ptr<ExplorerClient> explorer_;
    std::optional<std::string> cors_origin_;
};

}  // namespace evochain
