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

// Block-explorer client for verified source and contract metadata.
// Lookups resolve fixture dir -> cache -> live request; live requests pass
// through a shared rate limiter and are retried with exponential backoff.

#include <evochain/bytes.hpp>
#include <evochain/error.hpp>

#include <json.hpp>

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace evochain {

using json = nlohmann::json;

class Clock {
  public:
    using duration = std::chrono::nanoseconds;
    virtual ~Clock() = default;
    virtual duration now() = 0;  // monotonic
    virtual void sleep_for(duration d) = 0;
    virtual std::uint64_t unix_seconds() = 0;
};

class SystemClock final : public Clock {
  public:
    duration now() override { return std::chrono::steady_clock::now().time_since_epoch(); }
    void sleep_for(duration d) override { std::this_thread::sleep_for(d); }
    std::uint64_t unix_seconds() override {
        return static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
                .count());
    }
};

// Deterministic clock: sleeping advances time instantly.
class FakeClock final : public Clock {
  public:
    explicit FakeClock(std::uint64_t unix_start = 1'700'000'000) : unix_start_(unix_start) {}

    duration now() override {
        std::lock_guard lock(mutex_);
        return now_;
    }
    void sleep_for(duration d) override { advance(d); }
    std::uint64_t unix_seconds() override {
        std::lock_guard lock(mutex_);
        return unix_start_ + static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::seconds>(now_).count());
    }
    void advance(duration d) {
        std::lock_guard lock(mutex_);
        if (d > duration::zero()) now_ += d;
    }

  private:
    std::mutex mutex_;
    duration now_{0};
    std::uint64_t unix_start_;
};

// Spaces acquisitions at least 1/rate apart. Callers queue in arrival order
// and block until their slot; nothing is dropped.
class RateLimiter {
  public:
    RateLimiter(double per_second, std::shared_ptr<Clock> clock)
        : interval_(std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(1.0 / per_second))),
          clock_(std::move(clock)) {
        if (!(per_second > 0)) throw ValidationError("rate limit must be positive");
    }

    void acquire() {
        Clock::duration slot;
        {
            std::lock_guard lock(mutex_);
            Clock::duration now = clock_->now();
            slot = next_ ? std::max(*next_, now) : now;
            next_ = slot + interval_;
        }
        Clock::duration wait = slot - clock_->now();
        if (wait > Clock::duration::zero()) clock_->sleep_for(wait);
    }

  private:
    Clock::duration interval_;
    std::shared_ptr<Clock> clock_;
    std::mutex mutex_;
    std::optional<Clock::duration> next_;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Network-level failure (connect, timeout, reset); retried by the client.
struct TransportFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Transport {
  public:
    virtual ~Transport() = default;
    // `target` is the path plus query string relative to the configured base URL.
    virtual HttpResponse get(const std::string& target) = 0;
};

enum class SourceOrigin { live, cache, fixture };

inline const char* to_string(SourceOrigin o) {
    switch (o) {
        case SourceOrigin::live: return "live";
        case SourceOrigin::cache: return "cache";
        case SourceOrigin::fixture: return "fixture";
    }
    return "live";
}

struct SourceBundle {
    Address address;
    bool verified = false;
    std::string source_text;  // empty unless verified
    std::string compiler_version;
    std::string contract_name;
    std::uint64_t fetched_at = 0;
    SourceOrigin origin = SourceOrigin::live;
    std::size_t file_count = 0;
};

struct ContractMetadata {
    std::optional<std::uint64_t> first_tx_timestamp;
    std::optional<std::uint64_t> tx_count;
    std::uint64_t fetched_at = 0;
    SourceOrigin origin = SourceOrigin::live;
};

inline json to_json(const SourceBundle& b) {
    return {{"address", b.address.hex()},
            {"verified", b.verified},
            {"source_text", b.source_text},
            {"compiler_version", b.compiler_version},
            {"contract_name", b.contract_name},
            {"fetched_at", b.fetched_at},
            {"origin", to_string(b.origin)},
            {"file_count", b.file_count}};
}

inline json to_json(const ContractMetadata& m) {
    return {{"first_tx_timestamp", m.first_tx_timestamp ? json(*m.first_tx_timestamp) : json(nullptr)},
            {"tx_count", m.tx_count ? json(*m.tx_count) : json(nullptr)},
            {"fetched_at", m.fetched_at},
            {"origin", to_string(m.origin)}};
}

inline SourceBundle bundle_from_json(const json& j, const Address& address) {
    SourceBundle b;
    b.address = address;
    b.verified = j.value("verified", false);
    b.source_text = b.verified ? j.value("source_text", std::string{}) : std::string{};
    b.compiler_version = j.value("compiler_version", std::string{});
    b.contract_name = j.value("contract_name", std::string{});
    b.fetched_at = j.value("fetched_at", std::uint64_t{0});
    b.file_count = j.value("file_count", std::size_t{b.verified ? 1u : 0u});
    return b;
}

inline std::optional<std::uint64_t> optional_u64(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<std::uint64_t>();
}

inline ContractMetadata metadata_from_json(const json& j) {
    ContractMetadata m;
    m.first_tx_timestamp = optional_u64(j, "first_tx_timestamp");
    m.tx_count = optional_u64(j, "tx_count");
    m.fetched_at = j.value("fetched_at", std::uint64_t{0});
    return m;
}

struct ClientConfig {
    std::string base_url = "https://api.etherscan.io/api";
    std::string api_key;  // only ever read from EVOCHAIN_EXPLORER_KEY
    double max_requests_per_second = 4.0;
    std::optional<std::filesystem::path> cache_dir;
    std::optional<std::filesystem::path> offline_fixture_dir;
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{500};
    std::uint64_t metadata_ttl_seconds = 24 * 3600;

    static constexpr const char* api_key_env = "EVOCHAIN_EXPLORER_KEY";

    void load_api_key_from_env() {
        if (const char* k = std::getenv(api_key_env)) api_key = k;
    }
};

namespace explorer_detail {

inline std::string url_encode(std::string_view s) {
    static constexpr char digits[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += digits[c >> 4];
            out += digits[c & 0x0f];
        }
    }
    return out;
}

// Explorer signals throttling inside a 200 response; treat it as retryable.
struct RetryableResponse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const json& result_or_throw(const json& root) {
    if (!root.is_object() || !root.contains("result")) throw ProtocolError("explorer response has no 'result'");
    const json& result = root["result"];
    if (root.value("status", std::string("1")) == "0" && result.is_string()) {
        const auto& msg = result.get_ref<const std::string&>();
        if (msg.find("rate limit") != std::string::npos || msg.find("Rate limit") != std::string::npos)
            throw RetryableResponse(msg);
    }
    return result;
}

// Multi-file verified sources arrive as a JSON document (sometimes wrapped in
// an extra pair of braces); files are joined with "// File: <path>" headers.
inline std::pair<std::string, std::size_t> flatten_source(const std::string& raw) {
    if (raw.empty()) return {"", 0};
    if (raw.front() != '{') return {raw, 1};
    std::string text = raw;
    if (text.size() >= 4 && text.rfind("{{", 0) == 0 && text.substr(text.size() - 2) == "}}")
        text = text.substr(1, text.size() - 2);
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return {raw, 1};
    const json& files = doc.contains("sources") ? doc["sources"] : doc;
    std::string out;
    std::size_t n = 0;
    for (const auto& [path, entry] : files.items()) {
        if (!entry.is_object() || !entry.contains("content")) continue;
        out += "// File: " + path + "\n";
        out += entry["content"].get<std::string>();
        if (out.empty() || out.back() != '\n') out += '\n';
        ++n;
    }
    if (n == 0) return {raw, 1};
    return {out, n};
}

inline SourceBundle parse_source_response(const Address& address, const std::string& body) {
    json root = json::parse(body, nullptr, false);
    if (root.is_discarded()) throw ProtocolError("explorer response is not JSON");
    const json& result = result_or_throw(root);
    if (!result.is_array() || result.empty() || !result[0].is_object())
        throw ProtocolError("getsourcecode result is not a non-empty array");
    const json& entry = result[0];
    SourceBundle b;
    b.address = address;
    try {
        std::string raw = entry.value("SourceCode", std::string{});
        auto [text, files] = flatten_source(raw);
        b.verified = !text.empty();
        b.source_text = b.verified ? text : std::string{};
        b.file_count = b.verified ? files : 0;
        b.contract_name = entry.value("ContractName", std::string{});
        b.compiler_version = entry.value("CompilerVersion", std::string{});
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("malformed getsourcecode entry: ") + e.what());
    }
    return b;
}

inline std::uint64_t parse_u64_text(const json& v) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_string()) return std::stoull(v.get<std::string>());
    throw ProtocolError("expected an integer field");
}

inline ContractMetadata parse_txlist_response(const std::string& body) {
    json root = json::parse(body, nullptr, false);
    if (root.is_discarded()) throw ProtocolError("explorer response is not JSON");
    const json& result = result_or_throw(root);
    ContractMetadata m;
    if (result.is_string()) return m;  // "No transactions found"
    if (!result.is_array()) throw ProtocolError("txlist result is not an array");
    try {
        m.tx_count = result.size();
        if (!result.empty()) m.first_tx_timestamp = parse_u64_text(result[0].at("timeStamp"));
    } catch (const std::exception& e) {
        throw ProtocolError(std::string("malformed txlist entry: ") + e.what());
    }
    return m;
}

}  // namespace explorer_detail

class ExplorerClient {
  public:
    ExplorerClient(ClientConfig config, std::shared_ptr<Transport> transport,
                   std::shared_ptr<Clock> clock = std::make_shared<SystemClock>())
        : config_(std::move(config)),
          transport_(std::move(transport)),
          clock_(std::move(clock)),
          limiter_(config_.max_requests_per_second, clock_) {}

    bool offline() const { return config_.offline_fixture_dir.has_value(); }
    const ClientConfig& config() const { return config_; }

    SourceBundle fetch_verified_source(const Address& address) {
        if (auto f = read_fixture(address)) {
            SourceBundle b = bundle_from_json(*f, address);
            b.origin = SourceOrigin::fixture;
            return b;
        }
        auto key_lock = lock_for(address);
        std::lock_guard guard(*key_lock);
        if (auto cached = cached_source(address)) {
            cached->origin = SourceOrigin::cache;
            return *cached;
        }
        if (offline()) {
            SourceBundle miss;
            miss.address = address;
            miss.origin = SourceOrigin::fixture;
            miss.fetched_at = clock_->unix_seconds();
            return miss;
        }
        std::string target = query("contract", "getsourcecode", address, "");
        SourceBundle b = with_retries(target, [&](const std::string& body) {
            return explorer_detail::parse_source_response(address, body);
        });
        b.fetched_at = clock_->unix_seconds();
        b.origin = SourceOrigin::live;
        store_source(b);
        return b;
    }

    ContractMetadata fetch_metadata(const Address& address) {
        if (auto f = read_fixture(address)) {
            ContractMetadata m;
            if (f->contains("metadata") && (*f)["metadata"].is_object()) m = metadata_from_json((*f)["metadata"]);
            m.origin = SourceOrigin::fixture;
            return m;
        }
        auto key_lock = lock_for(address);
        std::lock_guard guard(*key_lock);
        if (auto cached = cached_metadata(address)) {
            cached->origin = SourceOrigin::cache;
            return *cached;
        }
        if (offline()) {
            ContractMetadata miss;
            miss.origin = SourceOrigin::fixture;
            return miss;
        }
        std::string target =
            query("account", "txlist", address, "&startblock=0&endblock=99999999&page=1&offset=10000&sort=asc");
        ContractMetadata m = with_retries(target, explorer_detail::parse_txlist_response);
        m.fetched_at = clock_->unix_seconds();
        m.origin = SourceOrigin::live;
        store_metadata(address, m);
        return m;
    }

  private:
    std::string query(const char* module, const char* action, const Address& address, const std::string& extra) const {
        std::string q = std::string("?module=") + module + "&action=" + action + "&address=" + address.hex() + extra;
        if (!config_.api_key.empty()) q += "&apikey=" + explorer_detail::url_encode(config_.api_key);
        return q;
    }

    template <typename Parse>
    auto with_retries(const std::string& target, Parse&& parse) -> decltype(parse(std::string{})) {
        if (!transport_) throw TransientError("no transport configured", {});
        std::vector<std::string> attempts;
        auto backoff = std::chrono::duration_cast<Clock::duration>(config_.initial_backoff);
        for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
            if (attempt > 0) {
                clock_->sleep_for(backoff);
                backoff *= 2;
            }
            limiter_.acquire();
            std::string failure;
            try {
                HttpResponse r = transport_->get(target);
                if (r.status == 429 || r.status >= 500) {
                    failure = "HTTP " + std::to_string(r.status);
                } else if (r.status != 200) {
                    throw ProtocolError("explorer returned HTTP " + std::to_string(r.status));
                } else {
                    return parse(r.body);
                }
            } catch (const TransportFailure& e) {
                failure = e.what();
            } catch (const explorer_detail::RetryableResponse& e) {
                failure = std::string("throttled: ") + e.what();
            }
            attempts.push_back("attempt " + std::to_string(attempt + 1) + ": " + failure);
        }
        throw TransientError("explorer unavailable after " + std::to_string(attempts.size()) + " attempts",
                             std::move(attempts));
    }

    std::shared_ptr<std::mutex> lock_for(const Address& a) {
        std::lock_guard lock(mutex_);
        auto& m = key_locks_[a];
        if (!m) m = std::make_shared<std::mutex>();
        return m;
    }

    std::optional<json> read_fixture(const Address& a) const {
        if (!config_.offline_fixture_dir) return std::nullopt;
        return read_json_file(*config_.offline_fixture_dir / (a.hex() + ".json"));
    }

    static std::optional<json> read_json_file(const std::filesystem::path& p) {
        std::ifstream in(p);
        if (!in) return std::nullopt;
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.is_object()) return std::nullopt;
        return j;
    }

    std::optional<std::filesystem::path> cache_path(const char* kind, const Address& a) const {
        if (!config_.cache_dir) return std::nullopt;
        return *config_.cache_dir / kind / (a.hex() + ".json");
    }

    static void write_json_file(const std::filesystem::path& p, const json& j) {
        std::filesystem::create_directories(p.parent_path());
        std::ofstream out(p, std::ios::trunc);
        out << j.dump() << "\n";
    }

    bool fresh(std::uint64_t fetched_at) {
        return clock_->unix_seconds() < fetched_at + config_.metadata_ttl_seconds;
    }

    // Verified source never expires; an unverified answer is rechecked after the metadata TTL.
    std::optional<SourceBundle> cached_source(const Address& a) {
        std::optional<SourceBundle> hit;
        {
            std::lock_guard lock(mutex_);
            if (auto it = sources_.find(a); it != sources_.end()) hit = it->second;
        }
        if (!hit) {
            if (auto p = cache_path("source", a))
                if (auto j = read_json_file(*p)) hit = bundle_from_json(*j, a);
            if (hit) {
                std::lock_guard lock(mutex_);
                sources_[a] = *hit;
            }
        }
        if (hit && !hit->verified && !fresh(hit->fetched_at)) return std::nullopt;
        return hit;
    }

    void store_source(const SourceBundle& b) {
        {
            std::lock_guard lock(mutex_);
            sources_[b.address] = b;
        }
        if (auto p = cache_path("source", b.address)) write_json_file(*p, to_json(b));
    }

    std::optional<ContractMetadata> cached_metadata(const Address& a) {
        std::optional<ContractMetadata> hit;
        {
            std::lock_guard lock(mutex_);
            if (auto it = metadata_.find(a); it != metadata_.end()) hit = it->second;
        }
        if (!hit) {
            if (auto p = cache_path("metadata", a))
                if (auto j = read_json_file(*p)) hit = metadata_from_json(*j);
            if (hit) {
                std::lock_guard lock(mutex_);
                metadata_[a] = *hit;
            }
        }
        if (hit && !fresh(hit->fetched_at)) return std::nullopt;
        return hit;
    }

    void store_metadata(const Address& a, const ContractMetadata& m) {
        {
            std::lock_guard lock(mutex_);
            metadata_[a] = m;
        }
        if (auto p = cache_path("metadata", a)) write_json_file(*p, to_json(m));
    }

    ClientConfig config_;
    std::shared_ptr<Transport> transport_;
    std::shared_ptr<Clock> clock_;
    RateLimiter limiter_;

    std::mutex mutex_;
    std::map<Address, std::shared_ptr<std::mutex>> key_locks_;
    std::map<Address, SourceBundle> sources_;
    std::map<Address, ContractMetadata> metadata_;
};

}  // namespace evochain
