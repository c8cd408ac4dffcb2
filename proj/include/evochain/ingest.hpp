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

// Newline-delimited JSON ingestion of blockchain export files (event logs,
// contract creations, transactions, vulnerability findings) into a
// normalized, key-ordered in-memory dataset.

#include <evochain/bytes.hpp>
#include <evochain/error.hpp>

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace evochain {

using json = nlohmann::json;

struct LogRecord {
    Address address;
    std::vector<Hash32> topics;
    Bytes data;
    std::uint64_t block_number = 0;
    std::uint64_t log_index = 0;
    Hash32 tx_hash;

    std::pair<std::uint64_t, std::uint64_t> key() const { return {block_number, log_index}; }
    bool operator==(const LogRecord&) const = default;
};

struct ContractCreation {
    Address address;
    Address creator;
    Bytes runtime_bytecode;
    std::uint64_t block_number = 0;
    std::uint64_t block_timestamp = 0;
    Hash32 tx_hash;
    std::optional<std::uint64_t> gas_used;

    bool operator==(const ContractCreation&) const = default;
};

struct TxSummary {
    std::optional<Address> to;  // absent for contract-creation transactions
    std::uint64_t block_number = 0;
    std::uint64_t block_timestamp = 0;
    Hash32 tx_hash;

    bool operator==(const TxSummary&) const = default;
};

enum class Severity { low, medium, high };

inline const char* to_string(Severity s) {
    switch (s) {
        case Severity::low: return "low";
        case Severity::medium: return "medium";
        case Severity::high: return "high";
    }
    return "low";
}

inline Severity parse_severity(std::string_view s) {
    if (s == "low") return Severity::low;
    if (s == "medium") return Severity::medium;
    if (s == "high") return Severity::high;
    throw ValidationError("severity must be one of low|medium|high, got '" + std::string(s) + "'");
}

struct VulnFinding {
    Address address;
    std::string detector;
    std::string category;
    Severity severity = Severity::low;
    std::string source_location;

    auto key() const { return std::tie(address, detector, category, source_location); }
    bool operator==(const VulnFinding&) const = default;
};

enum class RecordKind { logs, creations, transactions, vuln_findings };

inline const char* to_string(RecordKind k) {
    switch (k) {
        case RecordKind::logs: return "logs";
        case RecordKind::creations: return "creations";
        case RecordKind::transactions: return "transactions";
        case RecordKind::vuln_findings: return "vuln_findings";
    }
    return "logs";
}

inline RecordKind parse_record_kind(std::string_view s) {
    if (s == "logs") return RecordKind::logs;
    if (s == "creations") return RecordKind::creations;
    if (s == "transactions") return RecordKind::transactions;
    if (s == "vuln_findings") return RecordKind::vuln_findings;
    throw ValidationError("unknown record kind '" + std::string(s) + "'");
}

struct Rejection {
    std::size_t line = 0;  // 1-based
    std::string reason;
};

struct IngestStats {
    std::size_t records_read = 0;
    std::size_t records_accepted = 0;
    std::size_t records_rejected = 0;
    std::optional<std::string> first_error;
    std::vector<Rejection> rejections;
};

namespace ingest_detail {

inline const json& require(const json& obj, std::initializer_list<const char*> names) {
    for (const char* n : names) {
        auto it = obj.find(n);
        if (it != obj.end() && !it->is_null()) return *it;
    }
    throw ValidationError(std::string("missing field '") + *names.begin() + "'");
}

inline const json* optional_field(const json& obj, std::initializer_list<const char*> names) {
    for (const char* n : names) {
        auto it = obj.find(n);
        if (it != obj.end() && !it->is_null()) return &*it;
    }
    return nullptr;
}

// Integers arrive as JSON numbers, decimal strings, or 0x-prefixed hex strings.
inline std::uint64_t to_u64(const json& v, const char* name) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        auto i = v.get<std::int64_t>();
        if (i < 0) throw ValidationError(std::string("field '") + name + "' is negative");
        return static_cast<std::uint64_t>(i);
    }
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (s.empty()) throw ValidationError(std::string("field '") + name + "' is empty");
        std::uint64_t out = 0;
        bool hex = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
        for (std::size_t i = hex ? 2 : 0; i < s.size(); ++i) {
            int d = hex ? detail::hex_value(s[i]) : (s[i] >= '0' && s[i] <= '9' ? s[i] - '0' : -1);
            if (d < 0) throw ValidationError(std::string("field '") + name + "' is not an integer");
            std::uint64_t base = hex ? 16 : 10;
            if (out > (UINT64_MAX - static_cast<std::uint64_t>(d)) / base)
                throw ValidationError(std::string("field '") + name + "' overflows 64 bits");
            out = out * base + static_cast<std::uint64_t>(d);
        }
        return out;
    }
    throw ValidationError(std::string("field '") + name + "' is not an integer");
}

inline const std::string& to_str(const json& v, const char* name) {
    if (!v.is_string()) throw ValidationError(std::string("field '") + name + "' is not a string");
    return v.get_ref<const std::string&>();
}

inline Address to_address(const json& v, const char* name) {
    return normalize_address(to_str(v, name));
}

inline Hash32 to_hash(const json& v, const char* name) {
    const auto& s = to_str(v, name);
    try {
        return Hash32::parse(s);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("field '") + name + "': " + e.what());
    }
}

}  // namespace ingest_detail

inline LogRecord parse_log(const json& j) {
    using namespace ingest_detail;
    LogRecord r;
    r.address = to_address(require(j, {"address"}), "address");
    const json& topics = require(j, {"topics"});
    if (topics.is_array()) {
        for (const auto& t : topics) r.topics.push_back(to_hash(t, "topics"));
    } else if (topics.is_string()) {
        // comma-separated form used by some CSV-derived exports
        std::stringstream ss(topics.get<std::string>());
        for (std::string part; std::getline(ss, part, ',');)
            if (!part.empty()) r.topics.push_back(to_hash(json(part), "topics"));
    } else {
        throw ValidationError("field 'topics' must be an array");
    }
    if (r.topics.size() > 4) throw ValidationError("more than 4 topics");
    if (const json* d = optional_field(j, {"data"})) r.data = from_hex(to_str(*d, "data"));
    r.block_number = to_u64(require(j, {"block_number"}), "block_number");
    r.log_index = to_u64(require(j, {"log_index"}), "log_index");
    r.tx_hash = to_hash(require(j, {"transaction_hash", "tx_hash"}), "transaction_hash");
    return r;
}

inline ContractCreation parse_creation(const json& j) {
    using namespace ingest_detail;
    ContractCreation r;
    r.address = to_address(require(j, {"address"}), "address");
    if (const json* c = optional_field(j, {"creator", "from_address"})) r.creator = to_address(*c, "creator");
    r.runtime_bytecode = from_hex(to_str(require(j, {"bytecode", "runtime_bytecode"}), "bytecode"));
    r.block_number = to_u64(require(j, {"block_number"}), "block_number");
    r.block_timestamp = to_u64(require(j, {"block_timestamp"}), "block_timestamp");
    if (const json* h = optional_field(j, {"transaction_hash", "tx_hash"})) r.tx_hash = to_hash(*h, "transaction_hash");
    if (const json* g = optional_field(j, {"gas_used", "receipt_gas_used"})) r.gas_used = to_u64(*g, "gas_used");
    return r;
}

inline TxSummary parse_transaction(const json& j) {
    using namespace ingest_detail;
    TxSummary r;
    if (const json* to = optional_field(j, {"to_address", "to"})) {
        if (!(to->is_string() && to->get_ref<const std::string&>().empty())) r.to = to_address(*to, "to_address");
    }
    r.block_number = to_u64(require(j, {"block_number"}), "block_number");
    r.block_timestamp = to_u64(require(j, {"block_timestamp"}), "block_timestamp");
    r.tx_hash = to_hash(require(j, {"hash", "transaction_hash"}), "hash");
    return r;
}

inline VulnFinding parse_finding(const json& j) {
    using namespace ingest_detail;
    VulnFinding r;
    r.address = to_address(require(j, {"address"}), "address");
    r.detector = to_str(require(j, {"detector"}), "detector");
    r.category = to_str(require(j, {"category"}), "category");
    if (r.category.empty()) throw ValidationError("field 'category' is empty");
    r.severity = parse_severity(to_str(require(j, {"severity"}), "severity"));
    if (const json* loc = optional_field(j, {"source_location"})) r.source_location = to_str(*loc, "source_location");
    return r;
}

// Canonical serialization. Field names are fixed and nlohmann orders object
// keys, so equal records always produce equal text.
inline json to_json(const LogRecord& r) {
    json topics = json::array();
    for (const auto& t : r.topics) topics.push_back(t.hex());
    return {{"address", r.address.hex()}, {"topics", topics},          {"data", to_hex(r.data)},
            {"block_number", r.block_number}, {"log_index", r.log_index}, {"transaction_hash", r.tx_hash.hex()}};
}

inline json to_json(const ContractCreation& r) {
    json j = {{"address", r.address.hex()},
              {"creator", r.creator.hex()},
              {"bytecode", to_hex(r.runtime_bytecode)},
              {"block_number", r.block_number},
              {"block_timestamp", r.block_timestamp},
              {"transaction_hash", r.tx_hash.hex()}};
    j["gas_used"] = r.gas_used ? json(*r.gas_used) : json(nullptr);
    return j;
}

inline json to_json(const TxSummary& r) {
    return {{"to_address", r.to ? json(r.to->hex()) : json(nullptr)},
            {"block_number", r.block_number},
            {"block_timestamp", r.block_timestamp},
            {"hash", r.tx_hash.hex()}};
}

inline json to_json(const VulnFinding& r) {
    return {{"address", r.address.hex()},   {"detector", r.detector}, {"category", r.category},
            {"severity", to_string(r.severity)}, {"source_location", r.source_location}};
}

// Ingested records keyed by primary key. Appends are internally synchronized;
// readers must wait until every ingest_file call has returned.
class Dataset {
  public:
    using LogKey = std::pair<std::uint64_t, std::uint64_t>;
    using FindingKey = std::tuple<Address, std::string, std::string, std::string>;

    Dataset() = default;
    Dataset(Dataset&& other) noexcept {
        std::lock_guard lock(other.mutex_);
        logs_ = std::move(other.logs_);
        creations_ = std::move(other.creations_);
        transactions_ = std::move(other.transactions_);
        findings_ = std::move(other.findings_);
    }
    Dataset& operator=(Dataset&&) = delete;

    IngestStats ingest_file(const std::filesystem::path& path, RecordKind kind) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot read " + path.string());
        return ingest_stream(in, kind);
    }

    IngestStats ingest_stream(std::istream& in, RecordKind kind) {
        IngestStats stats;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            ++stats.records_read;
            std::string reason;
            try {
                json j = json::parse(line);
                if (!j.is_object()) throw ValidationError("line is not a JSON object");
                reason = insert(j, kind);
            } catch (const json::exception& e) {
                reason = std::string("malformed JSON: ") + e.what();
            } catch (const ValidationError& e) {
                reason = e.what();
            }
            if (reason.empty()) {
                ++stats.records_accepted;
            } else {
                ++stats.records_rejected;
                if (!stats.first_error) stats.first_error = "line " + std::to_string(line_no) + ": " + reason;
                stats.rejections.push_back({line_no, std::move(reason)});
            }
        }
        if (in.bad()) throw IoError("read error");
        return stats;
    }

    void add(const LogRecord& r) { insert_checked(logs_, r.key(), r); }
    void add(const ContractCreation& r) { insert_checked(creations_, r.address, r); }
    void add(const TxSummary& r) { insert_checked(transactions_, r.tx_hash, r); }
    void add(const VulnFinding& r) {
        insert_checked(findings_, FindingKey{r.address, r.detector, r.category, r.source_location}, r);
    }

    const std::map<LogKey, LogRecord>& logs() const { return logs_; }
    const std::map<Address, ContractCreation>& creations() const { return creations_; }
    const std::map<Hash32, TxSummary>& transactions() const { return transactions_; }
    const std::map<FindingKey, VulnFinding>& findings() const { return findings_; }

    bool empty() const {
        return logs_.empty() && creations_.empty() && transactions_.empty() && findings_.empty();
    }

    // Section header lines followed by canonical records in key order.
    std::string canonical_text(RecordKind kind) const {
        std::lock_guard lock(mutex_);
        std::string out;
        auto emit = [&](const auto& map) {
            for (const auto& [k, v] : map) out += to_json(v).dump() + "\n";
        };
        switch (kind) {
            case RecordKind::logs: emit(logs_); break;
            case RecordKind::creations: emit(creations_); break;
            case RecordKind::transactions: emit(transactions_); break;
            case RecordKind::vuln_findings: emit(findings_); break;
        }
        return out;
    }

    std::string canonical_serialization() const {
        std::string out;
        for (RecordKind k : {RecordKind::logs, RecordKind::creations, RecordKind::transactions, RecordKind::vuln_findings}) {
            out += std::string("#") + to_string(k) + "\n";
            out += canonical_text(k);
        }
        return out;
    }

    Hash32 digest() const { return keccak_hash(canonical_serialization()); }

  private:
    template <typename Map, typename Key, typename Value>
    void insert_checked(Map& map, const Key& key, const Value& v) {
        std::lock_guard lock(mutex_);
        if (!map.emplace(key, v).second) throw ValidationError("duplicate primary key");
    }

    std::string insert(const json& j, RecordKind kind) {
        try {
            switch (kind) {
                case RecordKind::logs: add(parse_log(j)); break;
                case RecordKind::creations: add(parse_creation(j)); break;
                case RecordKind::transactions: add(parse_transaction(j)); break;
                case RecordKind::vuln_findings: add(parse_finding(j)); break;
            }
        } catch (const ValidationError& e) {
            return e.what();
        }
        return {};
    }

    mutable std::mutex mutex_;
    std::map<LogKey, LogRecord> logs_;
    std::map<Address, ContractCreation> creations_;
    std::map<Hash32, TxSummary> transactions_;
    std::map<FindingKey, VulnFinding> findings_;
};

inline std::string dataset_file_name(RecordKind kind) { return std::string(to_string(kind)) + ".ndjson"; }

// Writes <dir>/{logs,creations,transactions,vuln_findings}.ndjson and <dir>/digest.
inline void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (RecordKind k : {RecordKind::logs, RecordKind::creations, RecordKind::transactions, RecordKind::vuln_findings}) {
        std::ofstream out(dir / dataset_file_name(k), std::ios::binary | std::ios::trunc);
        out << ds.canonical_text(k);
        if (!out) throw IoError("cannot write " + (dir / dataset_file_name(k)).string());
    }
    std::ofstream out(dir / "digest", std::ios::binary | std::ios::trunc);
    out << ds.digest().hex() << "\n";
    if (!out) throw IoError("cannot write " + (dir / "digest").string());
}

// Loads a directory written by save_dataset; any rejected record or digest
// mismatch means the dataset is corrupt.
inline void load_dataset(Dataset& ds, const std::filesystem::path& dir) {
    for (RecordKind k : {RecordKind::logs, RecordKind::creations, RecordKind::transactions, RecordKind::vuln_findings}) {
        auto stats = ds.ingest_file(dir / dataset_file_name(k), k);
        if (stats.records_rejected != 0)
            throw CorruptionError(dataset_file_name(k) + ": " + stats.first_error.value_or("rejected records"));
    }
    std::ifstream in(dir / "digest");
    std::string expected;
    if (!(in >> expected)) throw CorruptionError("missing dataset digest");
    if (expected != ds.digest().hex()) throw CorruptionError("dataset digest mismatch");
}

}  // namespace evochain
