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

#include <evochain/ingest.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evochain {

struct SourceDiff {
    std::set<std::string> added_functions;
    std::set<std::string> removed_functions;
    std::set<std::string> modified_functions;
    std::size_t lines_added = 0;
    std::size_t lines_removed = 0;

    bool empty() const {
        return added_functions.empty() && removed_functions.empty() && modified_functions.empty() &&
               lines_added == 0 && lines_removed == 0;
    }
    bool operator==(const SourceDiff&) const = default;
};

namespace source_detail {

// Replaces comments with a space and string/char literal contents with
// nothing, keeping the quotes. Newlines inside block comments survive so line
// structure is unchanged.
inline std::string strip_comments_and_strings(std::string_view src) {
    std::string out;
    out.reserve(src.size());
    for (std::size_t i = 0; i < src.size();) {
        char c = src[i];
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n') ++i;
            out += ' ';
        } else if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            i += 2;
            while (i < src.size() && !(src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/')) {
                if (src[i] == '\n') out += '\n';
                ++i;
            }
            i = std::min(src.size(), i + 2);
            out += ' ';
        } else if (c == '"' || c == '\'') {
            out += c;
            ++i;
            while (i < src.size() && src[i] != c && src[i] != '\n') {
                if (src[i] == '\\') ++i;
                ++i;
            }
            if (i < src.size() && src[i] == c) ++i;
            out += c;
        } else {
            out += c;
            ++i;
        }
    }
    return out;
}

inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            space = !out.empty();
        } else {
            if (space) out += ' ';
            out += c;
            space = false;
        }
    }
    return out;
}

// Canonical ABI spelling of a parameter's type: drops the parameter name and
// data-location keywords, widens uint/int/byte aliases.
inline std::string canonical_param_type(std::string_view param) {
    std::string p = collapse_whitespace(param);
    if (p.empty()) return {};
    // mapping(...) or function(...) types keep their parenthesized spelling
    std::string type;
    std::size_t depth = 0, i = 0;
    for (; i < p.size(); ++i) {
        char c = p[i];
        if (c == '(') ++depth;
        if (c == ')' && depth > 0) --depth;
        if (c == ' ' && depth == 0) {
            // array suffix may follow a space: "uint256 []"
            std::size_t j = i;
            while (j < p.size() && p[j] == ' ') ++j;
            if (j < p.size() && p[j] == '[') {
                i = j - 1;
                continue;
            }
            break;
        }
        type += c;
    }
    std::string base = type.substr(0, type.find('['));
    std::string suffix = type.substr(base.size());
    if (base == "uint") base = "uint256";
    else if (base == "int") base = "int256";
    else if (base == "byte") base = "bytes1";
    else if (base == "ufixed") base = "ufixed128x18";
    else if (base == "fixed") base = "fixed128x18";
    return base + suffix;
}

inline std::vector<std::string> split_params(std::string_view list) {
    std::vector<std::string> out;
    std::size_t depth = 0, start = 0;
    for (std::size_t i = 0; i <= list.size(); ++i) {
        if (i == list.size() || (list[i] == ',' && depth == 0)) {
            std::string t = canonical_param_type(list.substr(start, i - start));
            if (!t.empty()) out.push_back(std::move(t));
            start = i + 1;
            continue;
        }
        if (list[i] == '(' || list[i] == '[') ++depth;
        if ((list[i] == ')' || list[i] == ']') && depth > 0) --depth;
    }
    return out;
}

}  // namespace source_detail

// Function signature -> whitespace-normalized body text (empty for bodiless
// declarations). Repeated signatures (overrides across contracts in one file)
// have their bodies concatenated.
inline std::map<std::string, std::string> extract_functions(std::string_view source) {
    using namespace source_detail;
    const std::string text = strip_comments_and_strings(source);
    std::map<std::string, std::string> out;
    static constexpr std::string_view kw = "function";

    for (std::size_t pos = text.find(kw); pos != std::string::npos; pos = text.find(kw, pos + 1)) {
        if (pos > 0 && ident_char(text[pos - 1])) continue;
        std::size_t i = pos + kw.size();
        if (i < text.size() && ident_char(text[i])) continue;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t name_begin = i;
        while (i < text.size() && ident_char(text[i])) ++i;
        std::string name = text.substr(name_begin, i - name_begin);
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (name.empty() || i >= text.size() || text[i] != '(') continue;  // function types, fallback(), etc.

        std::size_t depth = 0, close = i;
        for (; close < text.size(); ++close) {
            if (text[close] == '(') ++depth;
            else if (text[close] == ')' && --depth == 0) break;
        }
        if (close >= text.size()) break;
        auto params = split_params(std::string_view(text).substr(i + 1, close - i - 1));
        std::string sig = name + "(";
        for (std::size_t k = 0; k < params.size(); ++k) sig += (k ? "," : "") + params[k];
        sig += ")";

        // Header (visibility, modifiers, returns) runs until ';' or the body's '{'.
        std::size_t j = close + 1;
        std::size_t paren = 0;
        for (; j < text.size(); ++j) {
            char c = text[j];
            if (c == '(') ++paren;
            else if (c == ')' && paren > 0) --paren;
            else if (paren == 0 && (c == ';' || c == '{')) break;
        }
        std::string body;
        if (j < text.size() && text[j] == '{') {
            std::size_t braces = 0, k = j;
            for (; k < text.size(); ++k) {
                if (text[k] == '{') ++braces;
                else if (text[k] == '}' && --braces == 0) break;
            }
            body = collapse_whitespace(std::string_view(text).substr(j + 1, std::min(k, text.size()) - j - 1));
            pos = std::min(k, text.size() - 1);
        }
        auto [it, inserted] = out.emplace(sig, body);
        if (!inserted) it->second += "\n" + body;
    }
    return out;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

// Length of the longest common subsequence of two line sequences, after
// trimming the shared prefix and suffix. O(n*m) time, O(m) memory.
inline std::size_t lcs_length(std::span<const std::string_view> a, std::span<const std::string_view> b) {
    std::size_t prefix = 0;
    while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
    std::size_t suffix = 0;
    while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
           a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix])
        ++suffix;
    auto x = a.subspan(prefix, a.size() - prefix - suffix);
    auto y = b.subspan(prefix, b.size() - prefix - suffix);

    std::vector<std::uint32_t> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
    for (std::size_t i = 1; i <= x.size(); ++i) {
        for (std::size_t j = 1; j <= y.size(); ++j)
            cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prefix + suffix + prev[y.size()];
}

inline SourceDiff diff_sources(std::string_view old_source, std::string_view new_source) {
    SourceDiff d;
    if (old_source == new_source) return d;

    auto old_fns = extract_functions(old_source);
    auto new_fns = extract_functions(new_source);
    for (const auto& [sig, body] : new_fns) {
        auto it = old_fns.find(sig);
        if (it == old_fns.end()) d.added_functions.insert(sig);
        else if (it->second != body) d.modified_functions.insert(sig);
    }
    for (const auto& [sig, body] : old_fns)
        if (!new_fns.contains(sig)) d.removed_functions.insert(sig);

    auto a = split_lines(old_source);
    auto b = split_lines(new_source);
    std::size_t common = lcs_length(a, b);
    d.lines_removed = a.size() - common;
    d.lines_added = b.size() - common;
    return d;
}

enum class ChangeCategory { VulnerabilityFix, FeatureModification, GasOptimization, Other };

inline const char* to_string(ChangeCategory c) {
    switch (c) {
        case ChangeCategory::VulnerabilityFix: return "VulnerabilityFix";
        case ChangeCategory::FeatureModification: return "FeatureModification";
        case ChangeCategory::GasOptimization: return "GasOptimization";
        case ChangeCategory::Other: return "Other";
    }
    return "Other";
}

inline ChangeCategory parse_change_category(std::string_view s) {
    for (auto c : {ChangeCategory::VulnerabilityFix, ChangeCategory::FeatureModification,
                   ChangeCategory::GasOptimization, ChangeCategory::Other})
        if (s == to_string(c)) return c;
    throw ValidationError("unknown change category '" + std::string(s) + "'");
}

struct ChangeReport {
    std::uint32_t from_version = 0;
    std::uint32_t to_version = 0;
    std::vector<ChangeCategory> categories;  // VulnerabilityFix, FeatureModification, GasOptimization order
    std::vector<std::string> evidence;

    bool operator==(const ChangeReport&) const = default;
};

inline constexpr double default_gas_threshold = 0.05;

inline std::string format_gas_delta(std::uint64_t old_gas, std::uint64_t new_gas) {
    double pct = (static_cast<double>(new_gas) - static_cast<double>(old_gas)) / static_cast<double>(old_gas) * 100.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "gas:%+.1f%%", pct);
    return buf;
}

inline ChangeReport classify_change(const SourceDiff& diff, std::span<const VulnFinding> old_findings,
                                    std::span<const VulnFinding> new_findings, std::optional<std::uint64_t> old_gas,
                                    std::optional<std::uint64_t> new_gas, double gas_threshold = default_gas_threshold) {
    ChangeReport r;

    std::set<std::string> before, after;
    for (const auto& f : old_findings) before.insert(f.category);
    for (const auto& f : new_findings) after.insert(f.category);
    std::vector<std::string> fixed;
    std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(fixed));
    if (!fixed.empty()) {
        r.categories.push_back(ChangeCategory::VulnerabilityFix);
        for (const auto& c : fixed) r.evidence.push_back("fixed:" + c);
    }

    const bool feature = !diff.added_functions.empty() || !diff.removed_functions.empty();
    if (feature) {
        r.categories.push_back(ChangeCategory::FeatureModification);
        for (const auto& s : diff.added_functions) r.evidence.push_back("sig+:" + s);
        for (const auto& s : diff.removed_functions) r.evidence.push_back("sig-:" + s);
    }

    if (!feature && old_gas && new_gas && *new_gas < *old_gas &&
        static_cast<double>(*new_gas) <= static_cast<double>(*old_gas) * (1.0 - gas_threshold)) {
        r.categories.push_back(ChangeCategory::GasOptimization);
        r.evidence.push_back(format_gas_delta(*old_gas, *new_gas));
    }

    if (r.categories.empty()) {
        r.categories.push_back(ChangeCategory::Other);
        for (const auto& s : diff.modified_functions) r.evidence.push_back("mod:" + s);
        if (diff.lines_added || diff.lines_removed)
            r.evidence.push_back("lines:+" + std::to_string(diff.lines_added) + "/-" +
                                 std::to_string(diff.lines_removed));
    }
    return r;
}

}  // namespace evochain
