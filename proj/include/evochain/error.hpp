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

#include <stdexcept>
#include <string>
#include <vector>

namespace evochain {

enum class ErrorKind {
    validation,
    io,
    referential_integrity,
    schema,
    corruption,
    contract_violation,
    transient,
    protocol,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::validation: return "validation";
        case ErrorKind::io: return "io";
        case ErrorKind::referential_integrity: return "referential_integrity";
        case ErrorKind::schema: return "schema";
        case ErrorKind::corruption: return "corruption";
        case ErrorKind::contract_violation: return "contract_violation";
        case ErrorKind::transient: return "transient";
        case ErrorKind::protocol: return "protocol";
    }
    return "unknown";
}

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error(ErrorKind::validation, m) {}
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error(ErrorKind::io, m) {}
};

struct IntegrityError : Error {
    explicit IntegrityError(const std::string& m) : Error(ErrorKind::referential_integrity, m) {}
};

struct SchemaError : Error {
    explicit SchemaError(const std::string& m) : Error(ErrorKind::schema, m) {}
};

struct CorruptionError : Error {
    explicit CorruptionError(const std::string& m) : Error(ErrorKind::corruption, m) {}
};

struct ContractViolation : Error {
    explicit ContractViolation(const std::string& m) : Error(ErrorKind::contract_violation, m) {}
};

struct ProtocolError : Error {
    explicit ProtocolError(const std::string& m) : Error(ErrorKind::protocol, m) {}
};

// Raised once the retry budget of a remote call is exhausted; carries one
// line per attempt.
class TransientError : public Error {
  public:
    TransientError(const std::string& m, std::vector<std::string> attempts)
        : Error(ErrorKind::transient, m), attempts_(std::move(attempts)) {}

    const std::vector<std::string>& attempts() const noexcept { return attempts_; }

  private:
    std::vector<std::string> attempts_;
};

}  // namespace evochain
