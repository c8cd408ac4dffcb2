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

// Live HTTP(S) transport for ExplorerClient, backed by cpp-httplib.
// HTTPS requires building with CPPHTTPLIB_OPENSSL_SUPPORT.

#include <evochain/explorer_client.hpp>

#include <httplib.h>

#include <memory>
#include <string>

namespace evochain {

class HttplibTransport final : public Transport {
  public:
    explicit HttplibTransport(const std::string& base_url, std::chrono::seconds timeout = std::chrono::seconds(20)) {
        // split "scheme://host[:port]/path" into origin and path prefix
        auto scheme_end = base_url.find("://");
        if (scheme_end == std::string::npos) throw ValidationError("base_url needs a scheme: '" + base_url + "'");
        auto path_begin = base_url.find('/', scheme_end + 3);
        origin_ = base_url.substr(0, path_begin);
        path_ = path_begin == std::string::npos ? "/" : base_url.substr(path_begin);
        client_ = std::make_unique<httplib::Client>(origin_);
        client_->set_connection_timeout(timeout);
        client_->set_read_timeout(timeout);
        client_->set_follow_location(true);
    }

    HttpResponse get(const std::string& target) override {
        std::lock_guard lock(mutex_);
        auto res = client_->Get(path_ + target);
        if (!res) throw TransportFailure("GET " + origin_ + path_ + ": " + httplib::to_string(res.error()));
        return {res->status, res->body};
    }

  private:
    std::string origin_;
    std::string path_;
    std::unique_ptr<httplib::Client> client_;
    std::mutex mutex_;
};

inline std::shared_ptr<ExplorerClient> make_explorer_client(ClientConfig config,
                                                            std::shared_ptr<Clock> clock = std::make_shared<SystemClock>()) {
    std::shared_ptr<Transport> transport;
    if (!config.offline_fixture_dir) transport = std::make_shared<HttplibTransport>(config.base_url);
    return std::make_shared<ExplorerClient>(std::move(config), std::move(transport), std::move(clock));
}

}  // namespace evochain
