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

#include <evochain/api_service.hpp>

#include <httplib.h>

#include <memory>
#include <string>

namespace evochain {

// HTTP/1.1 listener forwarding every request to an ApiService.
class ApiServer {
  public:
    explicit ApiServer(std::shared_ptr<const ApiService> service) : service_(std::move(service)) {
        auto forward = [this](const httplib::Request& req, httplib::Response& res) {
            ApiRequest r{req.method, req.path, {}};
            for (const auto& [k, v] : req.params) r.query.emplace(k, v);
            ApiResponse out = service_->handle(r);
            res.status = out.status;
            for (const auto& [k, v] : out.headers)
                if (k != "Content-Type") res.set_header(k, v);
            if (out.status != 204) res.set_content(out.body.dump(), "application/json");
        };
        server_.Get(".*", forward);
        server_.Post(".*", forward);
        server_.Put(".*", forward);
        server_.Delete(".*", forward);
        server_.Patch(".*", forward);
        server_.Options(".*", forward);
        // no SO_REUSEPORT: a second server on a busy port must fail to bind
        server_.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
        });
    }

    // Returns the bound port; throws IoError when the address is unavailable.
    int bind(const std::string& host, int port) {
        int bound = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
        if (bound < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
        return bound;
    }

    // Blocks until stop() is called.
    bool listen() { return server_.listen_after_bind(); }
    void stop() { server_.stop(); }
    void wait_until_ready() { server_.wait_until_ready(); }

  private:
    std::shared_ptr<const ApiService> service_;
    httplib::Server server_;
};

}  // namespace evochain
