/*
 * Copyright 2026 tabforge authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "tabforge/synth.hpp"

namespace tabforge {

namespace {

using nlohmann::json;

struct Endpoint {
    std::string base; // scheme://host[:port]
    std::string path;
};

Endpoint split_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::external_client, "endpoint must include a scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return Endpoint{url, "/"};
    }
    return Endpoint{url.substr(0, path_start), url.substr(path_start)};
}

class HttpCompletionClient final : public TextCompletionClient {
public:
    HttpCompletionClient(std::string endpoint, std::string model, std::string api_key)
        : endpoint_(split_endpoint(endpoint)), model_(std::move(model)), api_key_(std::move(api_key)) {}

    std::string complete(const std::string& prompt) override {
        httplib::Client client(endpoint_.base);
        client.set_read_timeout(120, 0);
        httplib::Headers headers;
        if (!api_key_.empty()) {
            headers.emplace("Authorization", "Bearer " + api_key_);
        }
        json request;
        request["model"] = model_;
        request["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
        const auto response = client.Post(endpoint_.path, headers, request.dump(), "application/json");
        if (!response) {
            throw Error(ErrorCode::external_client,
                        "request to " + endpoint_.base + " failed: " +
                            httplib::to_string(response.error()));
        }
        if (response->status < 200 || response->status >= 300) {
            throw Error(ErrorCode::external_client,
                        "endpoint returned status " + std::to_string(response->status));
        }
        json body;
        try {
            body = json::parse(response->body);
        } catch (const json::exception&) {
            // plain-text endpoints are accepted as-is
            return response->body;
        }
        if (body.contains("choices") && body["choices"].is_array() && !body["choices"].empty()) {
            const json& choice = body["choices"][0];
            if (choice.contains("message") && choice["message"].contains("content")) {
                return choice["message"]["content"].get<std::string>();
            }
            if (choice.contains("text")) {
                return choice["text"].get<std::string>();
            }
        }
        if (body.contains("content") && body["content"].is_string()) {
            return body["content"].get<std::string>();
        }
        throw Error(ErrorCode::external_client, "unrecognised completion response shape");
    }

private:
    Endpoint endpoint_;
    std::string model_;
    std::string api_key_;
};

std::string env_or_empty(const char* name) {
    const char* value = std::getenv(name);
    return value == nullptr ? std::string() : std::string(value);
}

} // namespace

std::unique_ptr<TextCompletionClient> http_client_from_env() {
    const std::string endpoint = env_or_empty("TABFORGE_LLM_ENDPOINT");
    if (endpoint.empty()) {
        throw Error(ErrorCode::external_client,
                    "TABFORGE_LLM_ENDPOINT is not set; use offline mode or configure the endpoint");
    }
    std::string model = env_or_empty("TABFORGE_LLM_MODEL");
    if (model.empty()) model = "default";
    return std::make_unique<HttpCompletionClient>(endpoint, model, env_or_empty("TABFORGE_LLM_API_KEY"));
}

} // namespace tabforge
