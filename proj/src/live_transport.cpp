#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "altersim/gateway.hpp"

namespace altersim {

using nlohmann::json;

namespace {

GatewayError transport_error(std::string message) {
    GatewayError e;
    e.kind = GatewayError::Kind::Transport;
    e.message = std::move(message);
    return e;
}

} // namespace

Result<ChatResponse, GatewayError> LiveTransport::complete(const ChatRequest& request) {
    auto checked = validate_request(request);
    if (!checked) {
        return GatewayError{GatewayError::Kind::BadRequest, checked.error(), "", request.tag,
                            "", "", {}};
    }
    if (config_.base_url.empty()) {
        return transport_error("live transport needs a base URL");
    }

    // base_url = scheme://host[:port][/prefix]
    std::string url = config_.base_url;
    std::string prefix;
    std::size_t scheme = url.find("://");
    if (scheme != std::string::npos) {
        std::size_t path_start = url.find('/', scheme + 3);
        if (path_start != std::string::npos) {
            prefix = url.substr(path_start);
            url = url.substr(0, path_start);
        }
    }
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

    json payload;
    payload["model"] = config_.model;
    payload["temperature"] = request.temperature;
    json msgs = json::array();
    for (const ChatMessage& m : request.messages) {
        msgs.push_back({{"role", std::string(role_name(m.role))}, {"content", m.content}});
    }
    payload["messages"] = msgs;

    httplib::Client client(url);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        if (const char* key = std::getenv(config_.api_key_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }
    }
    auto res = client.Post(prefix + "/chat/completions", headers, payload.dump(),
                           "application/json");
    if (!res) {
        return transport_error("live request failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        return transport_error("live endpoint returned status " + std::to_string(res->status) +
                               ": " + res->body);
    }
    json body = json::parse(res->body, nullptr, false);
    if (body.is_discarded()) {
        return transport_error("live endpoint returned invalid JSON");
    }
    try {
        std::string content = body.at("choices").at(0).at("message").at("content");
        if (content.empty()) {
            return transport_error("live endpoint returned empty content");
        }
        return ChatResponse{std::move(content), ChatResponse::Source::Live};
    } catch (const json::exception& e) {
        return transport_error(std::string("unexpected response shape: ") + e.what());
    }
}

} // namespace altersim
