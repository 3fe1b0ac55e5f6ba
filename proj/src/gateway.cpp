#include "altersim/gateway.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "altersim/sha256.hpp"
#include "altersim/text.hpp"

namespace altersim {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view role_name(Role r) {
    switch (r) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "unknown";
}

std::optional<Role> role_from_name(std::string_view name) {
    if (name == "system") return Role::System;
    if (name == "user") return Role::User;
    if (name == "assistant") return Role::Assistant;
    return std::nullopt;
}

std::string_view gateway_error_kind_name(GatewayError::Kind k) {
    switch (k) {
        case GatewayError::Kind::BadRequest: return "bad-request";
        case GatewayError::Kind::CassetteMiss: return "cassette-miss";
        case GatewayError::Kind::ScriptExhausted: return "script-exhausted";
        case GatewayError::Kind::Transport: return "transport";
        case GatewayError::Kind::Pipeline: return "pipeline";
    }
    return "unknown";
}

std::string request_digest(const ChatRequest& request) {
    Sha256 h;
    h.update("altersim-req-v1\n");
    h.update("tag:");
    h.update(request.tag);
    h.update("\ntemp:");
    h.update(format_fixed(request.temperature, 6));
    h.update("\n");
    for (const ChatMessage& m : request.messages) {
        h.update(role_name(m.role));
        h.update(":");
        h.update(canonicalize_whitespace(m.content));
        h.update("\x1e"); // record separator
    }
    return h.hex_digest();
}

Result<ChatRequest, std::string> validate_request(const ChatRequest& request) {
    if (request.messages.empty()) {
        return std::string("request must carry at least one message");
    }
    if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) {
        return std::string("temperature must be within [0, 2]");
    }
    return request;
}

// ---------------------------------------------------------------------------
// Cassette

Result<bool, std::string> Cassette::add(Entry entry) {
    auto it = entries_.find(entry.digest);
    if (it != entries_.end()) {
        if (it->second.response != entry.response) {
            return "cassette digest collision with conflicting responses: " + entry.digest;
        }
        return false; // identical repeat, nothing to do
    }
    order_.push_back(entry.digest);
    entries_.emplace(entry.digest, std::move(entry));
    return true;
}

const Cassette::Entry* Cassette::find(const std::string& digest) const {
    auto it = entries_.find(digest);
    return it == entries_.end() ? nullptr : &it->second;
}

Result<bool, std::string> Cassette::save(const std::string& path) const {
    fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p);
    if (!out) {
        return "cannot open cassette for writing: " + path;
    }
    json meta = {{"meta",
                  {{"format", "altersim-cassette-v1"},
                   {"model", model_label_},
                   {"recorded_at", recorded_at_}}}};
    out << meta.dump() << "\n";
    for (const std::string& digest : order_) {
        const Entry& e = entries_.at(digest);
        json msgs = json::array();
        for (const ChatMessage& m : e.request) {
            msgs.push_back({{"role", std::string(role_name(m.role))}, {"content", m.content}});
        }
        json line = {{"digest", e.digest},
                     {"tag", e.tag},
                     {"temperature", e.temperature},
                     {"request", msgs},
                     {"response", e.response}};
        out << line.dump() << "\n";
    }
    if (!out) {
        return "write failed: " + path;
    }
    return true;
}

Result<Cassette, std::string> Cassette::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return "cannot open cassette: " + path;
    }
    Cassette cassette;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            return path + ":" + std::to_string(line_no) + ": bad JSON line";
        }
        if (j.contains("meta")) {
            cassette.model_label_ = j["meta"].value("model", "");
            cassette.recorded_at_ = j["meta"].value("recorded_at", "");
            continue;
        }
        Entry e;
        if (!j.contains("digest") || !j.contains("response")) {
            return path + ":" + std::to_string(line_no) + ": entry needs digest and response";
        }
        e.digest = j["digest"].get<std::string>();
        e.tag = j.value("tag", "");
        e.temperature = j.value("temperature", 0.0);
        e.response = j["response"].get<std::string>();
        if (j.contains("request")) {
            for (const auto& m : j["request"]) {
                auto role = role_from_name(m.value("role", ""));
                if (!role) {
                    return path + ":" + std::to_string(line_no) + ": bad message role";
                }
                e.request.push_back(ChatMessage{*role, m.value("content", "")});
            }
        }
        auto added = cassette.add(std::move(e));
        if (!added) {
            return path + ":" + std::to_string(line_no) + ": " + added.error();
        }
    }
    return cassette;
}

Result<Cassette, std::string> Cassette::load_tree(const std::string& path) {
    std::error_code ec;
    if (fs::is_regular_file(path, ec)) {
        return load(path);
    }
    if (!fs::is_directory(path, ec)) {
        return "cassette path not found: " + path;
    }
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
            files.push_back(entry.path().string());
        }
    }
    if (files.empty()) {
        return "no .jsonl cassettes under " + path;
    }
    std::sort(files.begin(), files.end());
    Cassette merged;
    for (const std::string& file : files) {
        auto one = load(file);
        if (!one) return one.error();
        if (merged.model_label_.empty()) merged.model_label_ = one->model_label_;
        if (merged.recorded_at_.empty()) merged.recorded_at_ = one->recorded_at_;
        for (const std::string& digest : one->order_) {
            auto added = merged.add(one->entries_.at(digest));
            if (!added) return file + ": " + added.error();
        }
    }
    return merged;
}

// ---------------------------------------------------------------------------
// Transports

Result<ChatResponse, GatewayError> CassetteTransport::complete(const ChatRequest& request) {
    auto checked = validate_request(request);
    if (!checked) {
        return GatewayError{GatewayError::Kind::BadRequest, checked.error(), "", request.tag,
                            "", "", {}};
    }
    std::string digest = request_digest(request);
    const Cassette::Entry* entry = cassette_.find(digest);
    if (entry == nullptr) {
        GatewayError e;
        e.kind = GatewayError::Kind::CassetteMiss;
        e.digest = digest;
        e.tag = request.tag;
        e.message = "no recorded response for digest " + digest + " (tag '" + request.tag + "')";
        return e;
    }
    return ChatResponse{entry->response, ChatResponse::Source::Replay};
}

void MockTransport::script(const std::string& tag, std::vector<std::string> responses) {
    auto& q = queues_[tag];
    for (std::string& r : responses) q.push_back(std::move(r));
}

Result<std::unique_ptr<MockTransport>, std::string> MockTransport::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        return "cannot open mock script: " + path;
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.contains("tags") || !j["tags"].is_object()) {
        return path + ": expected {\"tags\": {\"<tag>\": [ ... ]}}";
    }
    auto mock = std::make_unique<MockTransport>();
    for (const auto& [tag, entries] : j["tags"].items()) {
        if (!entries.is_array()) {
            return path + ": tag '" + tag + "' must map to an array";
        }
        std::vector<std::string> responses;
        for (const auto& item : entries) {
            if (item.is_string()) {
                responses.push_back(item.get<std::string>());
            } else if (item.is_object() && item.contains("text")) {
                int repeat = item.value("repeat", 1);
                for (int i = 0; i < repeat; ++i) {
                    responses.push_back(item["text"].get<std::string>());
                }
            } else {
                return path + ": tag '" + tag + "' has a bad entry";
            }
        }
        mock->script(tag, std::move(responses));
    }
    return mock;
}

Result<ChatResponse, GatewayError> MockTransport::complete(const ChatRequest& request) {
    auto checked = validate_request(request);
    if (!checked) {
        return GatewayError{GatewayError::Kind::BadRequest, checked.error(), "", request.tag,
                            "", "", {}};
    }
    auto it = queues_.find(request.tag);
    if (it == queues_.end() || it->second.empty()) {
        GatewayError e;
        e.kind = GatewayError::Kind::ScriptExhausted;
        e.tag = request.tag;
        e.message = "mock script exhausted for tag '" + request.tag + "'";
        return e;
    }
    std::string content = std::move(it->second.front());
    it->second.pop_front();
    return ChatResponse{std::move(content), ChatResponse::Source::Mock};
}

Result<ChatResponse, GatewayError> RecordingTransport::complete(const ChatRequest& request) {
    auto response = inner_.complete(request);
    if (!response) return response;
    Cassette::Entry e;
    e.digest = request_digest(request);
    e.tag = request.tag;
    e.request = request.messages;
    e.temperature = request.temperature;
    e.response = response->content;
    auto added = sink_.add(std::move(e));
    if (!added) {
        return GatewayError{GatewayError::Kind::Transport,
                            "recording failed: " + added.error(), "", request.tag, "", "", {}};
    }
    return response;
}

// ---------------------------------------------------------------------------
// Prompt templates and the two-stage pipeline

Result<PromptTemplates, std::string> PromptTemplates::load(const std::string& prompts_dir) {
    auto read_file = [](const fs::path& p) -> std::optional<std::string> {
        std::ifstream in(p);
        if (!in) return std::nullopt;
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    fs::path dir(prompts_dir);
    auto p1 = read_file(dir / "motion_prompt1.txt");
    if (!p1) return "missing prompt template: " + (dir / "motion_prompt1.txt").string();
    auto p2 = read_file(dir / "motion_prompt2.txt");
    if (!p2) return "missing prompt template: " + (dir / "motion_prompt2.txt").string();
    return PromptTemplates{*p1, *p2};
}

std::string PromptTemplates::fill_stage1(std::string_view description) const {
    return replace_all(prompt1, "{description}", description);
}

std::string PromptTemplates::fill_stage2(std::string_view narrative) const {
    return replace_all(prompt2, "{narrative}", narrative);
}

namespace {

// LLM replies sometimes wrap the script in a fenced code block; unwrap the
// first fence if one is present.
std::string extract_script_block(std::string_view reply) {
    std::size_t open = reply.find("```");
    if (open == std::string_view::npos) return std::string(reply);
    std::size_t body_start = reply.find('\n', open);
    if (body_start == std::string_view::npos) return std::string(reply);
    ++body_start;
    std::size_t close = reply.find("```", body_start);
    if (close == std::string_view::npos) return std::string(reply.substr(body_start));
    return std::string(reply.substr(body_start, close - body_start));
}

GatewayError pipeline_error(std::string stage1, std::string stage2,
                            std::vector<ScriptDiagnostic> diags) {
    GatewayError e;
    e.kind = GatewayError::Kind::Pipeline;
    e.message = "stage-2 output failed to parse";
    for (const ScriptDiagnostic& d : diags) {
        e.message += "; " + format_diagnostic(d);
    }
    e.stage1_text = std::move(stage1);
    e.stage2_text = std::move(stage2);
    e.diagnostics = std::move(diags);
    return e;
}

} // namespace

Result<MotionScript, GatewayError> cot_motion_pipeline(Transport& transport,
                                                       std::string_view description,
                                                       const PromptTemplates& templates,
                                                       double temperature) {
    if (trim(description).empty()) {
        GatewayError e;
        e.kind = GatewayError::Kind::BadRequest;
        e.message = "motion description must not be empty";
        return e;
    }

    ChatRequest stage1;
    stage1.tag = "prompt-1";
    stage1.temperature = temperature;
    stage1.messages.push_back(
        ChatMessage{Role::User, templates.fill_stage1(description)});
    auto narrative = transport.complete(stage1);
    if (!narrative) return narrative.error();

    ChatRequest stage2;
    stage2.tag = "prompt-2";
    stage2.temperature = temperature;
    // The stage-1 reply is embedded verbatim; stage isolation depends on it.
    stage2.messages.push_back(
        ChatMessage{Role::User, templates.fill_stage2(narrative->content)});
    auto script_reply = transport.complete(stage2);
    if (!script_reply) return script_reply.error();

    ParseResult parsed = parse_script(extract_script_block(script_reply->content));
    if (parsed.script) return *parsed.script;

    if (!transport.live()) {
        return pipeline_error(narrative->content, script_reply->content,
                              std::move(parsed.diagnostics));
    }

    // One repair round, live mode only: replay runs stay strict.
    std::string diag_text = "The script failed to parse:\n";
    for (const ScriptDiagnostic& d : parsed.diagnostics) {
        diag_text += format_diagnostic(d) + "\n";
    }
    diag_text += "Re-emit only the corrected script.";
    ChatRequest repair = stage2;
    repair.messages.push_back(ChatMessage{Role::Assistant, script_reply->content});
    repair.messages.push_back(ChatMessage{Role::User, diag_text});
    auto repaired = transport.complete(repair);
    if (!repaired) return repaired.error();

    ParseResult reparsed = parse_script(extract_script_block(repaired->content));
    if (reparsed.script) return *reparsed.script;
    return pipeline_error(narrative->content, repaired->content,
                          std::move(reparsed.diagnostics));
}

} // namespace altersim
