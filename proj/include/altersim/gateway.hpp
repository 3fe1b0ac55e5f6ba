#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "altersim/result.hpp"
#include "altersim/script.hpp"

namespace altersim {

enum class Role { System, User, Assistant };

std::string_view role_name(Role r);
std::optional<Role> role_from_name(std::string_view name);

struct ChatMessage {
    Role role;
    std::string content;
};

// One chat-completion call. `tag` labels the pipeline stage (or trial) the
// call belongs to; it is hashed into the request digest, so identical texts
// issued from different stages stay distinct in a cassette.
struct ChatRequest {
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    std::string tag;
};

struct ChatResponse {
    enum class Source { Live, Replay, Mock };
    std::string content;
    Source source = Source::Mock;
};

struct GatewayError {
    enum class Kind {
        BadRequest,
        CassetteMiss,
        ScriptExhausted,
        Transport,
        Pipeline,
    };
    Kind kind = Kind::Transport;
    std::string message;
    // CassetteMiss context.
    std::string digest;
    std::string tag;
    // Pipeline context: both stage texts plus the parse diagnostics.
    std::string stage1_text;
    std::string stage2_text;
    std::vector<ScriptDiagnostic> diagnostics;
};

std::string_view gateway_error_kind_name(GatewayError::Kind k);

// Stable content-addressed key for a request: SHA-256 over the tag, the
// temperature at 6 decimals, and each message's role plus whitespace-
// canonicalized content (docs/cassette.md).
std::string request_digest(const ChatRequest& request);

Result<ChatRequest, std::string> validate_request(const ChatRequest& request);

// Recorded request/response pairs keyed by request digest.
class Cassette {
public:
    struct Entry {
        std::string digest;
        std::string tag;
        std::vector<ChatMessage> request; // kept for inspection
        double temperature = 0.0;
        std::string response;
    };

    Cassette() = default;

    // Appends; a digest may repeat only with an identical response.
    Result<bool, std::string> add(Entry entry);

    const Entry* find(const std::string& digest) const;
    std::size_t size() const { return order_.size(); }
    const std::vector<std::string>& order() const { return order_; }
    const Entry& entry(const std::string& digest) const { return entries_.at(digest); }

    std::string& model_label() { return model_label_; }
    const std::string& model_label() const { return model_label_; }
    std::string& recorded_at() { return recorded_at_; }
    const std::string& recorded_at() const { return recorded_at_; }

    // JSON-lines cassette files (docs/cassette.md). `load_tree` merges every
    // *.jsonl under a directory, or a single file if given one.
    Result<bool, std::string> save(const std::string& path) const;
    static Result<Cassette, std::string> load(const std::string& path);
    static Result<Cassette, std::string> load_tree(const std::string& path);

private:
    std::map<std::string, Entry> entries_;
    std::vector<std::string> order_; // insertion order, for stable saves
    std::string model_label_;
    std::string recorded_at_;
};

// Blocking request/response transport. One logical caller at a time unless
// concurrent_safe() says otherwise.
class Transport {
public:
    virtual ~Transport() = default;
    virtual Result<ChatResponse, GatewayError> complete(const ChatRequest& request) = 0;
    // Live transports get one automatic repair round in the motion pipeline.
    virtual bool live() const { return false; }
    // True when complete() is safe to call from parallel trials.
    virtual bool concurrent_safe() const { return false; }
};

// Replays a cassette; unseen requests are CassetteMiss errors.
class CassetteTransport : public Transport {
public:
    explicit CassetteTransport(Cassette cassette) : cassette_(std::move(cassette)) {}

    Result<ChatResponse, GatewayError> complete(const ChatRequest& request) override;
    bool concurrent_safe() const override { return true; }

    const Cassette& cassette() const { return cassette_; }

private:
    Cassette cassette_;
};

// Scripted responses consumed per tag, in order; running past the script is
// a ScriptExhausted error.
class MockTransport : public Transport {
public:
    MockTransport() = default;

    void script(const std::string& tag, std::vector<std::string> responses);

    // {"tags": {"<tag>": ["text", {"text": "...", "repeat": 3}, ...]}}
    static Result<std::unique_ptr<MockTransport>, std::string> load(const std::string& path);

    Result<ChatResponse, GatewayError> complete(const ChatRequest& request) override;

private:
    std::map<std::string, std::deque<std::string>> queues_;
};

// Decorator that records every exchange passing through `inner`.
class RecordingTransport : public Transport {
public:
    RecordingTransport(Transport& inner, Cassette& sink) : inner_(inner), sink_(sink) {}

    Result<ChatResponse, GatewayError> complete(const ChatRequest& request) override;
    bool live() const override { return inner_.live(); }

private:
    Transport& inner_;
    Cassette& sink_;
};

struct LiveConfig {
    std::string base_url;       // e.g. "http://localhost:8080/v1"
    std::string model;
    std::string api_key_env = "ALTERSIM_API_KEY"; // credential comes from env only
};

// Untested passthrough to an OpenAI-style /chat/completions endpoint. Not
// exercised by the test suite; replay and mock transports are the supported
// reproducible paths.
class LiveTransport : public Transport {
public:
    explicit LiveTransport(LiveConfig config) : config_(std::move(config)) {}

    Result<ChatResponse, GatewayError> complete(const ChatRequest& request) override;
    bool live() const override { return true; }

private:
    LiveConfig config_;
};

// The two prompt templates of the motion pipeline, with {description} and
// {narrative} placeholders. The original system's full prompt set is not
// publicly available; the bundled templates are functional reconstructions.
struct PromptTemplates {
    std::string prompt1;
    std::string prompt2;

    static Result<PromptTemplates, std::string> load(const std::string& prompts_dir);

    std::string fill_stage1(std::string_view description) const;
    std::string fill_stage2(std::string_view narrative) const;
};

// Two-stage text-to-motion pipeline: stage 1 (tag "prompt-1") asks for a
// short movement narrative, stage 2 (tag "prompt-2") asks for a motion
// script in the script grammar and parses it. Live transports get one
// repair round with the diagnostics appended; replay and mock stay strict.
Result<MotionScript, GatewayError> cot_motion_pipeline(Transport& transport,
                                                       std::string_view description,
                                                       const PromptTemplates& templates,
                                                       double temperature = 0.0);

} // namespace altersim
