#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "altersim/gateway.hpp"
#include "altersim/scene.hpp"

namespace altersim {

enum class ToolName { MotionGeneration, CaptureImage, Image2Text };

std::string_view tool_name(ToolName t);
std::optional<ToolName> tool_from_name(std::string_view name);

struct AgentStep {
    int index = 0; // 1-based, no gaps
    ToolName tool = ToolName::MotionGeneration;
    std::string tool_input;
    std::string tool_output;
    std::string model_thought; // the model's reply, verbatim

    friend bool operator==(const AgentStep&, const AgentStep&) = default;
};

struct AgentMemory {
    std::vector<AgentStep> steps; // append-only within a trial

    friend bool operator==(const AgentMemory&, const AgentMemory&) = default;
};

struct Verdict {
    enum class Kind { Control, NoControl, Inconclusive };
    Kind kind = Kind::Inconclusive;
    std::string rationale;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string_view verdict_kind_name(Verdict::Kind k);
std::optional<Verdict::Kind> verdict_kind_from_name(std::string_view name);

// Verdict grammar: a line beginning "FINAL: YES" is Control and "FINAL: NO"
// is NoControl; otherwise a phrase scan over the text ("do not have control"
// -> NoControl; un-negated "have control" -> Control; else Inconclusive).
Verdict parse_verdict(std::string_view text);

struct Transcript {
    AgentMemory memory;
    Verdict verdict;
    std::uint64_t seed = 0;
    std::string config_digest;
    bool aborted = false;      // transport failure; distinguishable from any verdict
    std::string abort_reason;

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

struct AgentOptions {
    int max_steps = 12;          // model round-trips per trial
    double dt = kDefaultTickSeconds;
    int settle_budget = 100;     // ticks before a capture
    std::string tag = "msr";     // request tag; carries case/trial labels
    double temperature = 0.0;
    std::string system_prompt;   // filled from prompts/msr_system*.txt
    PromptTemplates prompts;     // motion pipeline templates
    CameraConfig camera;
    DescriberConfig describer;
    std::uint64_t seed = 0;      // recorded in the transcript
    std::string config_digest;   // recorded in the transcript
};

// Tool executor shared by the agent loop and tests. Holds the latest
// snapshot so Image2Text can describe it.
class ToolContext {
public:
    ToolContext(BodyState& body, Scene scene, Transport& transport, const AgentOptions& options)
        : body_(body), scene_(std::move(scene)), transport_(transport), options_(options) {}

    BodyState& body() { return body_; }
    const Scene& scene() const { return scene_; }
    int snapshots_taken() const { return snapshot_count_; }
    const std::optional<SceneSnapshot>& last_snapshot() const { return last_snapshot_; }

    // Always returns text to the agent; only transport failures surface as
    // errors (and abort the trial upstream).
    Result<std::string, GatewayError> execute(ToolName tool, std::string_view input);

private:
    BodyState& body_;
    Scene scene_;
    Transport& transport_;
    const AgentOptions& options_;
    std::optional<SceneSnapshot> last_snapshot_;
    int snapshot_count_ = 0;
};

// Runs the mirror-test agent loop: each round sends the system prompt, the
// full step memory, and the reply contract; the reply either names a tool
// (executed, result appended to memory) or starts with "FINAL:" (parsed to
// a verdict). Budget exhaustion yields Inconclusive; transport errors abort.
Transcript run_msr_agent(Transport& transport, BodyState& body, const MirrorScene& scene,
                         const AgentOptions& options);

inline Transcript run_msr_agent(Transport& transport, BodyState& body, const MirrorScene& scene,
                                int max_steps) {
    AgentOptions options;
    options.max_steps = max_steps;
    return run_msr_agent(transport, body, scene, options);
}

// Transcript JSON-lines: one config header, one line per step, one verdict
// footer. Byte-stable for identical runs.
std::string transcript_to_jsonl(const Transcript& transcript, const std::string& config_header);
Result<Transcript, std::string> transcript_from_jsonl(std::string_view text,
                                                      std::string* config_header = nullptr);

} // namespace altersim
