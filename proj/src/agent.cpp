#include "altersim/agent.hpp"

#include <json.hpp>

#include "altersim/text.hpp"

namespace altersim {

using nlohmann::json;

std::string_view tool_name(ToolName t) {
    switch (t) {
        case ToolName::MotionGeneration: return "MotionGeneration";
        case ToolName::CaptureImage: return "CaptureImage";
        case ToolName::Image2Text: return "Image2Text";
    }
    return "unknown";
}

std::optional<ToolName> tool_from_name(std::string_view name) {
    std::string lowered = to_lower(trim(name));
    if (lowered == "motiongeneration") return ToolName::MotionGeneration;
    if (lowered == "captureimage") return ToolName::CaptureImage;
    if (lowered == "image2text") return ToolName::Image2Text;
    return std::nullopt;
}

std::string_view verdict_kind_name(Verdict::Kind k) {
    switch (k) {
        case Verdict::Kind::Control: return "Control";
        case Verdict::Kind::NoControl: return "NoControl";
        case Verdict::Kind::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

std::optional<Verdict::Kind> verdict_kind_from_name(std::string_view name) {
    if (name == "Control") return Verdict::Kind::Control;
    if (name == "NoControl") return Verdict::Kind::NoControl;
    if (name == "Inconclusive") return Verdict::Kind::Inconclusive;
    return std::nullopt;
}

namespace {

std::string_view after_prefix(std::string_view line, std::size_t len) {
    std::string_view rest = line.substr(len);
    while (!rest.empty() && (rest.front() == ' ' || rest.front() == '-' || rest.front() == ':' ||
                             rest.front() == ',' || rest.front() == '.')) {
        rest.remove_prefix(1);
    }
    return rest;
}

bool negated_before(std::string_view sentence, std::size_t phrase_pos) {
    static const char* kNegations[] = {"not", "no ", "n't", "never", "cannot"};
    std::string prefix = to_lower(sentence.substr(0, phrase_pos));
    for (const char* neg : kNegations) {
        if (prefix.find(neg) != std::string::npos) return true;
    }
    return false;
}

} // namespace

Verdict parse_verdict(std::string_view text) {
    // Structured form first: the first line beginning "FINAL:".
    for (std::string_view raw : split_lines(text)) {
        std::string_view line = trim(raw);
        if (!starts_with_ci(line, "FINAL:")) continue;
        std::string_view rest = trim(line.substr(6));
        if (starts_with_ci(rest, "YES")) {
            return Verdict{Verdict::Kind::Control, std::string(after_prefix(rest, 3))};
        }
        if (starts_with_ci(rest, "NO")) {
            return Verdict{Verdict::Kind::NoControl, std::string(after_prefix(rest, 2))};
        }
        break; // malformed FINAL line; fall through to the phrase scan
    }

    // Phrase scan fallback for free-text conclusions.
    std::string lowered = to_lower(text);
    auto lines = split_lines(text);
    std::string last_line;
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        if (!trim(*it).empty()) {
            last_line = std::string(trim(*it));
            break;
        }
    }

    if (lowered.find("do not have control") != std::string::npos ||
        lowered.find("don't have control") != std::string::npos) {
        return Verdict{Verdict::Kind::NoControl, last_line};
    }
    std::size_t pos = lowered.find("have control");
    if (pos != std::string::npos) {
        // Negation check within the containing sentence.
        std::size_t sentence_start = lowered.find_last_of(".!?", pos);
        sentence_start = sentence_start == std::string::npos ? 0 : sentence_start + 1;
        std::string_view sentence =
            std::string_view(lowered).substr(sentence_start, pos - sentence_start + 12);
        if (!negated_before(sentence, pos - sentence_start)) {
            return Verdict{Verdict::Kind::Control, last_line};
        }
    }
    return Verdict{Verdict::Kind::Inconclusive, last_line};
}

Result<std::string, GatewayError> ToolContext::execute(ToolName tool, std::string_view input) {
    switch (tool) {
        case ToolName::MotionGeneration: {
            if (trim(input).empty()) {
                return std::string("error: MotionGeneration requires a motion description.");
            }
            auto script = cot_motion_pipeline(transport_, input, options_.prompts,
                                              options_.temperature);
            if (!script) {
                const GatewayError& e = script.error();
                // Transport-level failures abort the trial; pipeline parse
                // failures are reported back to the agent as text.
                if (e.kind == GatewayError::Kind::Pipeline ||
                    e.kind == GatewayError::Kind::BadRequest) {
                    return "error: motion pipeline failed: " + e.message;
                }
                return e;
            }
            auto diags = validate_script(body_.spec(), *script);
            if (has_errors(diags)) {
                std::string msg = "error: script validation failed:";
                for (const auto& d : diags) {
                    if (d.severity == ScriptDiagnostic::Severity::Error) {
                        msg += " " + format_diagnostic(d) + ";";
                    }
                }
                return msg;
            }
            auto frames = compile_to_frames(*script, body_.spec(), options_.dt);
            if (!frames) {
                return std::string("error: script could not be compiled.");
            }
            body_.execute_frames(*frames);
            return "executed: " + std::to_string(script->frames.size()) + " keyframes, " +
                   std::to_string(script->touched_axes().size()) + " axes";
        }
        case ToolName::CaptureImage: {
            body_.settle(options_.dt, options_.settle_budget);
            last_snapshot_ = capture(body_, scene_, options_.camera);
            ++snapshot_count_;
            return "snapshot#" + std::to_string(snapshot_count_);
        }
        case ToolName::Image2Text: {
            if (!last_snapshot_) {
                return std::string(
                    "error: no image captured yet; use CaptureImage first.");
            }
            return describe_snapshot(*last_snapshot_, options_.describer);
        }
    }
    return std::string("error: unknown tool.");
}

namespace {

std::string render_memory(const AgentMemory& memory) {
    if (memory.steps.empty()) {
        return "Memory of past steps: (none)\n";
    }
    std::string out = "Memory of past steps:\n";
    for (const AgentStep& step : memory.steps) {
        out += "Step " + std::to_string(step.index) + ": " +
               std::string(tool_name(step.tool)) + "(" + step.tool_input + ") -> " +
               step.tool_output + "\n";
    }
    return out;
}

} // namespace

Transcript run_msr_agent(Transport& transport, BodyState& body, const MirrorScene& scene,
                         const AgentOptions& options) {
    Transcript transcript;
    transcript.seed = options.seed;
    transcript.config_digest = options.config_digest;

    ToolContext tools(body, Scene{scene}, transport, options);

    for (int round = 0; round < options.max_steps; ++round) {
        ChatRequest request;
        request.tag = options.tag;
        request.temperature = options.temperature;
        request.messages.push_back(ChatMessage{Role::System, options.system_prompt});
        request.messages.push_back(
            ChatMessage{Role::User, render_memory(transcript.memory) +
                                        "\nChoose your next action."});

        auto reply = transport.complete(request);
        if (!reply) {
            transcript.aborted = true;
            transcript.abort_reason =
                std::string(gateway_error_kind_name(reply.error().kind)) + ": " +
                reply.error().message;
            transcript.verdict = Verdict{Verdict::Kind::Inconclusive, "trial aborted"};
            return transcript;
        }

        std::string_view content = reply->content;
        auto lines = split_lines(content);
        std::string_view first_line = lines.empty() ? std::string_view{} : trim(lines[0]);

        if (starts_with_ci(first_line, "FINAL:")) {
            transcript.verdict = parse_verdict(content);
            return transcript;
        }

        if (auto tool = tool_from_name(first_line)) {
            std::size_t nl = reply->content.find('\n');
            std::string input =
                nl == std::string::npos ? std::string() : reply->content.substr(nl + 1);
            auto output = tools.execute(*tool, input);
            if (!output) {
                transcript.aborted = true;
                transcript.abort_reason =
                    std::string(gateway_error_kind_name(output.error().kind)) + ": " +
                    output.error().message;
                transcript.verdict = Verdict{Verdict::Kind::Inconclusive, "trial aborted"};
                return transcript;
            }
            AgentStep step;
            step.index = static_cast<int>(transcript.memory.steps.size()) + 1;
            step.tool = *tool;
            step.tool_input = std::move(input);
            step.tool_output = std::move(*output);
            step.model_thought = reply->content;
            transcript.memory.steps.push_back(std::move(step));
            continue;
        }

        // Free-text reply: accept it when the phrase scan finds a conclusion
        // (recorded live transcripts), otherwise the round is spent and the
        // unchanged context is re-asked next time.
        Verdict scanned = parse_verdict(content);
        if (scanned.kind != Verdict::Kind::Inconclusive) {
            transcript.verdict = scanned;
            return transcript;
        }
    }

    transcript.verdict = Verdict{Verdict::Kind::Inconclusive, "step budget exhausted"};
    return transcript;
}

std::string transcript_to_jsonl(const Transcript& transcript, const std::string& config_header) {
    std::string out;
    if (!config_header.empty()) {
        out += config_header;
        if (out.back() != '\n') out += "\n";
    }
    for (const AgentStep& step : transcript.memory.steps) {
        json line = {{"step", step.index},
                     {"tool", std::string(tool_name(step.tool))},
                     {"input", step.tool_input},
                     {"output", step.tool_output},
                     {"thought", step.model_thought}};
        out += line.dump() + "\n";
    }
    json footer = {{"verdict", std::string(verdict_kind_name(transcript.verdict.kind))},
                   {"rationale", transcript.verdict.rationale},
                   {"seed", transcript.seed},
                   {"config_digest", transcript.config_digest},
                   {"aborted", transcript.aborted},
                   {"abort_reason", transcript.abort_reason}};
    out += footer.dump() + "\n";
    return out;
}

Result<Transcript, std::string> transcript_from_jsonl(std::string_view text,
                                                      std::string* config_header) {
    Transcript transcript;
    bool saw_footer = false;
    int line_no = 0;
    for (std::string_view raw : split_lines(text)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            return "transcript line " + std::to_string(line_no) + ": bad JSON";
        }
        if (j.contains("config")) {
            if (config_header != nullptr) *config_header = std::string(line);
            continue;
        }
        if (j.contains("verdict")) {
            auto kind = verdict_kind_from_name(j.value("verdict", ""));
            if (!kind) return std::string("transcript: unknown verdict kind");
            transcript.verdict.kind = *kind;
            transcript.verdict.rationale = j.value("rationale", "");
            transcript.seed = j.value("seed", std::uint64_t{0});
            transcript.config_digest = j.value("config_digest", "");
            transcript.aborted = j.value("aborted", false);
            transcript.abort_reason = j.value("abort_reason", "");
            saw_footer = true;
            continue;
        }
        AgentStep step;
        step.index = j.value("step", 0);
        auto tool = tool_from_name(j.value("tool", ""));
        if (!tool) return "transcript line " + std::to_string(line_no) + ": unknown tool";
        step.tool = *tool;
        step.tool_input = j.value("input", "");
        step.tool_output = j.value("output", "");
        step.model_thought = j.value("thought", "");
        transcript.memory.steps.push_back(std::move(step));
    }
    if (!saw_footer) {
        return std::string("transcript: missing verdict footer");
    }
    return transcript;
}

} // namespace altersim
