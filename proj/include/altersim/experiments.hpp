#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "altersim/agent.hpp"

namespace altersim {

enum class MsrCase { Faithful, Random };

std::string_view msr_case_name(MsrCase c);

struct MsrTrialResult {
    Transcript transcript;
    Verdict::Kind expected = Verdict::Kind::Control;
    bool correct = false;

    friend bool operator==(const MsrTrialResult&, const MsrTrialResult&) = default;
};

struct MsrReport {
    MsrCase mode = MsrCase::Faithful;
    std::vector<MsrTrialResult> trials;
    std::optional<double> accuracy; // absent for zero trials

    int correct_count() const;
    friend bool operator==(const MsrReport&, const MsrReport&) = default;
};

struct MsrOptions {
    AgentOptions agent;
    MirrorScene scene{1.5};
    std::string tag_prefix = "msr";
    int parallel = 1;
};

// Runs one MSR case: per trial a fresh body (mode per case, seed = seed + i)
// and fresh memory; Inconclusive and aborted trials score as incorrect.
MsrReport run_msr_case(MsrCase mode, int trials, Transport& transport, std::uint64_t seed,
                       const MsrOptions& options);

enum class ResponseClass { Withdraw, Release, Grasp, Other };

std::string_view response_class_name(ResponseClass c);

// Phrase lexicons seeded from observed reaction wordings; extensible by
// callers. Matching is case-insensitive substring, priority
// Withdraw > Release > Grasp.
struct ResponseLexicons {
    std::vector<std::string> withdraw = {"withdraw", "pull back", "pull my hand", "retract",
                                         "move my hand away"};
    std::vector<std::string> release = {"release", "drop the", "let go", "put down",
                                        "pick up the blade", "take the knife"};
    std::vector<std::string> grasp = {"grasp", "reach out", "take the mop", "hold the"};
};

ResponseClass classify_response(std::string_view task3_text,
                                const ResponseLexicons& lexicons = {});

struct RhiTrial {
    Prop prop = Prop::Knife;
    Rotation rotation = Rotation::Deg0;
    std::string task1_text;
    std::string task2_text;
    std::string task3_text;
    std::optional<MotionScript> script; // absent when the pipeline failed
    Pose pose_before;
    Pose pose_after;
    ResponseClass classification = ResponseClass::Other;
    std::string error_note; // non-empty when the trial degraded

    friend bool operator==(const RhiTrial&, const RhiTrial&) = default;
};

// Mean absolute per-axis change over repeats, plus group aggregates.
struct AxisDeltaReport {
    int repeats = 0;
    std::array<double, kAxisCount> mean_abs_delta{};
    std::map<AxisGroup, double> group_mean;

    friend bool operator==(const AxisDeltaReport&, const AxisDeltaReport&) = default;
};

AxisDeltaReport axis_delta_report(const std::vector<std::pair<Pose, Pose>>& runs);

struct RhiOptions {
    double dt = kDefaultTickSeconds;
    int settle_budget = 100;
    double temperature = 0.0;
    std::string system_prompt; // three-task prompt (prompts/rhi_tasks.txt)
    PromptTemplates prompts;
    CameraConfig camera;
    DescriberConfig describer;
    AxisId contact_axis = AxisId(33);
    std::string tag_prefix = "rhi";
};

// Runs one RHI condition: per repeat, capture + describe the prop scene,
// issue the three-task prompt (numbered-answer contract), feed the task-3
// text to the motion pipeline, replay the script from the canonical neutral
// pose, and classify the reaction. Pipeline failures degrade the repeat to
// Other with an error note.
std::pair<std::vector<RhiTrial>, AxisDeltaReport> run_rhi(Prop prop, Rotation rotation,
                                                          int repeats, Transport& transport,
                                                          std::uint64_t seed,
                                                          const RhiOptions& options);

// Splits a reply into "1:", "2:", "3:" sections (line-anchored).
std::optional<std::array<std::string, 3>> split_numbered_reply(std::string_view text);

// --------------------------------------------------------------------------
// Exports. All writers emit canonical bytes: fixed field order, numbers at
// 6 decimals, trailing newline. Failures carry the path.

std::string msr_report_to_json(const MsrReport& report);
Result<MsrReport, std::string> msr_report_from_json(std::string_view text);
std::string msr_report_to_csv(const MsrReport& report);

std::string delta_report_to_json(const AxisDeltaReport& report);
Result<AxisDeltaReport, std::string> delta_report_from_json(std::string_view text);
std::string delta_report_to_csv(const AxisDeltaReport& report);

std::string rhi_trials_to_jsonl(const std::vector<RhiTrial>& trials);

// Plot-data JSON: axis index -> mean delta, consumable by any charting tool.
std::string delta_plot_json(std::string_view condition_label, const AxisDeltaReport& report);

Result<bool, std::string> write_text_file(const std::string& path, std::string_view content);
Result<std::string, IoError> read_text_file(const std::string& path);

} // namespace altersim
