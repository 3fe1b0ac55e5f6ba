#include "altersim/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "altersim/text.hpp"

namespace altersim {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view msr_case_name(MsrCase c) {
    return c == MsrCase::Faithful ? "faithful" : "random";
}

int MsrReport::correct_count() const {
    int n = 0;
    for (const MsrTrialResult& t : trials) {
        if (t.correct) ++n;
    }
    return n;
}

namespace {

std::string two_digits(int n) {
    std::string s = std::to_string(n);
    return s.size() < 2 ? "0" + s : s;
}

MsrTrialResult run_one_msr_trial(MsrCase mode, int index, Transport& transport,
                                 std::uint64_t seed, const MsrOptions& options) {
    BodyState body(default_body_spec(),
                   mode == MsrCase::Faithful ? ActuationMode::Faithful : ActuationMode::Random,
                   seed + static_cast<std::uint64_t>(index));
    AgentOptions agent = options.agent;
    agent.seed = seed + static_cast<std::uint64_t>(index);
    agent.tag = options.tag_prefix + ":" + std::string(msr_case_name(mode)) + ":" +
                two_digits(index);

    MsrTrialResult result;
    result.transcript = run_msr_agent(transport, body, options.scene, agent);
    result.expected =
        mode == MsrCase::Faithful ? Verdict::Kind::Control : Verdict::Kind::NoControl;
    result.correct = !result.transcript.aborted &&
                     result.transcript.verdict.kind == result.expected;
    return result;
}

} // namespace

MsrReport run_msr_case(MsrCase mode, int trials, Transport& transport, std::uint64_t seed,
                       const MsrOptions& options) {
    if (trials < 0) {
        throw std::invalid_argument("run_msr_case: trials must be >= 0");
    }
    MsrReport report;
    report.mode = mode;
    report.trials.resize(static_cast<std::size_t>(trials));

    bool parallel = options.parallel > 1 && transport.concurrent_safe();
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(options.parallel)
        for (int i = 0; i < trials; ++i) {
            report.trials[static_cast<std::size_t>(i)] =
                run_one_msr_trial(mode, i, transport, seed, options);
        }
    } else
#else
    (void)parallel;
#endif
    {
        for (int i = 0; i < trials; ++i) {
            report.trials[static_cast<std::size_t>(i)] =
                run_one_msr_trial(mode, i, transport, seed, options);
        }
    }

    if (trials > 0) {
        report.accuracy = static_cast<double>(report.correct_count()) / trials;
    }
    return report;
}

std::string_view response_class_name(ResponseClass c) {
    switch (c) {
        case ResponseClass::Withdraw: return "Withdraw";
        case ResponseClass::Release: return "Release";
        case ResponseClass::Grasp: return "Grasp";
        case ResponseClass::Other: return "Other";
    }
    return "Other";
}

ResponseClass classify_response(std::string_view task3_text, const ResponseLexicons& lexicons) {
    std::string lowered = to_lower(task3_text);
    auto any_hit = [&lowered](const std::vector<std::string>& phrases) {
        for (const std::string& p : phrases) {
            if (lowered.find(to_lower(p)) != std::string::npos) return true;
        }
        return false;
    };
    if (any_hit(lexicons.withdraw)) return ResponseClass::Withdraw;
    if (any_hit(lexicons.release)) return ResponseClass::Release;
    if (any_hit(lexicons.grasp)) return ResponseClass::Grasp;
    return ResponseClass::Other;
}

AxisDeltaReport axis_delta_report(const std::vector<std::pair<Pose, Pose>>& runs) {
    if (runs.empty()) {
        throw std::invalid_argument("axis_delta_report: need at least one run");
    }
    AxisDeltaReport report;
    report.repeats = static_cast<int>(runs.size());
    for (int a = 0; a < kAxisCount; ++a) {
        double sum = 0.0;
        for (const auto& [before, after] : runs) {
            sum += std::fabs(after.values[a] - before.values[a]);
        }
        report.mean_abs_delta[a] = sum / static_cast<double>(runs.size());
    }
    for (AxisGroup g : kAllGroups) {
        double sum = 0.0;
        int n = 0;
        for (int axis : group_axes(g)) {
            sum += report.mean_abs_delta[axis - 1];
            ++n;
        }
        report.group_mean[g] = sum / n;
    }
    return report;
}

std::optional<std::array<std::string, 3>> split_numbered_reply(std::string_view text) {
    std::array<std::string, 3> sections;
    int current = -1;
    bool seen[3] = {false, false, false};
    for (std::string_view raw : split_lines(text)) {
        std::string_view line = trim(raw);
        int marker = -1;
        if (line.size() >= 2 && line[0] >= '1' && line[0] <= '3' &&
            (line[1] == ':' || line[1] == '.')) {
            marker = line[0] - '1';
        }
        if (marker >= 0) {
            if (seen[marker]) return std::nullopt; // duplicated section
            seen[marker] = true;
            current = marker;
            sections[static_cast<std::size_t>(marker)] = std::string(trim(line.substr(2)));
            continue;
        }
        if (current >= 0 && !line.empty()) {
            auto& section = sections[static_cast<std::size_t>(current)];
            if (!section.empty()) section += "\n";
            section += std::string(line);
        }
    }
    if (!seen[0] || !seen[1] || !seen[2]) return std::nullopt;
    return sections;
}

namespace {

RhiTrial degraded_trial(Prop prop, Rotation rotation, const Pose& before, std::string note) {
    RhiTrial trial;
    trial.prop = prop;
    trial.rotation = rotation;
    trial.pose_before = before;
    trial.pose_after = before;
    trial.classification = ResponseClass::Other;
    trial.error_note = std::move(note);
    return trial;
}

} // namespace

std::pair<std::vector<RhiTrial>, AxisDeltaReport> run_rhi(Prop prop, Rotation rotation,
                                                          int repeats, Transport& transport,
                                                          std::uint64_t seed,
                                                          const RhiOptions& options) {
    if (repeats < 1) {
        throw std::invalid_argument("run_rhi: repeats must be >= 1");
    }
    std::vector<RhiTrial> trials;
    std::vector<std::pair<Pose, Pose>> pose_pairs;
    RhiScene scene = make_rhi_scene(prop, rotation, options.contact_axis);

    for (int k = 0; k < repeats; ++k) {
        BodyState body(default_body_spec(), ActuationMode::Faithful,
                       seed + static_cast<std::uint64_t>(k));
        Pose before = body.current(); // canonical neutral pose
        SceneSnapshot snap = capture(body, Scene{scene}, options.camera);
        std::string described = describe_snapshot(snap, options.describer);

        ChatRequest request;
        request.tag = options.tag_prefix + ":" + std::string(prop_name(prop)) + ":" +
                      std::string(rotation_name(rotation)) + ":rep" + std::to_string(k);
        request.temperature = options.temperature;
        request.messages.push_back(ChatMessage{Role::System, options.system_prompt});
        request.messages.push_back(
            ChatMessage{Role::User, "Image description:\n" + described});

        auto reply = transport.complete(request);
        if (!reply) {
            trials.push_back(degraded_trial(prop, rotation, before,
                                            "task prompt failed: " + reply.error().message));
            pose_pairs.emplace_back(before, before);
            continue;
        }

        auto sections = split_numbered_reply(reply->content);
        if (!sections) {
            trials.push_back(degraded_trial(prop, rotation, before,
                                            "reply missing numbered sections 1:/2:/3:"));
            pose_pairs.emplace_back(before, before);
            continue;
        }

        RhiTrial trial;
        trial.prop = prop;
        trial.rotation = rotation;
        trial.task1_text = (*sections)[0];
        trial.task2_text = (*sections)[1];
        trial.task3_text = (*sections)[2];
        trial.pose_before = before;
        trial.classification = classify_response(trial.task3_text);

        auto script =
            cot_motion_pipeline(transport, trial.task3_text, options.prompts,
                                options.temperature);
        if (!script) {
            trial.pose_after = before;
            trial.classification = ResponseClass::Other;
            trial.error_note = "motion pipeline failed: " + script.error().message;
            trials.push_back(std::move(trial));
            pose_pairs.emplace_back(before, before);
            continue;
        }
        trial.script = *script;

        auto diags = validate_script(body.spec(), *script);
        if (has_errors(diags)) {
            trial.pose_after = before;
            trial.classification = ResponseClass::Other;
            trial.error_note = "script validation failed";
            trials.push_back(std::move(trial));
            pose_pairs.emplace_back(before, before);
            continue;
        }
        auto frames = compile_to_frames(*script, body.spec(), options.dt);
        if (!frames) {
            trial.pose_after = before;
            trial.classification = ResponseClass::Other;
            trial.error_note = "script compilation failed";
            trials.push_back(std::move(trial));
            pose_pairs.emplace_back(before, before);
            continue;
        }
        body.execute_frames(*frames);
        body.settle(options.dt, options.settle_budget);
        trial.pose_after = body.current();

        pose_pairs.emplace_back(trial.pose_before, trial.pose_after);
        trials.push_back(std::move(trial));
    }

    return {std::move(trials), axis_delta_report(pose_pairs)};
}

// ---------------------------------------------------------------------------
// Exports

namespace {

json transcript_to_json_value(const Transcript& t) {
    json steps = json::array();
    for (const AgentStep& s : t.memory.steps) {
        steps.push_back({{"step", s.index},
                         {"tool", std::string(tool_name(s.tool))},
                         {"input", s.tool_input},
                         {"output", s.tool_output},
                         {"thought", s.model_thought}});
    }
    return {{"steps", steps},
            {"verdict", std::string(verdict_kind_name(t.verdict.kind))},
            {"rationale", t.verdict.rationale},
            {"seed", t.seed},
            {"config_digest", t.config_digest},
            {"aborted", t.aborted},
            {"abort_reason", t.abort_reason}};
}

Result<Transcript, std::string> transcript_from_json_value(const json& j) {
    Transcript t;
    for (const auto& s : j.value("steps", json::array())) {
        AgentStep step;
        step.index = s.value("step", 0);
        auto tool = tool_from_name(s.value("tool", ""));
        if (!tool) return std::string("unknown tool in transcript");
        step.tool = *tool;
        step.tool_input = s.value("input", "");
        step.tool_output = s.value("output", "");
        step.model_thought = s.value("thought", "");
        t.memory.steps.push_back(std::move(step));
    }
    auto kind = verdict_kind_from_name(j.value("verdict", ""));
    if (!kind) return std::string("unknown verdict kind");
    t.verdict.kind = *kind;
    t.verdict.rationale = j.value("rationale", "");
    t.seed = j.value("seed", std::uint64_t{0});
    t.config_digest = j.value("config_digest", "");
    t.aborted = j.value("aborted", false);
    t.abort_reason = j.value("abort_reason", "");
    return t;
}

} // namespace

std::string msr_report_to_json(const MsrReport& report) {
    json trials = json::array();
    for (const MsrTrialResult& t : report.trials) {
        trials.push_back({{"transcript", transcript_to_json_value(t.transcript)},
                          {"expected", std::string(verdict_kind_name(t.expected))},
                          {"correct", t.correct}});
    }
    json j = {{"case", std::string(msr_case_name(report.mode))},
              {"trials", trials},
              {"correct", report.correct_count()},
              {"total", report.trials.size()}};
    if (report.accuracy) {
        // Fixed 6-decimal text keeps exports byte-stable.
        j["accuracy"] = json::parse(format_fixed(*report.accuracy, 6));
    } else {
        j["accuracy"] = nullptr;
    }
    return j.dump(2) + "\n";
}

Result<MsrReport, std::string> msr_report_from_json(std::string_view text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) return std::string("bad MSR report JSON");
    MsrReport report;
    report.mode = j.value("case", "faithful") == "random" ? MsrCase::Random : MsrCase::Faithful;
    for (const auto& t : j.value("trials", json::array())) {
        MsrTrialResult r;
        auto transcript = transcript_from_json_value(t.value("transcript", json::object()));
        if (!transcript) return transcript.error();
        r.transcript = *transcript;
        auto expected = verdict_kind_from_name(t.value("expected", ""));
        if (!expected) return std::string("unknown expected verdict");
        r.expected = *expected;
        r.correct = t.value("correct", false);
        report.trials.push_back(std::move(r));
    }
    if (j.contains("accuracy") && !j["accuracy"].is_null()) {
        report.accuracy = j["accuracy"].get<double>();
    }
    return report;
}

std::string msr_report_to_csv(const MsrReport& report) {
    std::string out = "trial,expected,verdict,correct,aborted,steps\n";
    for (std::size_t i = 0; i < report.trials.size(); ++i) {
        const MsrTrialResult& t = report.trials[i];
        out += std::to_string(i) + "," + std::string(verdict_kind_name(t.expected)) + "," +
               std::string(verdict_kind_name(t.transcript.verdict.kind)) + "," +
               (t.correct ? "1" : "0") + "," + (t.transcript.aborted ? "1" : "0") + "," +
               std::to_string(t.transcript.memory.steps.size()) + "\n";
    }
    return out;
}

std::string delta_report_to_json(const AxisDeltaReport& report) {
    std::string out = "{\n  \"repeats\": " + std::to_string(report.repeats) + ",\n  \"axes\": [\n";
    for (int a = 0; a < kAxisCount; ++a) {
        AxisId id(a + 1);
        out += "    {\"axis\": " + std::to_string(a + 1) + ", \"group\": \"" +
               std::string(group_name(axis_group(id))) + "\", \"mean_abs_delta\": " +
               format_fixed(report.mean_abs_delta[a], 6) + "}";
        out += a + 1 < kAxisCount ? ",\n" : "\n";
    }
    out += "  ],\n  \"groups\": {";
    bool first = true;
    for (AxisGroup g : kAllGroups) {
        out += first ? "" : ",";
        first = false;
        double v = report.group_mean.count(g) ? report.group_mean.at(g) : 0.0;
        out += "\"" + std::string(group_name(g)) + "\": " + format_fixed(v, 6);
    }
    out += "}\n}\n";
    return out;
}

Result<AxisDeltaReport, std::string> delta_report_from_json(std::string_view text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) return std::string("bad delta report JSON");
    AxisDeltaReport report;
    report.repeats = j.value("repeats", 0);
    for (const auto& row : j.value("axes", json::array())) {
        int axis = row.value("axis", 0);
        if (axis < 1 || axis > kAxisCount) return std::string("axis index out of range");
        report.mean_abs_delta[axis - 1] = row.value("mean_abs_delta", 0.0);
    }
    for (const auto& [name, value] : j.value("groups", json::object()).items()) {
        auto g = group_from_name(name);
        if (!g) return std::string("unknown group: " + name);
        report.group_mean[*g] = value.get<double>();
    }
    return report;
}

std::string delta_report_to_csv(const AxisDeltaReport& report) {
    std::string out = "axis,group,mean_abs_delta\n";
    for (int a = 0; a < kAxisCount; ++a) {
        AxisId id(a + 1);
        out += std::to_string(a + 1) + "," + std::string(group_name(axis_group(id))) + "," +
               format_fixed(report.mean_abs_delta[a], 6) + "\n";
    }
    return out;
}

std::string rhi_trials_to_jsonl(const std::vector<RhiTrial>& trials) {
    std::string out;
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const RhiTrial& t = trials[i];
        json j = {{"repeat", i},
                  {"prop", std::string(prop_name(t.prop))},
                  {"rotation", std::string(rotation_name(t.rotation))},
                  {"task1", t.task1_text},
                  {"task2", t.task2_text},
                  {"task3", t.task3_text},
                  {"script", t.script ? render_script(*t.script) : ""},
                  {"pose_before", json::parse(pose_to_json(t.pose_before))},
                  {"pose_after", json::parse(pose_to_json(t.pose_after))},
                  {"classification", std::string(response_class_name(t.classification))},
                  {"error_note", t.error_note}};
        out += j.dump() + "\n";
    }
    return out;
}

std::string delta_plot_json(std::string_view condition_label, const AxisDeltaReport& report) {
    std::string out = "{\n  \"condition\": \"" + std::string(condition_label) + "\",\n";
    out += "  \"repeats\": " + std::to_string(report.repeats) + ",\n";
    out += "  \"axis\": [";
    for (int a = 0; a < kAxisCount; ++a) {
        out += (a ? "," : "") + std::to_string(a + 1);
    }
    out += "],\n  \"mean_abs_delta\": [";
    for (int a = 0; a < kAxisCount; ++a) {
        out += (a ? std::string(",") : std::string()) + format_fixed(report.mean_abs_delta[a], 6);
    }
    out += "]\n}\n";
    return out;
}

Result<bool, std::string> write_text_file(const std::string& path, std::string_view content) {
    fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        return "cannot open for writing: " + path;
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        return "write failed: " + path;
    }
    return true;
}

Result<std::string, IoError> read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return IoError{"cannot open: " + path};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace altersim
