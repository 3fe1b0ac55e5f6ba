#include "altersim/script.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "altersim/text.hpp"

namespace altersim {

namespace {

constexpr double kSlewEps = 1e-9;

struct LineCursor {
    std::string_view s;
    std::size_t pos = 0;

    void skip_spaces() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool at_end() {
        skip_spaces();
        return pos >= s.size();
    }
    bool eat(char c) {
        skip_spaces();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool eat_word(std::string_view w) {
        skip_spaces();
        if (s.substr(pos, w.size()) == w) {
            std::size_t after = pos + w.size();
            if (after == s.size() || s[after] == ' ' || s[after] == '\t') {
                pos = after;
                return true;
            }
        }
        return false;
    }
    // Signed decimal number.
    bool eat_number(double& out) {
        skip_spaces();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        std::size_t digits = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            ++pos;
            ++digits;
        }
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                ++pos;
                ++digits;
            }
        }
        if (digits == 0) {
            pos = start;
            return false;
        }
        out = std::stod(std::string(s.substr(start, pos - start)));
        return true;
    }
    bool eat_int(long& out) {
        skip_spaces();
        std::size_t start = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        if (pos == start) return false;
        out = std::stol(std::string(s.substr(start, pos - start)));
        return true;
    }
};

ScriptDiagnostic diag(int line, ScriptDiagnostic::Kind kind, std::string msg,
                      ScriptDiagnostic::Severity sev = ScriptDiagnostic::Severity::Error) {
    return ScriptDiagnostic{line, kind, sev, std::move(msg)};
}

// Per-axis mention list: (time, value) pairs in keyframe order.
std::map<int, std::vector<std::pair<double, double>>> axis_mentions(const MotionScript& script) {
    std::map<int, std::vector<std::pair<double, double>>> out;
    for (const Keyframe& kf : script.frames) {
        for (const auto& [axis, value] : kf.targets) {
            out[axis].emplace_back(kf.at, value);
        }
    }
    return out;
}

double interp_axis(const std::vector<std::pair<double, double>>& mentions, double initial,
                   double t) {
    if (mentions.empty()) return initial;
    if (t <= mentions.front().first) {
        // Exactly at the first mention -> its value; strictly before -> initial.
        return t == mentions.front().first ? mentions.front().second : initial;
    }
    if (t >= mentions.back().first) return mentions.back().second;
    for (std::size_t i = 1; i < mentions.size(); ++i) {
        if (t <= mentions[i].first) {
            auto [t0, v0] = mentions[i - 1];
            auto [t1, v1] = mentions[i];
            double alpha = (t - t0) / (t1 - t0);
            return v0 + alpha * (v1 - v0);
        }
    }
    return mentions.back().second;
}

} // namespace

std::vector<int> MotionScript::touched_axes() const {
    std::set<int> axes;
    for (const Keyframe& kf : frames) {
        for (const auto& [axis, value] : kf.targets) {
            (void)value;
            axes.insert(axis);
        }
    }
    return std::vector<int>(axes.begin(), axes.end());
}

std::string_view diagnostic_kind_name(ScriptDiagnostic::Kind k) {
    switch (k) {
        case ScriptDiagnostic::Kind::Syntax: return "syntax";
        case ScriptDiagnostic::Kind::RangeViolation: return "range-violation";
        case ScriptDiagnostic::Kind::TimeOrder: return "time-order";
        case ScriptDiagnostic::Kind::UnknownAxis: return "unknown-axis";
        case ScriptDiagnostic::Kind::Reachability: return "reachability";
    }
    return "unknown";
}

std::string format_diagnostic(const ScriptDiagnostic& d) {
    std::string out = "line " + std::to_string(d.line) + ": ";
    out += d.severity == ScriptDiagnostic::Severity::Error ? "error" : "warning";
    out += " [" + std::string(diagnostic_kind_name(d.kind)) + "] " + d.message;
    return out;
}

bool has_errors(const std::vector<ScriptDiagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(), [](const ScriptDiagnostic& d) {
        return d.severity == ScriptDiagnostic::Severity::Error;
    });
}

ParseResult parse_script(std::string_view text) {
    ParseResult result;
    MotionScript script;
    auto& diags = result.diagnostics;

    bool header_seen = false;
    int line_no = 0;
    for (std::string_view raw_line : split_lines(text)) {
        ++line_no;
        std::string_view line = raw_line;
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) continue;

        if (!header_seen) {
            LineCursor cur{line};
            if (cur.eat_word("motion")) {
                std::string name(trim(cur.s.substr(cur.pos)));
                if (name.empty()) {
                    diags.push_back(diag(line_no, ScriptDiagnostic::Kind::Syntax,
                                         "motion header needs a name"));
                } else {
                    script.name = name;
                }
                header_seen = true;
                continue;
            }
            diags.push_back(diag(line_no, ScriptDiagnostic::Kind::Syntax,
                                 "expected 'motion <name>' header"));
            header_seen = true; // parse the rest as body lines anyway
        }

        LineCursor cur{line};
        if (!cur.eat_word("at")) {
            diags.push_back(diag(line_no, ScriptDiagnostic::Kind::Syntax,
                                 "expected 'at <seconds>: ...'"));
            continue;
        }
        double at = 0.0;
        if (!cur.eat_number(at) || !std::isfinite(at) || at < 0.0) {
            diags.push_back(
                diag(line_no, ScriptDiagnostic::Kind::Syntax, "bad keyframe time"));
            continue;
        }
        if (!cur.eat(':')) {
            diags.push_back(
                diag(line_no, ScriptDiagnostic::Kind::Syntax, "expected ':' after time"));
            continue;
        }

        Keyframe kf;
        kf.at = at;
        bool line_ok = true;
        bool first_target = true;
        while (line_ok && !cur.at_end()) {
            if (!first_target && !cur.eat(',')) {
                diags.push_back(diag(line_no, ScriptDiagnostic::Kind::Syntax,
                                     "expected ',' between targets"));
                line_ok = false;
                break;
            }
            first_target = false;
            long axis = 0;
            if (!cur.eat_int(axis)) {
                diags.push_back(
                    diag(line_no, ScriptDiagnostic::Kind::Syntax, "expected axis index"));
                line_ok = false;
                break;
            }
            if (!cur.eat('=')) {
                diags.push_back(
                    diag(line_no, ScriptDiagnostic::Kind::Syntax, "expected '=' after axis"));
                line_ok = false;
                break;
            }
            double value = 0.0;
            if (!cur.eat_number(value)) {
                diags.push_back(
                    diag(line_no, ScriptDiagnostic::Kind::Syntax, "expected value"));
                line_ok = false;
                break;
            }
            if (axis < 1 || axis > kAxisCount) {
                diags.push_back(diag(line_no, ScriptDiagnostic::Kind::UnknownAxis,
                                     "axis " + std::to_string(axis) + " outside 1..43"));
                line_ok = false;
                continue;
            }
            if (!(value >= 0.0 && value <= 1.0)) {
                diags.push_back(diag(line_no, ScriptDiagnostic::Kind::RangeViolation,
                                     "value " + format_fixed(value, 3) + " outside [0, 1]"));
                line_ok = false;
                continue;
            }
            if (kf.targets.count(static_cast<int>(axis))) {
                diags.push_back(diag(line_no, ScriptDiagnostic::Kind::Syntax,
                                     "axis " + std::to_string(axis) +
                                         " listed twice in one keyframe"));
                line_ok = false;
                continue;
            }
            kf.targets[static_cast<int>(axis)] = value;
        }
        if (!line_ok) continue;
        if (kf.targets.empty()) {
            diags.push_back(
                diag(line_no, ScriptDiagnostic::Kind::Syntax, "keyframe has no targets"));
            continue;
        }
        if (!script.frames.empty() && kf.at <= script.frames.back().at) {
            diags.push_back(diag(line_no, ScriptDiagnostic::Kind::TimeOrder,
                                 "keyframe time " + format_fixed(kf.at, 3) +
                                     " does not increase"));
            continue;
        }
        script.frames.push_back(std::move(kf));
    }

    if (!header_seen) {
        diags.push_back(diag(std::max(line_no, 1), ScriptDiagnostic::Kind::Syntax,
                             "empty script: expected 'motion <name>' header"));
    }
    if (script.frames.empty() && diags.empty()) {
        diags.push_back(diag(std::max(line_no, 1), ScriptDiagnostic::Kind::Syntax,
                             "script has no keyframes"));
    }

    if (diags.empty()) result.script = std::move(script);
    return result;
}

std::string render_script(const MotionScript& script) {
    std::string out = "motion " + script.name + "\n";
    for (const Keyframe& kf : script.frames) {
        out += "at " + format_fixed(kf.at, 3) + ":";
        bool first = true;
        for (const auto& [axis, value] : kf.targets) { // std::map: ascending
            out += first ? " " : ", ";
            first = false;
            out += std::to_string(axis) + "=" + format_fixed(value, 3);
        }
        out += "\n";
    }
    return out;
}

std::vector<ScriptDiagnostic> validate_script(const BodySpec& spec, const MotionScript& script) {
    std::vector<ScriptDiagnostic> diags;
    int line = 1; // header is line 1; keyframe k is line k+1 in canonical text
    for (const Keyframe& kf : script.frames) {
        ++line;
        for (const auto& [axis, value] : kf.targets) {
            const AxisSpec& a = spec.axis(axis);
            if (value < a.min || value > a.max) {
                diags.push_back(diag(line, ScriptDiagnostic::Kind::RangeViolation,
                                     "axis " + std::to_string(axis) + " value " +
                                         format_fixed(value, 3) + " outside [" +
                                         format_fixed(a.min, 3) + ", " +
                                         format_fixed(a.max, 3) + "]"));
            }
        }
    }

    // Reachability between consecutive mentions of each axis. The diagnostic
    // line is the later keyframe's line in canonical text.
    std::map<int, std::tuple<double, double, int>> last_mention; // axis -> (t, v, line)
    int kf_line = 1;
    for (const Keyframe& kf : script.frames) {
        ++kf_line;
        for (const auto& [axis, value] : kf.targets) {
            const AxisSpec& a = spec.axis(axis);
            auto it = last_mention.find(axis);
            if (it != last_mention.end()) {
                auto [t0, v0, l0] = it->second;
                (void)l0;
                double gap = std::fabs(value - v0);
                double dt = kf.at - t0;
                if (gap > a.max_rate * dt + kSlewEps) {
                    diags.push_back(diag(kf_line, ScriptDiagnostic::Kind::Reachability,
                                         "axis " + std::to_string(axis) + " moves " +
                                             format_fixed(gap, 3) + " in " +
                                             format_fixed(dt, 3) + " s but max_rate allows " +
                                             format_fixed(a.max_rate * dt, 3),
                                         ScriptDiagnostic::Severity::Warning));
                }
            }
            last_mention[axis] = {kf.at, value, kf_line};
        }
    }
    return diags;
}

Pose interpolate(const MotionScript& script, const Pose& initial, double t) {
    Pose out = initial;
    for (const auto& [axis, mentions] : axis_mentions(script)) {
        AxisId id(axis);
        out.set(id, interp_axis(mentions, initial.at(id), t));
    }
    return out;
}

Result<std::vector<Frame>, std::vector<ScriptDiagnostic>> compile_to_frames(
    const MotionScript& script, const BodySpec& spec, double dt) {
    std::vector<ScriptDiagnostic> diags = validate_script(spec, script);
    if (has_errors(diags)) {
        return diags;
    }
    if (!(dt > 0.0) || script.frames.empty()) {
        diags.push_back(diag(0, ScriptDiagnostic::Kind::Syntax,
                             script.frames.empty() ? "script has no keyframes"
                                                   : "sample period must be positive"));
        return diags;
    }

    auto mentions = axis_mentions(script);
    // Backward extension: before an axis's first mention it holds that
    // mention's value, so the first sample commands every touched axis.
    Pose base = Pose::neutral();
    for (const auto& [axis, axis_mentions_list] : mentions) {
        base.set(AxisId(axis), axis_mentions_list.front().second);
    }

    const double duration = script.duration();
    std::vector<double> sample_times;
    for (std::uint64_t k = 0;; ++k) {
        double t = static_cast<double>(k) * dt;
        if (t >= duration - 1e-12) break;
        sample_times.push_back(t);
    }
    sample_times.push_back(duration);

    std::vector<Frame> frames;
    std::map<int, int> last_millis;
    for (double t : sample_times) {
        Pose sampled = interpolate(script, base, t);
        for (const auto& [axis, axis_mentions_list] : mentions) {
            (void)axis_mentions_list;
            AxisId id(axis);
            double v = std::clamp(sampled.at(id), 0.0, 1.0);
            int millis = static_cast<int>(std::llround(v * 1000.0));
            auto it = last_millis.find(axis);
            if (it == last_millis.end() || it->second != millis) {
                frames.push_back(MoveFrame{id, millis});
                last_millis[axis] = millis;
            }
        }
    }
    frames.push_back(SyncFrame{});
    return frames;
}

} // namespace altersim
