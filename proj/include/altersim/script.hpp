#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "altersim/body.hpp"

namespace altersim {

// One timed pose command. Axes absent from `targets` hold their value.
struct Keyframe {
    double at = 0.0;                // seconds
    std::map<int, double> targets;  // axis index -> normalized position

    friend bool operator==(const Keyframe& a, const Keyframe& b) {
        return a.at == b.at && a.targets == b.targets;
    }
};

// The motion IR emitted by the second prompt stage. Grammar (normative,
// docs/grammar.md):
//
//   motion <name>
//   at <seconds>: <axis>=<value>[, <axis>=<value>]*
//
// '#' starts a comment; blank lines are ignored; keyframe times strictly
// increase; at least one keyframe.
struct MotionScript {
    std::string name;
    std::vector<Keyframe> frames;

    std::vector<int> touched_axes() const;
    double duration() const { return frames.empty() ? 0.0 : frames.back().at; }

    friend bool operator==(const MotionScript& a, const MotionScript& b) {
        return a.name == b.name && a.frames == b.frames;
    }
};

struct ScriptDiagnostic {
    enum class Kind {
        Syntax,
        RangeViolation,
        TimeOrder,
        UnknownAxis,
        Reachability, // validation-only, always a warning
    };
    enum class Severity { Error, Warning };

    int line = 0;
    Kind kind = Kind::Syntax;
    Severity severity = Severity::Error;
    std::string message;
};

std::string_view diagnostic_kind_name(ScriptDiagnostic::Kind k);
std::string format_diagnostic(const ScriptDiagnostic& d);
bool has_errors(const std::vector<ScriptDiagnostic>& diags);

struct ParseResult {
    std::optional<MotionScript> script; // present iff diagnostics is empty
    std::vector<ScriptDiagnostic> diagnostics;
};

// Total parse: collects one diagnostic per malformed line and never throws.
ParseResult parse_script(std::string_view text);

// Canonical text: values at 3 decimals, times at 3 decimals, axes ascending
// per keyframe. parse(render(s)) == s for scripts whose numbers are already
// 3-decimal quantized.
std::string render_script(const MotionScript& script);

// Range violations (against per-axis [min,max]) are errors; keyframe-to-
// keyframe gaps an axis cannot cover at max_rate are Reachability warnings.
std::vector<ScriptDiagnostic> validate_script(const BodySpec& spec, const MotionScript& script);

// Piecewise-linear pose at time t: per axis, linear between that axis's
// mentioned keyframes, `initial` before its first mention, hold after its
// last.
Pose interpolate(const MotionScript& script, const Pose& initial, double t);

// Lowers a script to wire frames sampled at t = 0, dt, 2dt, ... plus the
// final keyframe time, emitting Move frames only when an axis's rounded
// millis changed since the previous sample, then one trailing Sync.
// Validation errors propagate; warnings do not block.
Result<std::vector<Frame>, std::vector<ScriptDiagnostic>> compile_to_frames(
    const MotionScript& script, const BodySpec& spec, double dt);

} // namespace altersim
