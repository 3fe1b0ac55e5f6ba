#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "altersim/axis.hpp"
#include "altersim/wire.hpp"

namespace altersim {

// Default control period: midpoint of the platform's 100-150 ms refresh.
inline constexpr double kDefaultTickSeconds = 0.125;

// Normalized joint positions, index i <-> axis i+1.
struct Pose {
    std::array<double, kAxisCount> values{};

    // All axes at mid-range; the canonical initial pose.
    static Pose neutral() {
        Pose p;
        p.values.fill(0.5);
        return p;
    }

    double at(AxisId id) const { return values[id.offset()]; }
    void set(AxisId id, double v) { values[id.offset()] = v; }

    friend bool operator==(const Pose& a, const Pose& b) { return a.values == b.values; }
};

Pose clamp_pose(const BodySpec& spec, const Pose& pose);

enum class ActuationMode {
    Faithful, // targets follow commands
    Random,   // commands are logged but ignored; targets redraw every tick
};

struct CommandLogEntry {
    double clock;
    int axis;
    double value;
    bool applied; // false in Random mode
};

// The simulated 43-axis body. Actuation is a pure slew-rate limiter: each
// tick every axis moves toward its target by at most max_rate * dt.
//
// Single logical owner: advance only via explicit apply_command/tick calls
// from one caller at a time. No internal timers or background activity.
class BodyState {
public:
    BodyState(BodySpec spec, ActuationMode mode, std::uint64_t rng_seed);

    const BodySpec& spec() const { return spec_; }
    const Pose& current() const { return current_; }
    const Pose& target() const { return target_; }
    ActuationMode mode() const { return mode_; }
    std::uint64_t rng_seed() const { return rng_seed_; }
    double clock() const { return clock_; }
    std::uint64_t tick_count() const { return tick_count_; }
    const std::vector<CommandLogEntry>& command_log() const { return command_log_; }

    bool settled() const { return current_ == target_; }

    // Faithful: target[id] := clamp(value). Random: the command is logged but
    // the target is untouched. Non-finite values are rejected.
    void apply_command(AxisId id, double value);

    // Advances the simulation by dt seconds (dt > 0). In Random mode every
    // axis target is redrawn uniformly from the per-tick seeded stream before
    // slewing, so the trajectory is a pure function of (seed, dt, tick count).
    void tick(double dt);

    // Ticks until current == target or the budget runs out; returns ticks
    // spent. In Random mode the target keeps moving, so the budget is spent
    // in full.
    int settle(double dt, int budget);

    // Applies a frame sequence: Move frames become commands (value =
    // millis/1000), Sync and Nop frames carry no state change here.
    void execute_frames(const std::vector<Frame>& frames);

    // Canonical serialization of the full dynamic state; used by the
    // determinism checks.
    std::string canonical_state_json() const;

private:
    BodySpec spec_;
    Pose current_;
    Pose target_;
    ActuationMode mode_;
    std::uint64_t rng_seed_;
    double clock_ = 0.0;
    std::uint64_t tick_count_ = 0;
    std::vector<CommandLogEntry> command_log_;
};

// Canonical JSON, numbers at 6 decimal places (docs: field order is
// normative for golden files and reports).
std::string pose_to_json(const Pose& pose);
std::string body_spec_to_json(const BodySpec& spec);

} // namespace altersim
