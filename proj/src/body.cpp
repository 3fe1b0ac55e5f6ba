#include "altersim/body.hpp"

#include <cmath>
#include <stdexcept>

#include "altersim/rng.hpp"
#include "altersim/text.hpp"

namespace altersim {

namespace {

double clamp_to_axis(const AxisSpec& axis, double v) {
    if (v < axis.min) return axis.min;
    if (v > axis.max) return axis.max;
    return v;
}

} // namespace

Pose clamp_pose(const BodySpec& spec, const Pose& pose) {
    Pose out = pose;
    for (int i = 1; i <= kAxisCount; ++i) {
        AxisId id(i);
        out.set(id, clamp_to_axis(spec.axis(id), pose.at(id)));
    }
    return out;
}

BodyState::BodyState(BodySpec spec, ActuationMode mode, std::uint64_t rng_seed)
    : spec_(std::move(spec)),
      current_(Pose::neutral()),
      target_(Pose::neutral()),
      mode_(mode),
      rng_seed_(rng_seed) {
    current_ = clamp_pose(spec_, current_);
    target_ = current_;
}

void BodyState::apply_command(AxisId id, double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("apply_command: non-finite value for axis " +
                                    std::to_string(id.value()));
    }
    bool applied = mode_ == ActuationMode::Faithful;
    command_log_.push_back(CommandLogEntry{clock_, id.value(), value, applied});
    if (applied) {
        target_.set(id, clamp_to_axis(spec_.axis(id), value));
    }
}

void BodyState::tick(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("tick: dt must be positive and finite");
    }
    if (mode_ == ActuationMode::Random) {
        // Per-tick derived stream keeps the trajectory a pure function of
        // (seed, tick index), independent of any commands issued.
        SplitMix64 gen(derive_seed(rng_seed_, tick_count_ + 1));
        for (int i = 1; i <= kAxisCount; ++i) {
            AxisId id(i);
            const AxisSpec& axis = spec_.axis(id);
            target_.set(id, axis.min + gen.next_u01() * (axis.max - axis.min));
        }
    }
    for (int i = 1; i <= kAxisCount; ++i) {
        AxisId id(i);
        double step = spec_.axis(id).max_rate * dt;
        double gap = target_.at(id) - current_.at(id);
        if (std::fabs(gap) <= step) {
            current_.set(id, target_.at(id));
        } else {
            current_.set(id, current_.at(id) + (gap > 0 ? step : -step));
        }
    }
    clock_ += dt;
    ++tick_count_;
}

int BodyState::settle(double dt, int budget) {
    int used = 0;
    while (used < budget && !settled()) {
        tick(dt);
        ++used;
    }
    return used;
}

void BodyState::execute_frames(const std::vector<Frame>& frames) {
    for (const Frame& f : frames) {
        if (const auto* m = std::get_if<MoveFrame>(&f)) {
            apply_command(m->id, static_cast<double>(m->millis) / 1000.0);
        }
        // Sync/Nop: pacing markers only; settling is the caller's business.
    }
}

std::string BodyState::canonical_state_json() const {
    std::string out = "{\"mode\":\"";
    out += mode_ == ActuationMode::Faithful ? "faithful" : "random";
    out += "\",\"seed\":" + std::to_string(rng_seed_);
    out += ",\"tick_count\":" + std::to_string(tick_count_);
    out += ",\"clock\":" + format_fixed(clock_, 6);
    out += ",\"current\":" + pose_to_json(current_);
    out += ",\"target\":" + pose_to_json(target_);
    out += "}";
    return out;
}

std::string pose_to_json(const Pose& pose) {
    std::string out = "{\"values\":[";
    for (int i = 0; i < kAxisCount; ++i) {
        if (i > 0) out += ",";
        out += format_fixed(pose.values[i], 6);
    }
    out += "]}";
    return out;
}

std::string body_spec_to_json(const BodySpec& spec) {
    std::string out = "{\"axes\":[";
    bool first = true;
    for (const AxisSpec& a : spec.axes()) {
        if (!first) out += ",";
        first = false;
        out += "{\"id\":" + std::to_string(a.id.value());
        out += ",\"label\":\"" + a.label + "\"";
        out += ",\"group\":\"" + std::string(group_name(a.group)) + "\"";
        out += ",\"min\":" + format_fixed(a.min, 6);
        out += ",\"max\":" + format_fixed(a.max, 6);
        out += ",\"max_rate\":" + format_fixed(a.max_rate, 6);
        out += "}";
    }
    out += "]}";
    return out;
}

} // namespace altersim
