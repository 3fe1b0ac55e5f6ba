#include "altersim/scene.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "altersim/rng.hpp"
#include "altersim/text.hpp"

namespace altersim {

namespace {

constexpr double kAngleEps = 1e-9;

double axis_angle_deg(const BodyState& state, int axis, double full_range_deg) {
    return (state.current().at(AxisId(axis)) - 0.5) * 2.0 * full_range_deg;
}

double group_mean(const Pose& pose, AxisGroup g) {
    double sum = 0.0;
    int n = 0;
    for (int axis : group_axes(g)) {
        sum += pose.at(AxisId(axis));
        ++n;
    }
    return n == 0 ? 0.0 : sum / n;
}

PostureBucket maybe_flip(PostureBucket b, const DescriberConfig& cfg, double clock,
                         int group_index) {
    if (cfg.misreport_rate <= 0.0 || !cfg.noise_seed) return b;
    // Derived per (seed, clock, group) so the describer stays a pure function
    // of its inputs.
    auto clock_bits = static_cast<std::uint64_t>(std::llround(clock * 1e6));
    SplitMix64 gen(derive_seed(*cfg.noise_seed, clock_bits * 43 + group_index));
    if (gen.next_u01() >= cfg.misreport_rate) return b;
    switch (b) {
        case PostureBucket::Lowered: return PostureBucket::Mid;
        case PostureBucket::Mid: return PostureBucket::Raised;
        case PostureBucket::Raised: return PostureBucket::Lowered;
    }
    return b;
}

} // namespace

std::string_view prop_name(Prop p) {
    return p == Prop::Knife ? "knife" : "mop";
}

std::string_view rotation_name(Rotation r) {
    return r == Rotation::Deg0 ? "0" : "90";
}

MirrorScene make_msr_scene(double mirror_distance) {
    if (!(mirror_distance > 0.0)) {
        throw std::invalid_argument("mirror_distance must be positive");
    }
    return MirrorScene{mirror_distance};
}

RhiScene make_rhi_scene(Prop prop, Rotation rotation, AxisId contact_axis) {
    if (axis_group(contact_axis) != AxisGroup::RightSide) {
        throw std::invalid_argument("contact_axis must lie in the right-side group");
    }
    return RhiScene{prop, rotation, contact_axis};
}

double head_yaw_deg(const BodyState& state, const CameraConfig& camera) {
    return axis_angle_deg(state, camera.yaw_axis, camera.full_range_deg);
}

double head_pitch_deg(const BodyState& state, const CameraConfig& camera) {
    return axis_angle_deg(state, camera.pitch_axis, camera.full_range_deg);
}

bool mirror_visible(const BodyState& state, const MirrorScene& scene,
                    const CameraConfig& camera) {
    (void)scene;
    return std::fabs(head_yaw_deg(state, camera)) <= camera.yaw_limit_deg + kAngleEps &&
           std::fabs(head_pitch_deg(state, camera)) <= camera.pitch_limit_deg + kAngleEps;
}

SceneSnapshot capture(const BodyState& state, const Scene& scene, const CameraConfig& camera) {
    SceneSnapshot snap;
    snap.scene = scene;
    snap.snapshot_clock = state.clock();

    if (const auto* mirror = std::get_if<MirrorScene>(&scene)) {
        snap.mirror_visible = mirror_visible(state, *mirror, camera);
        if (snap.mirror_visible) {
            snap.reflected_pose = state.current(); // a reflection, not a second agent
        }
    } else {
        const auto& rhi = std::get<RhiScene>(scene);
        snap.prop_view = PropView{rhi.prop, rhi.rotation, rhi.contact_axis};
    }

    // A group counts as in view when its proxy axis (the group's first axis)
    // sits inside the camera cone under the same threshold rule. Logged for
    // framing ablations; the describer does not consume it.
    for (AxisGroup g : kAllGroups) {
        int proxy = group_axes(g).front();
        double angle = axis_angle_deg(state, proxy, camera.full_range_deg);
        if (std::fabs(angle) <= camera.yaw_limit_deg + kAngleEps) {
            snap.own_parts_in_view.insert(g);
        }
    }
    return snap;
}

PostureBucket posture_bucket(double value) {
    if (value < 0.33) return PostureBucket::Lowered;
    if (value > 0.67) return PostureBucket::Raised;
    return PostureBucket::Mid;
}

std::string_view bucket_name(PostureBucket b) {
    switch (b) {
        case PostureBucket::Lowered: return "lowered";
        case PostureBucket::Mid: return "mid";
        case PostureBucket::Raised: return "raised";
    }
    return "mid";
}

std::string describe_snapshot(const SceneSnapshot& snapshot, const DescriberConfig& cfg) {
    if (std::holds_alternative<MirrorScene>(snapshot.scene)) {
        if (!snapshot.mirror_visible || !snapshot.reflected_pose) {
            return "The mirror is not in view.";
        }
        const Pose& pose = *snapshot.reflected_pose;
        std::string out = "Mirror view: a humanoid robot upper body.";
        int group_index = 0;
        for (AxisGroup g : kAllGroups) {
            PostureBucket b = posture_bucket(group_mean(pose, g));
            b = maybe_flip(b, cfg, snapshot.snapshot_clock, group_index++);
            std::string label(group_display_name(g));
            label[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
            out += " " + label + ": " + std::string(bucket_name(b)) + ".";
        }
        if (cfg.verbosity == DescriberConfig::Verbosity::Detailed) {
            out += " Group means:";
            bool first = true;
            for (AxisGroup g : kAllGroups) {
                out += first ? " " : ", ";
                first = false;
                out += std::string(group_name(g)) + " " + format_fixed(group_mean(pose, g), 2);
            }
            out += ".";
        }
        return out;
    }

    const auto& view = *snapshot.prop_view;
    std::string out = "First-person view from the eye camera. ";
    if (view.rotation == Rotation::Deg0) {
        out += "A right hand rests palm up with fingers extended and slightly spread. ";
        if (view.prop == Prop::Knife) {
            out += "A knife blade touches the middle segment of the index finger. "
                   "The knife is pointed at the hand at 0 degrees.";
        } else {
            out += "A cleaning mop leans toward the open palm. "
                   "The mop is presented at 0 degrees.";
        }
    } else {
        out += "The scene is rotated 90 degrees. A right hand extends sideways with the "
               "thumb on top. ";
        if (view.prop == Prop::Knife) {
            out += "A knife blade presses against the side of the hand.";
        } else {
            out += "A cleaning mop leans against the side of the hand.";
        }
    }
    return out;
}

std::string snapshot_to_json(const SceneSnapshot& snapshot) {
    std::string out = "{";
    if (const auto* mirror = std::get_if<MirrorScene>(&snapshot.scene)) {
        out += "\"scene\":{\"kind\":\"mirror\",\"mirror_distance\":" +
               format_fixed(mirror->mirror_distance, 6) + "}";
    } else {
        const auto& rhi = std::get<RhiScene>(snapshot.scene);
        out += "\"scene\":{\"kind\":\"rhi\",\"prop\":\"" + std::string(prop_name(rhi.prop)) +
               "\",\"rotation\":" + std::string(rotation_name(rhi.rotation)) +
               ",\"contact_axis\":" + std::to_string(rhi.contact_axis.value()) + "}";
    }
    out += ",\"mirror_visible\":";
    out += snapshot.mirror_visible ? "true" : "false";
    out += ",\"reflected_pose\":";
    out += snapshot.reflected_pose ? pose_to_json(*snapshot.reflected_pose) : "null";
    out += ",\"own_parts_in_view\":[";
    bool first = true;
    for (AxisGroup g : snapshot.own_parts_in_view) {
        if (!first) out += ",";
        first = false;
        out += "\"" + std::string(group_name(g)) + "\"";
    }
    out += "]";
    if (snapshot.prop_view) {
        out += ",\"prop_view\":{\"prop\":\"" + std::string(prop_name(snapshot.prop_view->prop)) +
               "\",\"rotation\":" + std::string(rotation_name(snapshot.prop_view->rotation)) +
               ",\"contact_axis\":" + std::to_string(snapshot.prop_view->contact_axis.value()) +
               "}";
    } else {
        out += ",\"prop_view\":null";
    }
    out += ",\"snapshot_clock\":" + format_fixed(snapshot.snapshot_clock, 6);
    out += "}";
    return out;
}

} // namespace altersim
