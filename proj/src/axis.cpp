#include "altersim/axis.hpp"

namespace altersim {

AxisGroup axis_group(AxisId id) {
    int i = id.value();
    if (i <= 12) return AxisGroup::HeadNeck;
    if (i <= 15) return AxisGroup::Abdomen;
    if (i <= 28) return AxisGroup::LeftSide;
    if (i <= 41) return AxisGroup::RightSide;
    return AxisGroup::WholeBody;
}

std::string_view group_name(AxisGroup g) {
    switch (g) {
        case AxisGroup::HeadNeck: return "head_neck";
        case AxisGroup::Abdomen: return "abdomen";
        case AxisGroup::LeftSide: return "left_side";
        case AxisGroup::RightSide: return "right_side";
        case AxisGroup::WholeBody: return "whole_body";
    }
    return "unknown";
}

std::string_view group_display_name(AxisGroup g) {
    switch (g) {
        case AxisGroup::HeadNeck: return "head and neck";
        case AxisGroup::Abdomen: return "abdomen";
        case AxisGroup::LeftSide: return "left arm";
        case AxisGroup::RightSide: return "right arm";
        case AxisGroup::WholeBody: return "whole body";
    }
    return "unknown";
}

std::optional<AxisGroup> group_from_name(std::string_view name) {
    for (AxisGroup g : kAllGroups) {
        if (group_name(g) == name) return g;
    }
    return std::nullopt;
}

std::vector<int> group_axes(AxisGroup g) {
    std::vector<int> out;
    for (int i = 1; i <= kAxisCount; ++i) {
        if (axis_group(AxisId(i)) == g) out.push_back(i);
    }
    return out;
}

BodySpec::BodySpec(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
    if (axes_.size() != static_cast<std::size_t>(kAxisCount)) {
        throw std::invalid_argument("BodySpec: expected exactly 43 axes, got " +
                                    std::to_string(axes_.size()));
    }
    for (std::size_t i = 0; i < axes_.size(); ++i) {
        if (axes_[i].id.offset() != i) {
            throw std::invalid_argument("BodySpec: axes must be ordered by id");
        }
    }
}

BodySpec default_body_spec() {
    // Labels are a plausible channel map for a legless android torso with an
    // expressive face; the platform's own axis list is not published.
    static const char* kLabels[kAxisCount] = {
        "neck_yaw",            // 1
        "neck_pitch",          // 2
        "neck_roll",           // 3
        "eyes_yaw",            // 4
        "eyes_pitch",          // 5
        "eyelid_upper",        // 6
        "eyelid_lower",        // 7
        "brow_left",           // 8
        "brow_right",          // 9
        "mouth_open",          // 10
        "mouth_corner_left",   // 11
        "mouth_corner_right",  // 12
        "torso_pitch",         // 13
        "torso_roll",          // 14
        "torso_yaw",           // 15
        "left_shoulder_pitch", // 16
        "left_shoulder_roll",  // 17
        "left_shoulder_yaw",   // 18
        "left_elbow",          // 19
        "left_forearm_twist",  // 20
        "left_wrist_pitch",    // 21
        "left_wrist_roll",     // 22
        "left_thumb",          // 23
        "left_index",          // 24
        "left_middle",         // 25
        "left_ring",           // 26
        "left_little",         // 27
        "left_hand_spread",    // 28
        "right_shoulder_pitch",// 29
        "right_shoulder_roll", // 30
        "right_shoulder_yaw",  // 31
        "right_elbow",         // 32
        "right_forearm_twist", // 33
        "right_wrist_pitch",   // 34
        "right_wrist_roll",    // 35
        "right_thumb",         // 36
        "right_index",         // 37
        "right_middle",        // 38
        "right_ring",          // 39
        "right_little",        // 40
        "right_hand_spread",   // 41
        "body_lift",           // 42
        "body_turn",           // 43
    };

    std::vector<AxisSpec> axes;
    axes.reserve(kAxisCount);
    for (int i = 1; i <= kAxisCount; ++i) {
        AxisId id(i);
        axes.emplace_back(id, kLabels[i - 1], axis_group(id));
    }
    return BodySpec(std::move(axes));
}

} // namespace altersim
