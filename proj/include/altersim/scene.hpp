#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>

#include "altersim/body.hpp"

namespace altersim {

enum class Prop { Knife, Mop };
enum class Rotation { Deg0, Deg90 };

std::string_view prop_name(Prop p);
std::string_view rotation_name(Rotation r);

// A mirror facing the body, seen through the head camera.
struct MirrorScene {
    double mirror_distance = 1.5; // meters
};

// A first-person prop scene: a hand-held object presented toward the body's
// right arm, upright or rotated 90 degrees.
struct RhiScene {
    Prop prop;
    Rotation rotation;
    AxisId contact_axis; // right-side axis the prop touches
};

using Scene = std::variant<MirrorScene, RhiScene>;

MirrorScene make_msr_scene(double mirror_distance);
RhiScene make_rhi_scene(Prop prop, Rotation rotation, AxisId contact_axis = AxisId(33));

// Head-camera geometry. Yaw/pitch are affine in the designated head axes:
// 0.5 is straight ahead and the full axis range spans +-full_range_deg.
// Thresholds are inclusive.
struct CameraConfig {
    int yaw_axis = 1;
    int pitch_axis = 2;
    double full_range_deg = 45.0;
    double yaw_limit_deg = 20.0;
    double pitch_limit_deg = 15.0;
};

double head_yaw_deg(const BodyState& state, const CameraConfig& camera = {});
double head_pitch_deg(const BodyState& state, const CameraConfig& camera = {});

// True iff the mirror is inside the camera cone.
bool mirror_visible(const BodyState& state, const MirrorScene& scene,
                    const CameraConfig& camera = {});

struct PropView {
    Prop prop;
    Rotation rotation;
    AxisId contact_axis;
};

// Ground-truth capture of what the head camera sees right now. The caller is
// expected to have settled the body first (capture-after-motion semantics).
struct SceneSnapshot {
    Scene scene;
    bool mirror_visible = false;
    std::optional<Pose> reflected_pose; // present iff mirror_visible
    std::set<AxisGroup> own_parts_in_view;
    std::optional<PropView> prop_view;
    double snapshot_clock = 0.0;
};

SceneSnapshot capture(const BodyState& state, const Scene& scene,
                      const CameraConfig& camera = {});

// Ground-truth scene describer standing in for vision-model image-to-text.
// misreport_rate > 0 flips posture buckets from the seeded stream; the
// default is exact ground truth.
struct DescriberConfig {
    enum class Verbosity { Terse, Detailed };
    Verbosity verbosity = Verbosity::Terse;
    std::optional<std::uint64_t> noise_seed;
    double misreport_rate = 0.0;
};

// Posture buckets for group summaries: lowered < 0.33, raised > 0.67, mid
// otherwise (docs/describer.md pins the exact template strings).
enum class PostureBucket { Lowered, Mid, Raised };

PostureBucket posture_bucket(double value);
std::string_view bucket_name(PostureBucket b);

// Pure function of (snapshot, cfg); identical inputs give identical text.
std::string describe_snapshot(const SceneSnapshot& snapshot, const DescriberConfig& cfg = {});

// Canonical JSON snapshot serialization, used by transcripts and tests.
std::string snapshot_to_json(const SceneSnapshot& snapshot);

} // namespace altersim
