#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "altersim/body.hpp"
#include "altersim/rng.hpp"
#include "altersim/text.hpp"

using namespace altersim;

namespace {

// Independent slew oracle: closed-form single-axis step.
double slew_oracle(double current, double target, double rate, double dt) {
    double gap = target - current;
    double step = rate * dt;
    if (std::fabs(gap) <= step) return target;
    return current + (gap > 0 ? step : -step);
}

std::string repo_path(const char* rel) {
    return std::string(ALTERSIM_SOURCE_DIR) + "/" + rel;
}

} // namespace

TEST_CASE("axis ids reject out-of-range construction") {
    CHECK_THROWS_AS(AxisId(0), std::out_of_range);
    CHECK_THROWS_AS(AxisId(44), std::out_of_range);
    CHECK_THROWS_AS(AxisId(-3), std::out_of_range);
    CHECK(AxisId(1).value() == 1);
    CHECK(AxisId(43).value() == 43);
    CHECK(!AxisId::try_make(99).has_value());
}

TEST_CASE("axis grouping follows the region table") {
    CHECK(axis_group(AxisId(1)) == AxisGroup::HeadNeck);
    CHECK(axis_group(AxisId(12)) == AxisGroup::HeadNeck);
    CHECK(axis_group(AxisId(13)) == AxisGroup::Abdomen);
    CHECK(axis_group(AxisId(14)) == AxisGroup::Abdomen);
    CHECK(axis_group(AxisId(15)) == AxisGroup::Abdomen);
    CHECK(axis_group(AxisId(16)) == AxisGroup::LeftSide);
    CHECK(axis_group(AxisId(28)) == AxisGroup::LeftSide);
    CHECK(axis_group(AxisId(29)) == AxisGroup::RightSide);
    CHECK(axis_group(AxisId(30)) == AxisGroup::RightSide);
    CHECK(axis_group(AxisId(41)) == AxisGroup::RightSide);
    CHECK(axis_group(AxisId(42)) == AxisGroup::WholeBody);
    CHECK(axis_group(AxisId(43)) == AxisGroup::WholeBody);

    // Every axis maps to exactly one group and the partition is complete.
    int covered = 0;
    for (AxisGroup g : kAllGroups) covered += static_cast<int>(group_axes(g).size());
    CHECK(covered == kAxisCount);
}

TEST_CASE("default body spec has 43 axes with sane defaults") {
    BodySpec spec = default_body_spec();
    CHECK(spec.axes().size() == 43);
    CHECK(spec.axis(14).group == AxisGroup::Abdomen);
    CHECK(spec.axis(33).label == "right_forearm_twist");
    for (const AxisSpec& a : spec.axes()) {
        CHECK(a.min == 0.0);
        CHECK(a.max == 1.0);
        CHECK(a.max_rate == 1.0);
    }
    CHECK_THROWS_AS(spec.axis(44), std::out_of_range);
}

TEST_CASE("clamp_pose clamps into per-axis bounds and is idempotent") {
    BodySpec spec = default_body_spec();
    Pose p = Pose::neutral();
    p.set(AxisId(5), 1.2);
    p.set(AxisId(6), -0.1);
    Pose c = clamp_pose(spec, p);
    CHECK(c.at(AxisId(5)) == 1.0);
    CHECK(c.at(AxisId(6)) == 0.0);
    CHECK(c.at(AxisId(7)) == 0.5);
    CHECK(clamp_pose(spec, c) == c);

    Pose in_range = Pose::neutral();
    CHECK(clamp_pose(spec, in_range) == in_range);
}

TEST_CASE("apply_command: faithful mode sets the clamped target") {
    BodyState body(default_body_spec(), ActuationMode::Faithful, 0);
    body.apply_command(AxisId(30), 0.8);
    CHECK(body.target().at(AxisId(30)) == 0.8);
    body.apply_command(AxisId(30), 1.5);
    CHECK(body.target().at(AxisId(30)) == 1.0);
    CHECK_THROWS_AS(body.apply_command(AxisId(30), std::nan("")), std::invalid_argument);
}

TEST_CASE("apply_command: random mode logs but ignores commands") {
    BodyState body(default_body_spec(), ActuationMode::Random, 7);
    Pose target_before = body.target();
    body.apply_command(AxisId(30), 0.8);
    CHECK(body.target() == target_before);
    REQUIRE(body.command_log().size() == 1);
    CHECK(body.command_log()[0].axis == 30);
    CHECK(body.command_log()[0].value == 0.8);
    CHECK(body.command_log()[0].applied == false);
}

TEST_CASE("tick slews toward the target at max_rate, arriving exactly") {
    BodyState body(default_body_spec(), ActuationMode::Faithful, 0);
    body.apply_command(AxisId(30), 1.0);
    // Axis starts at 0.5; push it to 0.0 first so the gap is full-range.
    body.apply_command(AxisId(20), 0.0);

    BodyState fresh(default_body_spec(), ActuationMode::Faithful, 0);
    fresh.apply_command(AxisId(30), 1.0);
    fresh.tick(0.125);
    CHECK(fresh.current().at(AxisId(30))
          == doctest::Approx(slew_oracle(0.5, 1.0, 1.0, 0.125)).epsilon(1e-12));
    CHECK(fresh.current().at(AxisId(30)) == 0.625);

    // Within reach: exact arrival.
    BodyState near(default_body_spec(), ActuationMode::Faithful, 0);
    near.apply_command(AxisId(30), 0.55);
    near.tick(0.125);
    CHECK(near.current().at(AxisId(30)) == 0.55);

    CHECK_THROWS_AS(fresh.tick(0.0), std::invalid_argument);
    CHECK_THROWS_AS(fresh.tick(-1.0), std::invalid_argument);
}

TEST_CASE("tick matches the slew oracle from arbitrary states") {
    BodySpec spec = default_body_spec();
    SplitMix64 gen(123);
    for (int iter = 0; iter < 200; ++iter) {
        BodyState body(spec, ActuationMode::Faithful, 0);
        double start = gen.next_u01();
        double target = gen.next_u01();
        double dt = 0.01 + gen.next_u01() * 0.3;
        AxisId axis(1 + static_cast<int>(gen.next_below(43)));
        body.apply_command(axis, start);
        body.settle(0.125, 100);
        body.apply_command(axis, target);
        double before = body.current().at(axis);
        body.tick(dt);
        CHECK(body.current().at(axis)
              == doctest::Approx(slew_oracle(before, target, 1.0, dt)).epsilon(1e-12));
    }
}

TEST_CASE("faithful convergence within the slew-time bound") {
    BodyState body(default_body_spec(), ActuationMode::Faithful, 0);
    body.apply_command(AxisId(30), 1.0); // gap 0.5 from neutral
    double dt = 0.125;
    int bound = static_cast<int>(std::ceil(0.5 / (1.0 * dt)));
    int used = body.settle(dt, bound + 1);
    CHECK(used <= bound);
    CHECK(body.current().at(AxisId(30)) == 1.0);
}

TEST_CASE("random mode trajectory: pure function of seed/dt/ticks") {
    auto run = [](std::uint64_t seed, bool with_commands) {
        BodyState body(default_body_spec(), ActuationMode::Random, seed);
        std::string trace;
        for (int i = 0; i < 24; ++i) {
            if (with_commands && i % 3 == 0) {
                body.apply_command(AxisId(30), 0.9); // must not matter
            }
            body.tick(0.125);
            trace += pose_to_json(body.current());
        }
        return trace;
    };
    CHECK(run(42, false) == run(42, false));
    CHECK(run(42, false) == run(42, true)); // mode isolation
    CHECK(run(42, false) != run(43, false));
}

TEST_CASE("random mode golden trace, seed 42") {
    BodyState body(default_body_spec(), ActuationMode::Random, 42);
    std::string got = "{\"seed\":42,\"dt\":0.125000,\"trace\":[";
    for (int i = 0; i < 16; ++i) {
        body.tick(0.125);
        if (i > 0) got += ",";
        got += pose_to_json(body.current());
    }
    got += "]}";

    std::ifstream in(repo_path("fixtures/golden/random_trace_seed42.json"));
    REQUIRE_MESSAGE(in.good(), "golden file missing; regenerate with altersim-make-fixtures");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string want = ss.str();
    while (!want.empty() && (want.back() == '\n' || want.back() == '\r')) want.pop_back();
    CHECK(got == want);
}

TEST_CASE("slew bound and clamp idempotence under randomized tick sequences") {
    BodySpec spec = default_body_spec();
    SplitMix64 gen(2024);
    for (int run = 0; run < 50; ++run) {
        std::uint64_t seed = gen.next_u64();
        ActuationMode mode = run % 2 == 0 ? ActuationMode::Faithful : ActuationMode::Random;
        BodyState body(spec, mode, seed);
        Pose prev = body.current();
        for (int step = 0; step < 40; ++step) {
            if (gen.next_u01() < 0.4) {
                body.apply_command(AxisId(1 + static_cast<int>(gen.next_below(43))),
                                   gen.next_u01() * 1.4 - 0.2);
            }
            double dt = 0.01 + gen.next_u01() * 0.3;
            body.tick(dt);
            for (int a = 1; a <= kAxisCount; ++a) {
                AxisId id(a);
                double moved = std::fabs(body.current().at(id) - prev.at(id));
                CHECK(moved <= spec.axis(id).max_rate * dt + 1e-9);
            }
            CHECK(clamp_pose(spec, body.current()) == body.current());
            prev = body.current();
        }
    }
}

TEST_CASE("bit-exact determinism of the canonical state serialization") {
    auto run = [] {
        BodyState body(default_body_spec(), ActuationMode::Random, 99);
        body.apply_command(AxisId(10), 0.7);
        std::string out;
        for (int i = 0; i < 10; ++i) {
            body.tick(0.125);
            out += body.canonical_state_json();
            out += "\n";
        }
        return out;
    };
    CHECK(run() == run());
}

TEST_CASE("execute_frames applies moves; sync leaves settling to the caller") {
    BodyState body(default_body_spec(), ActuationMode::Faithful, 0);
    std::vector<Frame> frames = {make_move(30, 800), make_move(16, 200), Frame{SyncFrame{}}};
    body.execute_frames(frames);
    CHECK(body.target().at(AxisId(30)) == 0.8);
    CHECK(body.target().at(AxisId(16)) == 0.2);
    CHECK(body.current().at(AxisId(30)) == 0.5); // not yet ticked
    body.settle(0.125, 100);
    CHECK(body.current().at(AxisId(30)) == 0.8);
    CHECK(body.current().at(AxisId(16)) == 0.2);
}

TEST_CASE("canonical pose JSON uses six decimals") {
    Pose p = Pose::neutral();
    std::string json = pose_to_json(p);
    CHECK(json.find("0.500000") != std::string::npos);
    CHECK(json.find("\"values\"") != std::string::npos);

    std::string spec_json = body_spec_to_json(default_body_spec());
    CHECK(spec_json.find("\"label\":\"neck_yaw\"") != std::string::npos);
    CHECK(spec_json.find("\"max_rate\":1.000000") != std::string::npos);
}
