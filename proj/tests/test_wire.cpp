#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "altersim/rng.hpp"
#include "altersim/wire.hpp"

using namespace altersim;

TEST_CASE("encode produces the exact byte grammar") {
    CHECK(encode_frame(make_move(30, 500)) == "M 30 500\n");
    CHECK(encode_frame(make_move(1, 0)) == "M 1 0\n");
    CHECK(encode_frame(make_move(43, 1000)) == "M 43 1000\n");
    CHECK(encode_frame(Frame{SyncFrame{}}) == "S\n");
    CHECK(encode_frame(Frame{NopFrame{}}) == "N\n");
}

TEST_CASE("decode inverts encode on the examples") {
    auto f = decode_frame("M 30 500\n");
    REQUIRE(f.has_value());
    CHECK(*f == make_move(30, 500));
    CHECK(*decode_frame("S\n") == Frame{SyncFrame{}});
    CHECK(*decode_frame("N\n") == Frame{NopFrame{}});
}

TEST_CASE("decode rejects with distinct diagnostics") {
    CHECK(decode_frame("M 44 10\n").error().kind == WireError::Kind::AxisRange);
    CHECK(decode_frame("M 0 10\n").error().kind == WireError::Kind::AxisRange);
    CHECK(decode_frame("M 30 1001\n").error().kind == WireError::Kind::MillisRange);
    CHECK(decode_frame("X 1 2\n").error().kind == WireError::Kind::UnknownTag);
    CHECK(decode_frame("M 30 500").error().kind == WireError::Kind::MissingNewline);
    CHECK(decode_frame("M 30\n").error().kind == WireError::Kind::Malformed);
    CHECK(decode_frame("M 30 500 7\n").error().kind == WireError::Kind::Malformed);
    CHECK(decode_frame("M  30 500\n").error().kind == WireError::Kind::Malformed);
    CHECK(decode_frame("M 030 500\n").error().kind == WireError::Kind::Malformed);
    CHECK(decode_frame("M 30 0500\n").error().kind == WireError::Kind::Malformed);
    CHECK(decode_frame("S 1\n").error().kind == WireError::Kind::Malformed);
    CHECK(decode_frame("\n").error().kind == WireError::Kind::Malformed);
    CHECK(decode_frame("").error().kind == WireError::Kind::Malformed);
}

TEST_CASE("round trip over randomized frames") {
    SplitMix64 gen(7);
    for (int i = 0; i < 20000; ++i) {
        Frame f;
        switch (gen.next_below(4)) {
            case 0: f = SyncFrame{}; break;
            case 1: f = NopFrame{}; break;
            default:
                f = make_move(1 + static_cast<int>(gen.next_below(43)),
                              static_cast<int>(gen.next_below(1001)));
        }
        auto decoded = decode_frame(encode_frame(f));
        REQUIRE(decoded.has_value());
        CHECK(*decoded == f);
    }
}

TEST_CASE("stream decoding recovers the exact frame sequence") {
    SplitMix64 gen(11);
    std::vector<Frame> frames;
    for (int i = 0; i < 500; ++i) {
        if (gen.next_below(5) == 0) {
            frames.push_back(SyncFrame{});
        } else {
            frames.push_back(make_move(1 + static_cast<int>(gen.next_below(43)),
                                       static_cast<int>(gen.next_below(1001))));
        }
    }
    auto decoded = decode_stream(encode_frames(frames));
    REQUIRE(decoded.has_value());
    REQUIRE(decoded->size() == frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        CHECK((*decoded)[i] == frames[i]);
    }

    CHECK(decode_stream("M 1 2\nS\nM 44 0\n").error().kind == WireError::Kind::AxisRange);
    CHECK(decode_stream("S\nM 1 2").error().kind == WireError::Kind::MissingNewline);
}

TEST_CASE("decode never crashes on arbitrary bytes") {
    SplitMix64 gen(13);
    for (int i = 0; i < 20000; ++i) {
        std::string bytes;
        std::size_t len = gen.next_below(24);
        for (std::size_t k = 0; k < len; ++k) {
            bytes.push_back(static_cast<char>(gen.next_below(256)));
        }
        auto r = decode_frame(bytes);
        if (r.has_value()) {
            // Anything that decodes must re-encode to itself.
            CHECK(encode_frame(*r) == bytes);
        } else {
            CHECK(!r.error().message.empty());
        }
    }
}
