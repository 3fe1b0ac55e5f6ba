#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "altersim/axis.hpp"
#include "altersim/result.hpp"

namespace altersim {

// Line-oriented command framing between the controller and the body.
// The physical Alter3's serial format is unpublished; this grammar is the
// simulator's own and is normative for golden files (see docs/protocol.md):
//
//   Move: "M <axis> <millis>\n"   axis in 1..43, millis in 0..1000
//   Sync: "S\n"
//   Nop:  "N\n"
//
// Single spaces, decimal integers without zero-padding, trailing newline
// required. millis is the target position scaled by 1000 and rounded.

struct MoveFrame {
    AxisId id;
    int millis; // 0..=1000

    friend bool operator==(const MoveFrame& a, const MoveFrame& b) {
        return a.id == b.id && a.millis == b.millis;
    }
};

struct SyncFrame {
    friend bool operator==(SyncFrame, SyncFrame) { return true; }
};

struct NopFrame {
    friend bool operator==(NopFrame, NopFrame) { return true; }
};

using Frame = std::variant<MoveFrame, SyncFrame, NopFrame>;

inline bool operator==(const Frame& a, const Frame& b) {
    return static_cast<const std::variant<MoveFrame, SyncFrame, NopFrame>&>(a) ==
           static_cast<const std::variant<MoveFrame, SyncFrame, NopFrame>&>(b);
}

Frame make_move(int axis, int millis);

struct WireError {
    enum class Kind {
        UnknownTag,
        AxisRange,
        MillisRange,
        MissingNewline,
        Malformed,
    };
    Kind kind;
    std::string message;
};

std::string_view wire_error_kind_name(WireError::Kind k);

// Encodes one frame as its exact byte sequence.
std::string encode_frame(const Frame& f);

std::string encode_frames(const std::vector<Frame>& frames);

// Decodes exactly one frame; the input must be one complete frame including
// its trailing newline. Never throws on bad input.
Result<Frame, WireError> decode_frame(std::string_view bytes);

// Decodes a concatenated stream of frames and recovers the exact sequence.
Result<std::vector<Frame>, WireError> decode_stream(std::string_view bytes);

} // namespace altersim
