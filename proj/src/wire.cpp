#include "altersim/wire.hpp"

namespace altersim {

namespace {

// Strict decimal integer: digits only, no sign, no leading zeros (except "0").
bool parse_strict_int(std::string_view s, long& out) {
    if (s.empty()) return false;
    if (s.size() > 1 && s[0] == '0') return false;
    long v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
        if (v > 1000000) return false; // cap; fields are tiny
    }
    out = v;
    return true;
}

WireError err(WireError::Kind kind, std::string message) {
    return WireError{kind, std::move(message)};
}

} // namespace

Frame make_move(int axis, int millis) {
    if (millis < 0 || millis > 1000) {
        throw std::out_of_range("MoveFrame: millis " + std::to_string(millis) + " outside 0..1000");
    }
    return MoveFrame{AxisId(axis), millis};
}

std::string_view wire_error_kind_name(WireError::Kind k) {
    switch (k) {
        case WireError::Kind::UnknownTag: return "unknown-tag";
        case WireError::Kind::AxisRange: return "axis-range";
        case WireError::Kind::MillisRange: return "millis-range";
        case WireError::Kind::MissingNewline: return "missing-newline";
        case WireError::Kind::Malformed: return "malformed";
    }
    return "unknown";
}

std::string encode_frame(const Frame& f) {
    if (const auto* m = std::get_if<MoveFrame>(&f)) {
        return "M " + std::to_string(m->id.value()) + " " + std::to_string(m->millis) + "\n";
    }
    if (std::holds_alternative<SyncFrame>(f)) return "S\n";
    return "N\n";
}

std::string encode_frames(const std::vector<Frame>& frames) {
    std::string out;
    for (const Frame& f : frames) out += encode_frame(f);
    return out;
}

Result<Frame, WireError> decode_frame(std::string_view bytes) {
    if (bytes.empty()) {
        return err(WireError::Kind::Malformed, "empty input");
    }
    if (bytes.back() != '\n') {
        return err(WireError::Kind::MissingNewline, "frame must end with a newline");
    }
    std::string_view line = bytes.substr(0, bytes.size() - 1);
    if (line.find('\n') != std::string_view::npos) {
        return err(WireError::Kind::Malformed, "decode_frame expects exactly one frame");
    }

    if (line == "S") return Frame{SyncFrame{}};
    if (line == "N") return Frame{NopFrame{}};

    if (line.empty()) {
        return err(WireError::Kind::Malformed, "blank frame");
    }

    char tag = line[0];
    if (tag == 'S' || tag == 'N') {
        return err(WireError::Kind::Malformed,
                   std::string("'") + tag + "' frame takes no fields");
    }
    if (tag != 'M') {
        return err(WireError::Kind::UnknownTag,
                   std::string("unknown frame tag '") + tag + "'");
    }

    // "M <id> <m>" with single spaces, exactly three fields.
    if (line.size() < 2 || line[1] != ' ') {
        return err(WireError::Kind::Malformed, "expected ' ' after 'M'");
    }
    std::string_view rest = line.substr(2);
    std::size_t sp = rest.find(' ');
    if (sp == std::string_view::npos) {
        return err(WireError::Kind::Malformed, "move frame needs axis and millis fields");
    }
    std::string_view id_field = rest.substr(0, sp);
    std::string_view millis_field = rest.substr(sp + 1);
    if (millis_field.find(' ') != std::string_view::npos) {
        return err(WireError::Kind::Malformed, "move frame has trailing content");
    }

    long id_val = 0;
    if (!parse_strict_int(id_field, id_val)) {
        return err(WireError::Kind::Malformed,
                   "bad axis field '" + std::string(id_field) + "'");
    }
    long millis_val = 0;
    if (!parse_strict_int(millis_field, millis_val)) {
        return err(WireError::Kind::Malformed,
                   "bad millis field '" + std::string(millis_field) + "'");
    }
    if (id_val < 1 || id_val > kAxisCount) {
        return err(WireError::Kind::AxisRange,
                   "axis " + std::to_string(id_val) + " outside 1..43");
    }
    if (millis_val < 0 || millis_val > 1000) {
        return err(WireError::Kind::MillisRange,
                   "millis " + std::to_string(millis_val) + " outside 0..1000");
    }
    return Frame{MoveFrame{AxisId(static_cast<int>(id_val)), static_cast<int>(millis_val)}};
}

Result<std::vector<Frame>, WireError> decode_stream(std::string_view bytes) {
    std::vector<Frame> out;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        std::size_t nl = bytes.find('\n', pos);
        if (nl == std::string_view::npos) {
            return err(WireError::Kind::MissingNewline,
                       "trailing bytes without newline at offset " + std::to_string(pos));
        }
        auto frame = decode_frame(bytes.substr(pos, nl - pos + 1));
        if (!frame) {
            WireError e = frame.error();
            e.message += " (at offset " + std::to_string(pos) + ")";
            return e;
        }
        out.push_back(*frame);
        pos = nl + 1;
    }
    return out;
}

} // namespace altersim
