#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace altersim {

inline constexpr int kAxisCount = 43;

// One of the 43 controllable joint channels, indexed 1..43.
class AxisId {
public:
    explicit AxisId(int index) : index_(index) {
        if (index < 1 || index > kAxisCount) {
            throw std::out_of_range("AxisId: index " + std::to_string(index) +
                                    " outside 1.." + std::to_string(kAxisCount));
        }
    }

    static std::optional<AxisId> try_make(int index) {
        if (index < 1 || index > kAxisCount) return std::nullopt;
        return AxisId(index);
    }

    int value() const { return index_; }
    // Zero-based position for array indexing.
    std::size_t offset() const { return static_cast<std::size_t>(index_ - 1); }

    friend bool operator==(AxisId a, AxisId b) { return a.index_ == b.index_; }
    friend bool operator!=(AxisId a, AxisId b) { return a.index_ != b.index_; }
    friend bool operator<(AxisId a, AxisId b) { return a.index_ < b.index_; }

private:
    int index_;
};

// Body regions: 1-12 neck up, 13-15 abdomen, 16-28 left side,
// 29-41 right side, 42-43 whole-body lift and turn.
enum class AxisGroup {
    HeadNeck,
    Abdomen,
    LeftSide,
    RightSide,
    WholeBody,
};

inline constexpr std::array<AxisGroup, 5> kAllGroups = {
    AxisGroup::HeadNeck, AxisGroup::Abdomen, AxisGroup::LeftSide,
    AxisGroup::RightSide, AxisGroup::WholeBody};

AxisGroup axis_group(AxisId id);

std::string_view group_name(AxisGroup g);
std::string_view group_display_name(AxisGroup g);
std::optional<AxisGroup> group_from_name(std::string_view name);

// Axis indices belonging to a group, ascending.
std::vector<int> group_axes(AxisGroup g);

// Static description of one joint channel. Positions are normalized command
// units; the platform's physical units and ranges are not published, so the
// defaults span [0, 1] with a full-range slew of one second.
struct AxisSpec {
    AxisId id;
    std::string label;
    AxisGroup group;
    double min = 0.0;
    double max = 1.0;
    double max_rate = 1.0; // normalized units per second

    AxisSpec(AxisId id_, std::string label_, AxisGroup group_, double min_ = 0.0,
             double max_ = 1.0, double max_rate_ = 1.0)
        : id(id_), label(std::move(label_)), group(group_), min(min_), max(max_), max_rate(max_rate_) {
        if (!(min < max)) throw std::invalid_argument("AxisSpec: min must be < max");
        if (!(max_rate > 0.0)) throw std::invalid_argument("AxisSpec: max_rate must be > 0");
    }
};

// The full 43-axis description.
class BodySpec {
public:
    explicit BodySpec(std::vector<AxisSpec> axes);

    const AxisSpec& axis(AxisId id) const { return axes_[id.offset()]; }
    const AxisSpec& axis(int index) const { return axes_[AxisId(index).offset()]; }
    const std::vector<AxisSpec>& axes() const { return axes_; }

private:
    std::vector<AxisSpec> axes_;
};

// The canonical 43-axis body with invented-but-plausible labels and uniform
// default ranges and rates.
BodySpec default_body_spec();

} // namespace altersim
