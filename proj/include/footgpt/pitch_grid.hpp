#pragma once

#include <array>
#include <cstdio>
#include <string>

#include "footgpt/errors.hpp"
#include "footgpt/records.hpp"

namespace footgpt {

// Position on a 6x4 partition of the pitch. Columns run 0..5 along the attack
// direction, rows 0..3 across it. Both teams' coordinates are already
// expressed in their own attack frame by the upstream feed, so no flipping
// happens here.
struct Region {
    int col = 0;
    int row = 0;

    bool operator==(const Region&) const = default;
};

constexpr int kGridCols = 6;
constexpr int kGridRows = 4;

// Maps a coordinate in percent of pitch length/width to its region. Cells are
// half-open: a point on an interior boundary belongs to the higher-index
// cell, and the outer edge at 100 is clamped into the last cell.
inline Region locate(double x_pct, double y_pct) {
    if (x_pct < 0.0 || x_pct > 100.0 || y_pct < 0.0 || y_pct > 100.0) {
        throw DomainError("coordinate outside pitch: x=" + std::to_string(x_pct) +
                          " y=" + std::to_string(y_pct));
    }
    int col = static_cast<int>(x_pct / 100.0 * kGridCols);
    int row = static_cast<int>(y_pct / 100.0 * kGridRows);
    if (col >= kGridCols) col = kGridCols - 1;
    if (row >= kGridRows) row = kGridRows - 1;
    return Region{col, row};
}

inline Region locate(const PitchPoint& p) { return locate(p.x_pct, p.y_pct); }

enum class AnchorKind { Source, Destination };

// Pass-like events are anchored where the ball arrives; everything else is
// anchored where the action happens.
inline AnchorKind anchor_for(EventType t) {
    switch (t) {
        case EventType::SimplePass:
        case EventType::HighPass:
        case EventType::HeadPass:
            return AnchorKind::Destination;
        default:
            return AnchorKind::Source;
    }
}

// Region of the event's anchor coordinate. Ingest guarantees the anchor is
// present for every retained event; a missing anchor here is a programming
// error upstream.
inline Region event_region(const EventRecord& e) {
    const AnchorKind kind = anchor_for(e.event_type);
    const auto& point = kind == AnchorKind::Destination ? e.dest : e.source;
    if (!point) {
        throw IntegrityError("event " + std::to_string(e.event_id) +
                             " lacks its anchor coordinate");
    }
    return locate(*point);
}

// Serialized region tag as it appears in generated text, e.g. "[region 2 , 0]".
inline std::string region_tag(Region r) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "[region %d , %d]", r.col, r.row);
    return buf;
}

// Human phrasing for each of the 24 regions, column by column from the
// defending goal line. Row 0 is the leftmost lane seen from the attacking
// team's viewpoint.
inline std::string_view describe(Region r) {
    static const std::array<std::array<std::string_view, kGridRows>, kGridCols>
        table = {{
            {{"Defensive third, near the left corner flag.",
              "Defensive third, center left.",
              "Defensive third, center right.",
              "Defensive third, near the right corner flag."}},
            {{"Defensive center, left wing.",
              "Defensive center, center left.",
              "Defensive center, center right.",
              "Defensive center, right wing."}},
            {{"center, left wing.",
              "center, left of center.",
              "center, right of center.",
              "center, right wing."}},
            {{"center, left.",
              "center, center left.",
              "center, center right.",
              "center, right."}},
            {{"Offensive center, left wing.",
              "Offensive center, center left.",
              "Offensive center, center right.",
              "Offensive center, right wing."}},
            {{"Offensive third, left win.",
              "Offensive third, center left.",
              "Offensive third, center right.",
              "Offensive third, right wing."}},
        }};
    if (r.col < 0 || r.col >= kGridCols || r.row < 0 || r.row >= kGridRows) {
        throw DomainError("region out of range: col=" + std::to_string(r.col) +
                          " row=" + std::to_string(r.row));
    }
    return table[r.col][r.row];
}

}  // namespace footgpt
