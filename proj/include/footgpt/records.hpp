#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "footgpt/errors.hpp"
#include "footgpt/util.hpp"

namespace footgpt {

// The 11 tracked in-match event types. Everything else in the raw feed is
// dropped at ingest and counted in the discard report.
enum class EventType {
    AirDuel,
    GroundLooseBallDuel,
    GroundDefendingDuel,
    GroundAttackingDuel,
    Touch,
    Clearance,
    Shot,
    SimplePass,
    HighPass,
    HeadPass,
    Acceleration,
};

constexpr int kEventTypeCount = 11;

inline const std::array<std::string_view, kEventTypeCount>& event_type_names() {
    static const std::array<std::string_view, kEventTypeCount> names = {
        "Air duel",
        "Ground loose ball duel",
        "Ground defending duel",
        "Ground attacking duel",
        "Touch",
        "Clearance",
        "Shot",
        "Simple pass",
        "High pass",
        "Head pass",
        "Acceleration",
    };
    return names;
}

inline std::string_view to_string(EventType t) {
    return event_type_names()[static_cast<int>(t)];
}

inline std::optional<EventType> event_type_from_string(std::string_view name) {
    const auto& names = event_type_names();
    for (int i = 0; i < kEventTypeCount; ++i) {
        if (names[i] == name) return static_cast<EventType>(i);
    }
    return std::nullopt;
}

inline const std::array<EventType, kEventTypeCount>& all_event_types() {
    static const std::array<EventType, kEventTypeCount> all = {
        EventType::AirDuel,        EventType::GroundLooseBallDuel,
        EventType::GroundDefendingDuel, EventType::GroundAttackingDuel,
        EventType::Touch,          EventType::Clearance,
        EventType::Shot,           EventType::SimplePass,
        EventType::HighPass,       EventType::HeadPass,
        EventType::Acceleration,
    };
    return all;
}

struct PitchPoint {
    double x_pct = 0.0;  // percent from the top-left corner, horizontal
    double y_pct = 0.0;  // percent from the top-left corner, vertical
};

// One tagged in-match action. At least one of source/dest is present.
struct EventRecord {
    Id event_id = 0;
    Id match_id = 0;
    Id player_id = 0;
    Id team_id = 0;
    EventType event_type = EventType::Touch;
    std::optional<PitchPoint> source;
    std::optional<PitchPoint> dest;
};

enum class ImpactKind { Goal, OwnGoal, YellowCard, RedCard, Substitution };

inline std::optional<ImpactKind> impact_kind_from_string(std::string_view s) {
    if (s == "goal") return ImpactKind::Goal;
    if (s == "own_goal") return ImpactKind::OwnGoal;
    if (s == "yellow_card") return ImpactKind::YellowCard;
    if (s == "red_card") return ImpactKind::RedCard;
    if (s == "substitution") return ImpactKind::Substitution;
    return std::nullopt;
}

struct LineupEntry {
    Id player_id = 0;
    bool starter = false;
    int minute_on = 0;
    int minute_off = 0;
};

struct ImpactfulEvent {
    ImpactKind kind = ImpactKind::Goal;
    Id player_id = 0;
    int minute = 0;
};

struct RawMatch {
    Id match_id = 0;
    int gameweek = 0;
    std::string date;  // ISO-8601
    Id home_team_id = 0;
    Id away_team_id = 0;
    // Optional so that a feed without scores parses; tables construction
    // rejects score-less matches with an integrity error.
    std::optional<int> home_goals;
    std::optional<int> away_goals;
    std::vector<LineupEntry> lineups;
    std::vector<ImpactfulEvent> impactful_events;
};

struct TeamInfo {
    Id team_id = 0;
    std::string name;
    std::string competition;
};

struct PlayerInfo {
    Id player_id = 0;
    std::string name;
    Id current_team_id = 0;
    std::string position;
    int age = 0;
};

// Per-reason drop counts from parsing. Matches and events are tracked
// separately where a whole match was filtered.
struct DiscardReport {
    std::int64_t type_excluded = 0;        // events with a type outside the 11
    std::int64_t coordinates_missing = 0;  // anchor coordinate absent
    std::int64_t gameweek_filtered_matches = 0;
    std::int64_t gameweek_filtered_events = 0;
    std::int64_t league_filtered_matches = 0;
    std::int64_t league_filtered_events = 0;

    std::int64_t dropped_events_total() const {
        return type_excluded + coordinates_missing + gameweek_filtered_events +
               league_filtered_events;
    }
    bool all_zero() const {
        return type_excluded == 0 && coordinates_missing == 0 &&
               gameweek_filtered_matches == 0 && gameweek_filtered_events == 0 &&
               league_filtered_matches == 0 && league_filtered_events == 0;
    }
};

// Immutable result of parsing the four raw files, restricted to one league
// and the configured gameweek window. Ordering is fixed: matches by
// (gameweek, match_id), events by (gameweek, match_id, event_id), teams and
// players by id.
struct RawDataset {
    std::string league;
    std::vector<RawMatch> matches;
    std::vector<EventRecord> events;
    std::vector<TeamInfo> teams;      // league teams only
    std::vector<PlayerInfo> players;  // all parsed players
    DiscardReport discard;

    int max_gameweek() const {
        int g = 0;
        for (const auto& m : matches) g = std::max(g, m.gameweek);
        return g;
    }
};

}  // namespace footgpt
