#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "footgpt/ingest.hpp"
#include "footgpt/tables.hpp"

namespace testutil {

using nlohmann::json;

// Fresh empty scratch directory under the system temp root.
inline std::string temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("footgpt_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

inline json stats_teams() {
    return json::array({
        {{"team_id", 1}, {"name", "Arvo United"}, {"competition", "Italy"}},
        {{"team_id", 2}, {"name", "Brindel City"}, {"competition", "Italy"}},
        {{"team_id", 3}, {"name", "Corvett Rovers"}, {"competition", "Italy"}},
        {{"team_id", 4}, {"name", "Durano Town"}, {"competition", "Italy"}},
        {{"team_id", 5}, {"name", "Enso Wanderers"}, {"competition", "Italy"}},
    });
}

inline json stats_players() {
    json out = json::array();
    for (int t = 1; t <= 5; ++t) {
        out.push_back({{"player_id", t * 10},
                       {"name", "Player " + std::to_string(t)},
                       {"current_team_id", t}});
    }
    return out;
}

inline json stats_matches() {
    const auto match = [](int id, int gw, int home, int away, int hg, int ag) {
        return json{{"match_id", id},    {"gameweek", gw},
                    {"date", "2017-08-19"}, {"home_team_id", home},
                    {"away_team_id", away}, {"home_goals", hg},
                    {"away_goals", ag}};
    };
    return json::array({
        match(11, 1, 1, 2, 2, 0),
        match(12, 1, 3, 4, 1, 1),
        match(21, 2, 3, 1, 3, 0),
        match(31, 3, 1, 3, 2, 0),
        match(41, 4, 1, 4, 1, 0),
    });
}

// Hand-placed events backing the decomposition expectations: 10 touches and 3
// passes for team 1 in match 11, 7 touches for team 3 in match 12.
inline json stats_events() {
    json out = json::array();
    long long id = 100;
    const auto touch = [&](int match, int team, double x, double y) {
        out.push_back({{"event_id", ++id},
                       {"match_id", match},
                       {"player_id", team * 10},
                       {"team_id", team},
                       {"event_type", "Touch"},
                       {"source_x", x},
                       {"source_y", y}});
    };
    touch(11, 1, 5, 5);
    touch(11, 1, 10, 10);
    touch(11, 1, 2, 20);
    touch(11, 1, 8, 3);
    touch(11, 1, 20, 10);
    touch(11, 1, 30, 20);
    touch(11, 1, 40, 30);
    touch(11, 1, 55, 60);
    touch(11, 1, 70, 80);
    touch(11, 1, 90, 99);
    const auto pass = [&](int match, int team, double dx, double dy) {
        out.push_back({{"event_id", ++id},
                       {"match_id", match},
                       {"player_id", team * 10},
                       {"team_id", team},
                       {"event_type", "Simple pass"},
                       {"source_x", 99.0},
                       {"source_y", 99.0},
                       {"dest_x", dx},
                       {"dest_y", dy}});
    };
    pass(11, 1, 5, 5);
    pass(11, 1, 1, 1);
    pass(11, 1, 3, 3);
    touch(12, 3, 5, 5);
    touch(12, 3, 10, 10);
    touch(12, 3, 2, 2);
    touch(12, 3, 20, 30);
    touch(12, 3, 30, 40);
    touch(12, 3, 40, 60);
    touch(12, 3, 55, 80);
    return out;
}

// Five teams, four gameweeks, seeded so that standings, progressions,
// averages and decompositions have the hand-computed values asserted in the
// stats tests. Team 5 never plays; teams 2 and 4 miss gameweeks.
inline footgpt::RawDataset stats_league() {
    footgpt::ParseOptions options;
    options.gameweek_max = 10;
    return footgpt::parse_dataset(stats_matches().dump(), stats_events().dump(),
                                  stats_teams().dump(), stats_players().dump(),
                                  options);
}

inline footgpt::Tables stats_tables() { return footgpt::build_tables(stats_league()); }

}  // namespace testutil
