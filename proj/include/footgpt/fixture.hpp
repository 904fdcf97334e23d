#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "footgpt/errors.hpp"
#include "footgpt/pitch_grid.hpp"
#include "footgpt/records.hpp"
#include "footgpt/util.hpp"

namespace footgpt {

struct FixtureFiles {
    std::string matches_json;
    std::string events_json;
    std::string teams_json;
    std::string players_json;
};

struct FixtureOptions {
    // Scales per-type event volume; 0 generates a schedule with no touch data,
    // which is enough for standings work and keeps bulk property runs fast.
    double event_scale = 1.0;
    std::string competition = "Italy";
};

namespace detail {

// 20 x 20 fixed-length syllable grid gives 400 distinct single-word names;
// equal lengths rule out prefix collisions between different pairs.
inline std::string fixture_base_name(int t) {
    static const std::array<const char*, 20> heads = {
        "Alba", "Bren", "Cava", "Dora", "Enna", "Flor", "Gavi", "Iria",
        "Luna", "Melf", "Nola", "Onda", "Pesa", "Quar", "Rend", "Sava",
        "Tora", "Urbe", "Vada", "Zena"};
    static const std::array<const char*, 20> tails = {
        "nova", "mare", "alto", "lina", "mont", "pole", "vera", "rena",
        "sole", "tura", "vale", "zolo", "brio", "osta", "pina", "goro",
        "lano", "sero", "vico", "dona"};
    return std::string(heads[t % 20]) + tails[(t / 20) % 20];
}

inline std::string fixture_date(int gameweek) {
    static const std::array<int, 12> month_days = {31, 28, 31, 30, 31, 30,
                                                   31, 31, 30, 31, 30, 31};
    int year = 2017;
    int month = 8;
    int day = 19 + (gameweek - 1) * 7;
    while (day > month_days[month - 1]) {
        day -= month_days[month - 1];
        ++month;
        if (month > 12) {
            month = 1;
            ++year;
        }
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

}  // namespace detail

// Deterministic synthetic league: a circle-method round robin with seeded
// scores, matching goal events, lineups and per-type event streams, in the
// same schema the real feeds use.
inline FixtureFiles fixture_gen(int n_teams, int n_gameweeks, std::uint64_t seed,
                                const FixtureOptions& options = {}) {
    if (n_teams < 2 || n_teams % 2 != 0) {
        throw DomainError("fixture needs an even team count of at least 2");
    }
    if (n_teams > 400) throw DomainError("fixture supports at most 400 teams");
    if (n_gameweeks < 1) throw DomainError("fixture needs at least one gameweek");

    SplitMix64 rng(seed);
    nlohmann::ordered_json teams = nlohmann::json::array();
    nlohmann::ordered_json players = nlohmann::json::array();
    const auto team_id_of = [](int t) { return 1000 + t; };
    const auto player_id_of = [&](int t, int j) {
        return static_cast<Id>(team_id_of(t)) * 100 + j;
    };
    constexpr int kSquadSize = 13;

    for (int t = 0; t < n_teams; ++t) {
        const std::string base = detail::fixture_base_name(t);
        teams.push_back({{"team_id", team_id_of(t)},
                         {"name", base + " Calcio"},
                         {"competition", options.competition}});
        for (int j = 0; j < kSquadSize; ++j) {
            const char* position = j == 0 ? "GK" : j < 5 ? "DF" : j < 9 ? "MF" : "FW";
            players.push_back({{"player_id", player_id_of(t, j)},
                               {"name", base + " Player " + std::to_string(j + 1)},
                               {"current_team_id", team_id_of(t)},
                               {"position", position},
                               {"age", 19 + static_cast<int>((t * 13 + j) % 17)}});
        }
    }

    struct TypeRate {
        EventType type;
        int base;
    };
    static const std::array<TypeRate, 11> rates = {{
        {EventType::SimplePass, 22},
        {EventType::Touch, 12},
        {EventType::HighPass, 8},
        {EventType::GroundDefendingDuel, 6},
        {EventType::GroundAttackingDuel, 6},
        {EventType::HeadPass, 5},
        {EventType::GroundLooseBallDuel, 4},
        {EventType::AirDuel, 4},
        {EventType::Clearance, 3},
        {EventType::Shot, 3},
        {EventType::Acceleration, 2},
    }};

    nlohmann::ordered_json matches = nlohmann::json::array();
    nlohmann::ordered_json events = nlohmann::json::array();
    Id next_event_id = 1;
    const int rounds_per_cycle = n_teams - 1;

    const auto emit_team_events = [&](Id match_id, int t) {
        for (const auto& [type, base] : rates) {
            const int effective =
                static_cast<int>(std::lround(base * options.event_scale));
            if (effective <= 0) continue;
            const int count =
                effective + static_cast<int>(rng.next_below(effective / 2 + 1));
            for (int c = 0; c < count; ++c) {
                const int scorer = static_cast<int>(rng.next_below(12));
                nlohmann::ordered_json ev;
                ev["event_id"] = next_event_id++;
                ev["match_id"] = match_id;
                ev["player_id"] = player_id_of(t, scorer);
                ev["team_id"] = team_id_of(t);
                ev["event_type"] = std::string(to_string(type));
                const double sx = rng.next_below(10001) / 100.0;
                const double sy = rng.next_below(10001) / 100.0;
                const double dx = rng.next_below(10001) / 100.0;
                const double dy = rng.next_below(10001) / 100.0;
                const bool drop_anchor = rng.next_below(25) == 0;
                const bool pass = anchor_for(type) == AnchorKind::Destination;
                if (!(pass && drop_anchor)) {
                    ev["dest_x"] = dx;
                    ev["dest_y"] = dy;
                }
                if (!(!pass && drop_anchor)) {
                    ev["source_x"] = sx;
                    ev["source_y"] = sy;
                }
                events.push_back(std::move(ev));
            }
        }
    };

    for (int gw = 1; gw <= n_gameweeks; ++gw) {
        const int r = (gw - 1) % rounds_per_cycle;
        const bool flip_cycle = ((gw - 1) / rounds_per_cycle) % 2 == 1;
        std::vector<int> pos(n_teams);
        pos[0] = 0;
        for (int s = 1; s < n_teams; ++s) {
            pos[s] = 1 + (s - 1 + r) % (n_teams - 1);
        }
        for (int i = 0; i < n_teams / 2; ++i) {
            int a = pos[i];
            int b = pos[n_teams - 1 - i];
            bool flip = ((r + i) % 2 == 1) != flip_cycle;
            const int home = flip ? b : a;
            const int away = flip ? a : b;
            const Id match_id = 100000 + static_cast<Id>(gw) * 1000 + i;
            const int home_goals = static_cast<int>(rng.next_below(4));
            const int away_goals = static_cast<int>(rng.next_below(3));

            nlohmann::ordered_json lineups = nlohmann::json::array();
            nlohmann::ordered_json impacts = nlohmann::json::array();
            for (int t : {home, away}) {
                for (int j = 0; j < 11; ++j) {
                    lineups.push_back({{"player_id", player_id_of(t, j)},
                                       {"starter", true},
                                       {"minute_on", 0},
                                       {"minute_off", j == 10 ? 60 : 90}});
                }
                lineups.push_back({{"player_id", player_id_of(t, 11)},
                                   {"starter", false},
                                   {"minute_on", 60},
                                   {"minute_off", 90}});
            }
            const auto add_goals = [&](int t, int n) {
                for (int g = 0; g < n; ++g) {
                    const int scorer = 7 + static_cast<int>(rng.next_below(4));
                    impacts.push_back({{"kind", "goal"},
                                       {"player_id", player_id_of(t, scorer)},
                                       {"minute", (11 + g * 17) % 90}});
                }
            };
            add_goals(home, home_goals);
            add_goals(away, away_goals);
            const int yellows = static_cast<int>(rng.next_below(3));
            for (int y = 0; y < yellows; ++y) {
                const int t = y % 2 == 0 ? home : away;
                impacts.push_back({{"kind", "yellow_card"},
                                   {"player_id", player_id_of(t, 1 + y)},
                                   {"minute", 30 + y * 20}});
            }
            if (rng.next_below(20) == 0) {
                impacts.push_back({{"kind", "red_card"},
                                   {"player_id", player_id_of(away, 5)},
                                   {"minute", 77}});
            }

            nlohmann::ordered_json m;
            m["match_id"] = match_id;
            m["gameweek"] = gw;
            m["date"] = detail::fixture_date(gw);
            m["home_team_id"] = team_id_of(home);
            m["away_team_id"] = team_id_of(away);
            m["home_goals"] = home_goals;
            m["away_goals"] = away_goals;
            m["lineups"] = std::move(lineups);
            m["impactful_events"] = std::move(impacts);
            matches.push_back(std::move(m));

            emit_team_events(match_id, home);
            emit_team_events(match_id, away);
        }
    }

    FixtureFiles files;
    files.matches_json = matches.dump(1) + "\n";
    files.events_json = events.dump(1) + "\n";
    files.teams_json = teams.dump(1) + "\n";
    files.players_json = players.dump(1) + "\n";
    return files;
}

inline void write_fixture(const FixtureFiles& files, const std::string& dir) {
    std::filesystem::create_directories(dir);
    write_file(dir + "/matches.json", files.matches_json);
    write_file(dir + "/events.json", files.events_json);
    write_file(dir + "/teams.json", files.teams_json);
    write_file(dir + "/players.json", files.players_json);
}

}  // namespace footgpt
